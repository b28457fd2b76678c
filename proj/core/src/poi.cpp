#include "portnet/poi.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "portnet/errors.hpp"

namespace portnet {

namespace {

double db20(double magnitude) {
    if (magnitude == 0.0) return -std::numeric_limits<double>::infinity();
    return 20.0 * std::log10(magnitude);
}

double db10(double power) {
    if (std::isnan(power)) return power;
    if (power == 0.0) return -std::numeric_limits<double>::infinity();
    if (power < 0.0) return std::numeric_limits<double>::quiet_NaN();
    return 10.0 * std::log10(power);
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

double wrap_phase_deg(double deg) {
    double w = std::fmod(deg, 360.0);
    if (w <= -180.0) w += 360.0;
    else if (w > 180.0) w -= 360.0;
    return w;
}

const std::vector<std::string>& poi_names() {
    static const std::vector<std::string> names = {
        "input_return_loss_db", "insertion_loss_db", "output_return_loss_db",
        "insertion_phase_deg",  "transducer_gain_db", "power_gain_db",
        "available_gain_db",    "rollett_k",          "stability_mu",
    };
    return names;
}

double PoiVector::by_name(const std::string& name) const {
    if (name == "input_return_loss_db") return input_return_loss_db;
    if (name == "insertion_loss_db") return insertion_loss_db;
    if (name == "output_return_loss_db") return output_return_loss_db;
    if (name == "insertion_phase_deg") return insertion_phase_deg;
    if (name == "transducer_gain_db") return transducer_gain_db;
    if (name == "power_gain_db") return power_gain_db;
    if (name == "available_gain_db") return available_gain_db;
    if (name == "rollett_k") return rollett_k;
    if (name == "stability_mu") return stability_mu;
    throw InvalidElement("unknown PoI name '" + name + "'");
}

PoiVector poi_from_s(const SMatrix& s) {
    constexpr double rad_to_deg = 180.0 / std::numbers::pi;
    const double m11 = std::abs(s.s11);
    const double m21 = std::abs(s.s21);
    const double m22 = std::abs(s.s22);
    const double p11 = std::norm(s.s11);
    const double p21 = std::norm(s.s21);
    const double p22 = std::norm(s.s22);

    PoiVector p;
    p.input_return_loss_db = db20(m11);
    p.insertion_loss_db = db20(m21);
    p.output_return_loss_db = db20(m22);
    p.insertion_phase_deg =
        m21 == 0.0 ? 0.0 : wrap_phase_deg(std::arg(s.s21) * rad_to_deg);
    p.transducer_gain_db = db10(p21);
    // undefined marker (NaN) when the reflection magnitude reaches 1
    p.power_gain_db = p11 >= 1.0 ? std::numeric_limits<double>::quiet_NaN()
                                 : db10(p21 / (1.0 - p11));
    p.available_gain_db = p22 >= 1.0 ? std::numeric_limits<double>::quiet_NaN()
                                     : db10(p21 / (1.0 - p22));

    const Complex delta = s.determinant();
    const double cross = std::abs(s.s12 * s.s21);
    p.rollett_k = cross == 0.0 ? std::numeric_limits<double>::infinity()
                               : (1.0 - p11 - p22 + std::norm(delta)) / (2.0 * cross);
    const double mu_den = std::abs(s.s22 - delta * std::conj(s.s11)) + cross;
    p.stability_mu = mu_den == 0.0 ? std::numeric_limits<double>::infinity()
                                   : (1.0 - p11) / mu_den;
    return p;
}

SweepPoi sweep_poi(std::vector<SMatrix> s, FrequencyGrid grid) {
    if (s.size() != grid.size())
        throw SchemaMismatch("sweep needs one S-matrix per grid point");
    SweepPoi out;
    out.grid = std::move(grid);
    out.s = std::move(s);
    out.poi.reserve(out.s.size());
    for (const SMatrix& m : out.s) out.poi.push_back(poi_from_s(m));

    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < out.poi.size(); ++i) {
        const double g = out.poi[i].power_gain_db;
        if (std::isnan(g)) continue;
        if (g > best) {
            best = g;
            out.max_power_gain_frequency = out.grid[i];
        }
    }
    return out;
}

SweepPoi sweep_poi(const Subcircuit& c, const FrequencyGrid& grid, ReferenceImpedance z0) {
    return sweep_poi(sweep_s(c, grid, z0), grid);
}

SweepPoi sweep_poi(const StampedCircuit& c, const FrequencyGrid& grid, ReferenceImpedance z0) {
    return sweep_poi(sweep_s(c, grid, z0), grid);
}

std::string sweep_csv(const SweepPoi& sweep) {
    std::string out = "freq_hz,s11_re,s11_im,s12_re,s12_im,s21_re,s21_im,s22_re,s22_im";
    for (const std::string& name : poi_names()) out += "," + name;
    out += "\n";
    auto db_cell = [](double v) {
        if (std::isinf(v) && v < 0.0) return fmt(kNegInfSentinelDb);
        return fmt(v);
    };
    for (std::size_t i = 0; i < sweep.s.size(); ++i) {
        const SMatrix& s = sweep.s[i];
        const PoiVector& p = sweep.poi[i];
        out += fmt(sweep.grid[i].hertz());
        for (const Complex& e : {s.s11, s.s12, s.s21, s.s22})
            out += "," + fmt(e.real()) + "," + fmt(e.imag());
        out += "," + db_cell(p.input_return_loss_db);
        out += "," + db_cell(p.insertion_loss_db);
        out += "," + db_cell(p.output_return_loss_db);
        out += "," + fmt(p.insertion_phase_deg);
        out += "," + db_cell(p.transducer_gain_db);
        out += "," + db_cell(p.power_gain_db);
        out += "," + db_cell(p.available_gain_db);
        out += "," + fmt(p.rollett_k);
        out += "," + fmt(p.stability_mu);
        out += "\n";
    }
    return out;
}

} // namespace portnet
