#include "portnet/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "json_util.hpp"

namespace portnet {

using detail::fmt17;
using detail::json;

int encoding_width(SEncoding e) {
    switch (e) {
        case SEncoding::Full8: return 8;
        case SEncoding::Reciprocal6: return 6;
        case SEncoding::Symmetric4: return 4;
    }
    return 0;
}

const char* encoding_name(SEncoding e) {
    switch (e) {
        case SEncoding::Full8: return "full8";
        case SEncoding::Reciprocal6: return "reciprocal6";
        case SEncoding::Symmetric4: return "symmetric4";
    }
    return "?";
}

SEncoding encoding_from_name(const std::string& name) {
    if (name == "full8") return SEncoding::Full8;
    if (name == "reciprocal6") return SEncoding::Reciprocal6;
    if (name == "symmetric4") return SEncoding::Symmetric4;
    throw SchemaMismatch("unknown S encoding '" + name + "'");
}

void encode_s(const SMatrix& s, SEncoding e, std::span<double> out) {
    switch (e) {
        case SEncoding::Full8:
            out[0] = s.s11.real(); out[1] = s.s11.imag();
            out[2] = s.s12.real(); out[3] = s.s12.imag();
            out[4] = s.s21.real(); out[5] = s.s21.imag();
            out[6] = s.s22.real(); out[7] = s.s22.imag();
            break;
        case SEncoding::Reciprocal6:
            out[0] = s.s11.real(); out[1] = s.s11.imag();
            out[2] = s.s21.real(); out[3] = s.s21.imag();
            out[4] = s.s22.real(); out[5] = s.s22.imag();
            break;
        case SEncoding::Symmetric4:
            out[0] = s.s11.real(); out[1] = s.s11.imag();
            out[2] = s.s21.real(); out[3] = s.s21.imag();
            break;
    }
}

SMatrix decode_s(std::span<const double> f, SEncoding e) {
    SMatrix s;
    switch (e) {
        case SEncoding::Full8:
            s.s11 = {f[0], f[1]};
            s.s12 = {f[2], f[3]};
            s.s21 = {f[4], f[5]};
            s.s22 = {f[6], f[7]};
            break;
        case SEncoding::Reciprocal6:
            s.s11 = {f[0], f[1]};
            s.s21 = {f[2], f[3]};
            s.s12 = s.s21;
            s.s22 = {f[4], f[5]};
            break;
        case SEncoding::Symmetric4:
            s.s11 = {f[0], f[1]};
            s.s21 = {f[2], f[3]};
            s.s12 = s.s21;
            s.s22 = s.s11;
            break;
    }
    return s;
}

std::vector<std::string> encoding_feature_names(SEncoding e, const std::string& prefix) {
    static const char* full[] = {"s11_re", "s11_im", "s12_re", "s12_im",
                                 "s21_re", "s21_im", "s22_re", "s22_im"};
    static const char* recip[] = {"s11_re", "s11_im", "s21_re", "s21_im", "s22_re", "s22_im"};
    static const char* sym[] = {"s11_re", "s11_im", "s21_re", "s21_im"};
    std::vector<std::string> out;
    const char** base = e == SEncoding::Full8 ? full : (e == SEncoding::Reciprocal6 ? recip : sym);
    for (int i = 0; i < encoding_width(e); ++i) out.push_back(prefix + base[i]);
    return out;
}

namespace {

double sample_param(const DesignParameter& p, Rng& rng) {
    if (p.log_scale) return std::exp(rng.uniform(std::log(p.lo), std::log(p.hi)));
    return rng.uniform(p.lo, p.hi);
}

bool enetwork_has_vccs(const Subcircuit& c) {
    for (const Element& e : c.elements)
        if (e.kind == ElementKind::Vccs) return true;
    return false;
}

} // namespace

SubDataset gen_sub_dataset(const Subcircuit& enetwork, const std::string& label,
                           std::span<const DesignParameter> params, const SamplerConfig& cfg,
                           Frequency f, ReferenceImpedance z0) {
    if (cfg.count <= 0) throw SamplingError("sample count must be positive");
    for (const DesignParameter& p : params)
        if (!enetwork.port1.node.empty() && p.owner != label)
            throw SamplingError("parameter '" + p.name + "' does not belong to E-network '" +
                                label + "'");

    SubDataset ds;
    ds.topology_key = enetwork.topology_key();
    ds.enetwork_label = label;
    ds.frequency_hz = f.hertz();
    ds.encoding = enetwork_has_vccs(enetwork) ? SEncoding::Full8 : SEncoding::Reciprocal6;
    ds.seed = cfg.seed;
    for (const DesignParameter& p : params) ds.param_names.push_back(p.name);

    const int s_width = encoding_width(ds.encoding);
    const int n_params = static_cast<int>(params.size());
    const bool fcol = cfg.frequency_feature;
    // a fully fixed network has a single distinct row no matter the count
    const int rows = params.empty() ? 1 : cfg.count;
    ds.x = RowMatrix(rows, n_params + (fcol ? 1 : 0));
    ds.s = RowMatrix(rows, s_width);
    if (fcol) ds.param_names.push_back("log10_freq");

    Rng rng(cfg.seed);
    Subcircuit work = enetwork;
    const long budget = static_cast<long>(cfg.count) * std::max(1, cfg.resample_budget);
    long attempts = 0;
    for (int r = 0; r < rows;) {
        if (attempts++ > budget)
            throw SamplingError("solver kept failing while sampling E-network '" + label + "'");
        std::vector<double> values(n_params);
        for (int i = 0; i < n_params; ++i) values[i] = sample_param(params[i], rng);
        for (int i = 0; i < n_params; ++i)
            for (Element& e : work.elements)
                if (e.name == params[i].name) e.value = values[i];
        SMatrix s;
        try {
            s = mna_two_port(work, f, z0);
        } catch (const Error&) {
            continue;  // resample
        }
        for (int i = 0; i < n_params; ++i) ds.x.at(r, i) = values[i];
        if (fcol) ds.x.at(r, n_params) = std::log10(f.hertz());
        encode_s(s, ds.encoding, ds.s.row(r));
        ++r;
    }
    return ds;
}

namespace {

std::string member_topology_key(const Partition& p) {
    std::string key;
    for (const Enetwork& en : p.enetworks) key += en.topology_key + "|";
    key += "xr:";
    for (const auto& [name, value] : p.residual_params) key += name + ",";
    return key;
}

SMatrix random_passive_reciprocal(Rng& rng) {
    auto disk = [&rng]() {
        const double r = std::sqrt(rng.uniform());
        const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
        return Complex(r * std::cos(t), r * std::sin(t));
    };
    for (;;) {
        SMatrix s;
        s.s11 = disk();
        s.s21 = disk();
        s.s12 = s.s21;
        s.s22 = disk();
        if (s.spectral_norm() <= 1.0) return s;
    }
}

} // namespace

MainDataset gen_main_dataset(std::span<const Netlist> family, const SamplerConfig& cfg,
                             Frequency f, ReferenceImpedance z0,
                             std::span<const std::string> targets) {
    if (family.empty()) throw SamplingError("topology family is empty");
    if (cfg.count <= 0) throw SamplingError("sample count must be positive");
    if (targets.empty()) throw SamplingError("at least one PoI target is required");
    for (const std::string& t : targets) PoiVector{}.by_name(t);  // validates names

    struct Member {
        Netlist net;
        Partition part;
        std::vector<DesignParameter> params;
    };
    std::vector<Member> members;
    for (const Netlist& n : family) {
        Member m{n, partition(n), enumerate_parameters(n)};
        for (const Enetwork& en : m.part.enetworks)
            for (const Element& e : en.circuit.elements)
                if (e.kind == ElementKind::Switch)
                    throw SamplingError("switch '" + e.name +
                                        "' inside E-network '" + en.label +
                                        "' is not samplable; move it to the residual set");
        members.push_back(std::move(m));
    }

    const std::size_t n_slots = members[0].part.enetworks.size();
    std::vector<std::string> xr_names;
    for (const auto& [name, value] : members[0].part.residual_params) xr_names.push_back(name);
    for (const Member& m : members) {
        if (m.part.enetworks.size() != n_slots)
            throw SamplingError("family members disagree on E-network count (" +
                                std::to_string(n_slots) + " vs " +
                                std::to_string(m.part.enetworks.size()) + ")");
        std::vector<std::string> names;
        for (const auto& [name, value] : m.part.residual_params) names.push_back(name);
        if (names != xr_names)
            throw SamplingError("family members disagree on residual parameters");
    }

    MainDataset ds;
    ds.frequency_hz = f.hertz();
    ds.n_enetworks = static_cast<int>(n_slots);
    ds.seed = cfg.seed;
    bool any_vccs = false;
    for (const Member& m : members)
        for (const Enetwork& en : m.part.enetworks) any_vccs |= enetwork_has_vccs(en.circuit);
    ds.encoding = any_vccs ? SEncoding::Full8 : SEncoding::Reciprocal6;
    ds.s_width = encoding_width(ds.encoding);
    ds.xr_width = static_cast<int>(xr_names.size());
    for (std::size_t i = 0; i < n_slots; ++i)
        for (const std::string& name :
             encoding_feature_names(ds.encoding, "s" + std::to_string(i + 1) + "_"))
            ds.feature_names.push_back(name);
    for (const std::string& name : xr_names) ds.feature_names.push_back(name);
    if (cfg.frequency_feature) ds.feature_names.push_back("log10_freq");
    ds.target_names.assign(targets.begin(), targets.end());
    for (const Member& m : members) ds.topology_keys.push_back(member_topology_key(m.part));

    const int n_feats = static_cast<int>(ds.feature_names.size());
    const int n_targets = static_cast<int>(ds.target_names.size());
    ds.x = RowMatrix(cfg.count, n_feats);
    ds.y = RowMatrix(cfg.count, n_targets);
    ds.topo_index.resize(cfg.count);

    Rng rng(cfg.seed);
    const long budget = static_cast<long>(cfg.count) * std::max(1, cfg.resample_budget);
    long attempts = 0;

    for (int r = 0; r < cfg.count;) {
        if (attempts++ > budget)
            throw SamplingError("solver kept failing while sampling the topology family");

        const int t = cfg.s_source == SamplerConfig::SSource::FromTopologies
                          ? static_cast<int>(rng.integer(members.size()))
                          : 0;
        Member work = members[t];

        try {
            std::vector<SMatrix> slot_s(n_slots);
            std::vector<double> xr(ds.xr_width);
            PoiVector poi;

            if (cfg.s_source == SamplerConfig::SSource::FromTopologies) {
                for (const DesignParameter& p : work.params)
                    work.net.set_value(p.name, sample_param(p, rng));
                for (NetlistEntry& e : work.net.entries)
                    if (e.element.kind == ElementKind::Switch && e.enetwork.empty())
                        e.element.on = rng.bernoulli(0.5);
                const Partition part = partition(work.net);
                for (std::size_t i = 0; i < n_slots; ++i)
                    slot_s[i] = mna_two_port(part.enetworks[i].circuit, f, z0);
                for (int i = 0; i < ds.xr_width; ++i) xr[i] = part.residual_params[i].second;
                poi = poi_from_s(mna_two_port(whole_circuit(work.net), f, z0));
            } else {
                for (std::size_t i = 0; i < n_slots; ++i) slot_s[i] = random_passive_reciprocal(rng);
                for (const DesignParameter& p : work.params)
                    if (p.owner == "residual") work.net.set_value(p.name, sample_param(p, rng));
                for (NetlistEntry& e : work.net.entries)
                    if (e.element.kind == ElementKind::Switch && e.enetwork.empty())
                        e.element.on = rng.bernoulli(0.5);
                const Partition part = partition(work.net);
                for (int i = 0; i < ds.xr_width; ++i) xr[i] = part.residual_params[i].second;
                poi = poi_from_s(mna_two_port(reduced_circuit(work.net, part, slot_s, z0), f, z0));
            }

            for (int i = 0; i < n_targets; ++i) {
                const double v = poi.by_name(ds.target_names[i]);
                if (!std::isfinite(v)) throw SamplingError("non-finite target");  // resample
                ds.y.at(r, i) = v;
            }
            auto row = ds.x.row(r);
            for (std::size_t i = 0; i < n_slots; ++i)
                encode_s(slot_s[i], ds.encoding, row.subspan(i * ds.s_width, ds.s_width));
            for (int i = 0; i < ds.xr_width; ++i) row[n_slots * ds.s_width + i] = xr[i];
            if (cfg.frequency_feature) row[n_feats - 1] = std::log10(f.hertz());
            ds.topo_index[r] = t;
            ++r;
        } catch (const Error&) {
            continue;  // resample
        }
    }
    return ds;
}

std::vector<double> reconstruct_targets(const Netlist& member, const MainDataset& ds, int row,
                                        ReferenceImpedance z0) {
    Netlist work = member;
    auto x = ds.x.row(row);
    const int n = ds.n_enetworks;
    for (int i = 0; i < ds.xr_width; ++i) {
        const std::string& name = ds.feature_names[n * ds.s_width + i];
        const double v = x[n * ds.s_width + i];
        const NetlistEntry* e = work.find(name);
        if (!e) throw SchemaMismatch("residual element '" + name + "' missing from netlist");
        if (e->element.kind == ElementKind::Switch)
            work.set_switch(name, v > 0.5);
        else
            work.set_value(name, v);
    }
    const Partition part = partition(work);
    std::vector<SMatrix> slot_s(n);
    for (int i = 0; i < n; ++i)
        slot_s[i] = decode_s(x.subspan(static_cast<std::size_t>(i) * ds.s_width, ds.s_width),
                             ds.encoding);
    const Frequency f(ds.frequency_hz);
    const PoiVector poi = poi_from_s(mna_two_port(reduced_circuit(work, part, slot_s, z0), f, z0));
    std::vector<double> out;
    for (const std::string& t : ds.target_names) out.push_back(poi.by_name(t));
    return out;
}

SplitIndices split_rows(int n_rows, std::span<const int> strata, double val_frac,
                        double test_frac, std::uint64_t seed) {
    if (!(val_frac > 0.0) || !(test_frac > 0.0) || val_frac + test_frac >= 1.0)
        throw SamplingError("split fractions must be in (0,1) and sum below 1");
    if (val_frac * n_rows < 1.0 || test_frac * n_rows < 1.0)
        throw SamplingError("dataset too small for the requested split fractions");
    if (!strata.empty() && static_cast<int>(strata.size()) != n_rows)
        throw SamplingError("strata size does not match row count");

    std::map<int, std::vector<int>> groups;
    if (strata.empty()) {
        groups[0].resize(n_rows);
        for (int i = 0; i < n_rows; ++i) groups[0][i] = i;
    } else {
        for (int i = 0; i < n_rows; ++i) groups[strata[i]].push_back(i);
    }

    Rng rng(seed);
    SplitIndices out;
    for (auto& [stratum, rows] : groups) {
        for (std::size_t i = rows.size(); i > 1; --i)
            std::swap(rows[i - 1], rows[rng.integer(i)]);
        const int n = static_cast<int>(rows.size());
        // best effort per stratum: every stratum reaches the test set
        const int n_test = std::min(n, std::max(1, static_cast<int>(std::llround(test_frac * n))));
        const int n_val =
            std::min(n - n_test, std::max(1, static_cast<int>(std::llround(val_frac * n))));
        int k = 0;
        for (int i = 0; i < n_test; ++i) out.test.push_back(rows[k++]);
        for (int i = 0; i < n_val; ++i) out.val.push_back(rows[k++]);
        while (k < n) out.train.push_back(rows[k++]);
    }
    if (out.train.empty() || out.val.empty() || out.test.empty())
        throw SamplingError("dataset too small for the requested split fractions");
    std::sort(out.train.begin(), out.train.end());
    std::sort(out.val.begin(), out.val.end());
    std::sort(out.test.begin(), out.test.end());
    return out;
}

namespace {

std::string matrix_row_csv(const RowMatrix& m, int r) {
    std::string out;
    for (int c = 0; c < m.cols; ++c) {
        if (c) out += ",";
        out += fmt17(m.at(r, c));
    }
    return out;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_cell(const std::string& s, const std::string& context) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw IoError("bad numeric cell '" + s + "' in " + context);
    }
}

} // namespace

void save_sub_dataset(const std::filesystem::path& path, const SubDataset& ds) {
    json header;
    header["schema"] = "portnet-sub-v1";
    header["topology_key"] = ds.topology_key;
    header["enetwork"] = ds.enetwork_label;
    header["frequency_hz"] = ds.frequency_hz;
    header["encoding"] = encoding_name(ds.encoding);
    header["seed"] = ds.seed;
    header["param_names"] = ds.param_names;

    std::string out = header.dump() + "\n";
    for (std::size_t i = 0; i < ds.param_names.size(); ++i) {
        if (i) out += ",";
        out += ds.param_names[i];
    }
    for (const std::string& name : encoding_feature_names(ds.encoding, ""))
        out += "," + name;
    out += "\n";
    for (int r = 0; r < ds.x.rows; ++r)
        out += matrix_row_csv(ds.x, r) + "," + matrix_row_csv(ds.s, r) + "\n";
    detail::write_file_atomic(path, out);
}

SubDataset load_sub_dataset(const std::filesystem::path& path) {
    std::istringstream in(detail::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty dataset file: " + path.string());
    const json header = detail::parse_json(line, path.string());
    if (header.value("schema", "") != "portnet-sub-v1")
        throw SchemaMismatch(path.string() + " is not a sub-model dataset");

    SubDataset ds;
    ds.topology_key = header.at("topology_key").get<std::string>();
    ds.enetwork_label = header.at("enetwork").get<std::string>();
    ds.frequency_hz = header.at("frequency_hz").get<double>();
    ds.encoding = encoding_from_name(header.at("encoding").get<std::string>());
    ds.seed = header.at("seed").get<std::uint64_t>();
    ds.param_names = header.at("param_names").get<std::vector<std::string>>();

    std::getline(in, line);  // column names, informational
    const int n_params = static_cast<int>(ds.param_names.size());
    const int s_width = encoding_width(ds.encoding);
    std::vector<double> xbuf, sbuf;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != n_params + s_width)
            throw IoError("wrong column count in " + path.string());
        for (int i = 0; i < n_params; ++i) xbuf.push_back(parse_cell(cells[i], path.string()));
        for (int i = 0; i < s_width; ++i)
            sbuf.push_back(parse_cell(cells[n_params + i], path.string()));
        ++rows;
    }
    ds.x = RowMatrix(rows, n_params);
    ds.x.v = std::move(xbuf);
    ds.s = RowMatrix(rows, s_width);
    ds.s.v = std::move(sbuf);
    return ds;
}

void save_main_dataset(const std::filesystem::path& path, const MainDataset& ds) {
    json header;
    header["schema"] = "portnet-main-v1";
    header["frequency_hz"] = ds.frequency_hz;
    header["n_enetworks"] = ds.n_enetworks;
    header["encoding"] = encoding_name(ds.encoding);
    header["seed"] = ds.seed;
    header["s_width"] = ds.s_width;
    header["xr_width"] = ds.xr_width;
    header["feature_names"] = ds.feature_names;
    header["target_names"] = ds.target_names;
    header["topology_keys"] = ds.topology_keys;

    std::string out = header.dump() + "\n";
    out += "topology";
    for (const std::string& name : ds.feature_names) out += "," + name;
    for (const std::string& name : ds.target_names) out += "," + name;
    out += "\n";
    for (int r = 0; r < ds.x.rows; ++r) {
        out += std::to_string(ds.topo_index[r]);
        out += "," + matrix_row_csv(ds.x, r) + "," + matrix_row_csv(ds.y, r) + "\n";
    }
    detail::write_file_atomic(path, out);
}

MainDataset load_main_dataset(const std::filesystem::path& path) {
    std::istringstream in(detail::read_file(path));
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty dataset file: " + path.string());
    const json header = detail::parse_json(line, path.string());
    if (header.value("schema", "") != "portnet-main-v1")
        throw SchemaMismatch(path.string() + " is not a main-model dataset");

    MainDataset ds;
    ds.frequency_hz = header.at("frequency_hz").get<double>();
    ds.n_enetworks = header.at("n_enetworks").get<int>();
    ds.encoding = encoding_from_name(header.at("encoding").get<std::string>());
    ds.seed = header.at("seed").get<std::uint64_t>();
    ds.s_width = header.at("s_width").get<int>();
    ds.xr_width = header.at("xr_width").get<int>();
    ds.feature_names = header.at("feature_names").get<std::vector<std::string>>();
    ds.target_names = header.at("target_names").get<std::vector<std::string>>();
    ds.topology_keys = header.at("topology_keys").get<std::vector<std::string>>();

    std::getline(in, line);
    const int n_feats = static_cast<int>(ds.feature_names.size());
    const int n_targets = static_cast<int>(ds.target_names.size());
    std::vector<double> xbuf, ybuf;
    int rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const std::vector<std::string> cells = split_csv_line(line);
        if (static_cast<int>(cells.size()) != 1 + n_feats + n_targets)
            throw IoError("wrong column count in " + path.string());
        ds.topo_index.push_back(static_cast<int>(parse_cell(cells[0], path.string())));
        for (int i = 0; i < n_feats; ++i) xbuf.push_back(parse_cell(cells[1 + i], path.string()));
        for (int i = 0; i < n_targets; ++i)
            ybuf.push_back(parse_cell(cells[1 + n_feats + i], path.string()));
        ++rows;
    }
    ds.x = RowMatrix(rows, n_feats);
    ds.x.v = std::move(xbuf);
    ds.y = RowMatrix(rows, n_targets);
    ds.y.v = std::move(ybuf);
    return ds;
}

} // namespace portnet
