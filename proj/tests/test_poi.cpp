#include <doctest.h>

#include <cmath>

#include "portnet/poi.hpp"
#include "testutil.hpp"

using namespace portnet;

TEST_CASE("through network PoI") {
    const SMatrix through{0.0, 1.0, 1.0, 0.0};
    const PoiVector p = poi_from_s(through);
    CHECK(p.insertion_loss_db == doctest::Approx(0.0));
    CHECK(std::isinf(p.input_return_loss_db));
    CHECK(p.input_return_loss_db < 0.0);
    CHECK(p.insertion_phase_deg == doctest::Approx(0.0));
    CHECK(p.transducer_gain_db == doctest::Approx(0.0));  // G_T = 1
    CHECK(p.rollett_k == doctest::Approx(1.0));
}

TEST_CASE("matched attenuator insertion loss") {
    const SMatrix att{0.0, 0.5, 0.5, 0.0};
    const PoiVector p = poi_from_s(att);
    CHECK(p.insertion_loss_db == doctest::Approx(-6.0206).epsilon(1e-4));
    CHECK(p.transducer_gain_db == doctest::Approx(-6.0206).epsilon(1e-4));
}

TEST_CASE("phase wrapping lands in (-180, 180]") {
    CHECK(wrap_phase_deg(181.0) == doctest::Approx(-179.0));
    CHECK(wrap_phase_deg(-181.0) == doctest::Approx(179.0));
    CHECK(wrap_phase_deg(180.0) == doctest::Approx(180.0));
    CHECK(wrap_phase_deg(-180.0) == doctest::Approx(180.0));
    CHECK(wrap_phase_deg(540.0) == doctest::Approx(180.0));

    SMatrix s{0.0, 0.0, std::polar(1.0, 181.0 * std::numbers::pi / 180.0), 0.0};
    CHECK(poi_from_s(s).insertion_phase_deg == doctest::Approx(-179.0).epsilon(1e-9));
}

TEST_CASE("power gain undefined marker when |s11| >= 1") {
    SMatrix s{1.0, 0.1, 0.1, 0.0};
    const PoiVector p = poi_from_s(s);
    CHECK(std::isnan(p.power_gain_db));
    CHECK_FALSE(std::isnan(p.available_gain_db));
}

TEST_CASE("random LC ladders: passivity-consistent gains") {
    Rng rng(5);
    const ReferenceImpedance z0;
    for (int trial = 0; trial < 20; ++trial) {
        const testutil::Ladder ladder = testutil::random_ladder(rng, 5, true);
        for (const Frequency& f : FrequencyGrid::log_spaced(1e3, 15e9, 8)) {
            const SMatrix s = mna_two_port(ladder.circuit, f, z0);
            const PoiVector p = poi_from_s(s);
            CHECK(p.transducer_gain_db <= 1e-9);  // G_T <= 1
            // lossless: G_T = 1 - |S11|^2
            const double gt = std::pow(10.0, p.transducer_gain_db / 10.0);
            CHECK(gt == doctest::Approx(1.0 - std::norm(s.s11)).epsilon(1e-9));
            // symmetric input/output return loss for reciprocal symmetric nets
            if (check_symmetry(s, 1e-12))
                CHECK(p.input_return_loss_db == p.output_return_loss_db);
        }
    }
}

TEST_CASE("series-L lowpass: insertion loss falls with frequency") {
    Subcircuit c;
    c.elements.push_back(Element{"L1", ElementKind::Inductor, "in", "out", "", "", 10e-9, false});
    c.port1 = Port{"in", "0"};
    c.port2 = Port{"out", "0"};
    const SweepPoi sweep = sweep_poi(c, FrequencyGrid::log_spaced(1e6, 15e9, 24), ReferenceImpedance());
    for (std::size_t i = 1; i < sweep.poi.size(); ++i)
        CHECK(sweep.poi[i].insertion_loss_db < sweep.poi[i - 1].insertion_loss_db);
}

TEST_CASE("max power gain frequency is the grid argmax") {
    // two lossy shunt branches: R-L eats power at low frequency, R-C at
    // high frequency, so the power gain peaks inside the band
    Subcircuit c;
    c.elements.push_back(Element{"Rl", ElementKind::Resistor, "in", "a", "", "", 5.0, false});
    c.elements.push_back(Element{"L1", ElementKind::Inductor, "a", "0", "", "", 10e-9, false});
    c.elements.push_back(Element{"Rc", ElementKind::Resistor, "in", "b", "", "", 5.0, false});
    c.elements.push_back(Element{"C1", ElementKind::Capacitor, "b", "0", "", "", 1e-12, false});
    c.elements.push_back(Element{"R3", ElementKind::Resistor, "in", "out", "", "", 20.0, false});
    c.port1 = Port{"in", "0"};
    c.port2 = Port{"out", "0"};

    const FrequencyGrid grid = FrequencyGrid::log_spaced(1e7, 1e11, 64);
    const SweepPoi sweep = sweep_poi(c, grid, ReferenceImpedance());
    REQUIRE(sweep.max_power_gain_frequency.has_value());

    // brute-force argmax over the same grid
    int best = -1;
    double best_gain = -1e300;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double g = sweep.poi[i].power_gain_db;
        if (!std::isnan(g) && g > best_gain) {
            best_gain = g;
            best = static_cast<int>(i);
        }
    }
    REQUIRE(best >= 0);
    CHECK(sweep.max_power_gain_frequency->hertz() == grid[best].hertz());
    // the peak is interior, not a band edge
    CHECK(best > 0);
    CHECK(best + 1 < static_cast<int>(grid.size()));
}

TEST_CASE("sweep csv encodes -inf as the sentinel") {
    std::vector<SMatrix> s{{0.0, 1.0, 1.0, 0.0}};
    const SweepPoi sweep = sweep_poi(std::move(s), FrequencyGrid::linear_spaced(1e9, 2e9, 1));
    const std::string csv = sweep_csv(sweep);
    CHECK(csv.find("freq_hz,s11_re") == 0);
    CHECK(csv.find("-400") != std::string::npos);
}

TEST_CASE("poi name lookup") {
    PoiVector p;
    p.stability_mu = 0.75;
    CHECK(p.by_name("stability_mu") == doctest::Approx(0.75));
    CHECK_THROWS_AS(p.by_name("nonsense"), InvalidElement);
    CHECK(poi_names().size() == 9);
}
