#include <doctest.h>

#include <numbers>

#include "portnet/errors.hpp"
#include "portnet/twoport.hpp"
#include "testutil.hpp"

using namespace portnet;
using testutil::complex_near;

namespace {
const ReferenceImpedance kZ0;

SMatrix random_passive_s(Rng& rng) {
    for (;;) {
        auto disk = [&rng]() {
            const double r = std::sqrt(rng.uniform());
            const double t = rng.uniform(0.0, 2.0 * std::numbers::pi);
            return Complex(r * std::cos(t), r * std::sin(t));
        };
        SMatrix s{disk(), disk(), disk(), disk()};
        if (s.spectral_norm() <= 1.0 && std::abs(s.s21) > 1e-3) return s;
    }
}
} // namespace

TEST_CASE("identity abcd maps to through S") {
    const SMatrix s = abcd_to_s(abcd_identity(), kZ0);
    CHECK(complex_near(s.s11, 0.0, 1e-15));
    CHECK(complex_near(s.s22, 0.0, 1e-15));
    CHECK(complex_near(s.s21, 1.0, 1e-15));
    CHECK(complex_near(s.s12, 1.0, 1e-15));
}

TEST_CASE("series impedance S matches the textbook ratios") {
    // Z in series: S11 = Z/(Z+2 z0), S21 = 2 z0/(Z+2 z0)
    const Complex z{100.0, 25.0};
    const SMatrix s = abcd_to_s(series_impedance(z), kZ0);
    CHECK(complex_near(s.s11, z / (z + 100.0), 1e-14));
    CHECK(complex_near(s.s21, 100.0 / (z + 100.0), 1e-14));
    CHECK(complex_near(s.s11, s.s22, 1e-14));
    CHECK(complex_near(s.s12, s.s21, 1e-14));
}

TEST_CASE("shunt admittance S11") {
    const Complex y{0.004, -0.01};
    const SMatrix s = abcd_to_s(shunt_admittance(y), kZ0);
    CHECK(complex_near(s.s11, -y * 50.0 / (2.0 + y * 50.0), 1e-14));
}

TEST_CASE("identity S maps to identity ABCD") {
    const SMatrix through{0.0, 1.0, 1.0, 0.0};
    const AbcdMatrix m = s_to_abcd(through, kZ0);
    CHECK(complex_near(m.a, 1.0, 1e-15));
    CHECK(complex_near(m.b, 0.0, 1e-12));
    CHECK(complex_near(m.c, 0.0, 1e-15));
    CHECK(complex_near(m.d, 1.0, 1e-15));
}

TEST_CASE("abcd<->s round-trip on 1000 random passive matrices") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const SMatrix s = random_passive_s(rng);
        const SMatrix back = abcd_to_s(s_to_abcd(s, kZ0), kZ0);
        CHECK(testutil::s_near(back, s, 1e-10));
    }
}

TEST_CASE("y<->s round-trip") {
    Rng rng(7);
    for (int i = 0; i < 200; ++i) {
        const SMatrix s = random_passive_s(rng);
        const SMatrix back = y_to_s(s_to_y(s, kZ0), kZ0);
        CHECK(testutil::s_near(back, s, 1e-10));
    }
}

TEST_CASE("s_to_abcd requires a through path") {
    const SMatrix blocked{0.5, 0.0, 0.0, 0.5};
    CHECK_THROWS_AS(s_to_abcd(blocked, kZ0), NoThroughPath);
}

TEST_CASE("cascade basics") {
    CHECK_THROWS_AS(cascade({}), InvalidTopology);

    const AbcdMatrix m = series_impedance({30.0, -20.0});
    const AbcdMatrix out = cascade(std::vector<AbcdMatrix>{abcd_identity(), m});
    CHECK(complex_near(out.a, m.a, 1e-15));
    CHECK(complex_near(out.b, m.b, 1e-15));

    // impedances in series add
    const AbcdMatrix z1 = series_impedance({10.0, 5.0});
    const AbcdMatrix z2 = series_impedance({20.0, -1.0});
    const AbcdMatrix sum = cascade(std::vector<AbcdMatrix>{z1, z2});
    CHECK(complex_near(sum.b, Complex(30.0, 4.0), 1e-13));
}

TEST_CASE("matched phase stages cascade to the summed insertion phase") {
    constexpr double deg = std::numbers::pi / 180.0;
    auto matched_stage = [](double phase_deg) {
        SMatrix s;
        s.s11 = s.s22 = 0.0;
        s.s21 = s.s12 = std::polar(1.0, phase_deg * deg);
        return s_to_abcd(s, kZ0);
    };
    // two matched stages at -45 and -90 degrees land at -135
    const AbcdMatrix chain =
        cascade(std::vector<AbcdMatrix>{matched_stage(-45.0), matched_stage(-90.0)});
    const SMatrix s = abcd_to_s(chain, kZ0);
    CHECK(std::abs(s.s11) < 1e-12);
    CHECK(std::arg(s.s21) / deg == doctest::Approx(-135.0).epsilon(1e-9));
}

TEST_CASE("reciprocity and symmetry checks") {
    const SMatrix through{0.0, 1.0, 1.0, 0.0};
    CHECK(check_reciprocity(through, 1e-10));
    CHECK(check_symmetry(through, 1e-10));

    SMatrix lopsided = through;
    lopsided.s12 = 0.9;
    CHECK_FALSE(check_reciprocity(lopsided, 1e-10));

    SMatrix mismatched = through;
    mismatched.s22 = 0.2;
    CHECK_FALSE(check_symmetry(mismatched, 1e-6));

    CHECK_THROWS_AS(check_reciprocity(through, 0.0), InvalidElement);
}

TEST_CASE("reciprocal networks have unit abcd determinant") {
    Rng rng(3);
    for (int i = 0; i < 50; ++i) {
        const testutil::Ladder ladder = testutil::random_ladder(rng);
        const AbcdMatrix m = ladder.abcd(Frequency(2e9));
        CHECK(std::abs(m.determinant() - 1.0) < 1e-9);
    }
}

TEST_CASE("spectral norm flags active matrices") {
    const SMatrix passive{0.3, 0.2, 0.2, 0.1};
    CHECK(passive.is_passive());
    const SMatrix amplifying{0.1, 0.0, 3.0, 0.1};
    CHECK_FALSE(amplifying.is_passive());
}
