#include <doctest.h>

#include "portnet/errors.hpp"
#include "portnet/linear_solver.hpp"
#include "testutil.hpp"

using namespace portnet;

TEST_CASE("solves a known 2x2 complex system") {
    ComplexMatrix a(2, 2);
    a(0, 0) = {2.0, 1.0};
    a(0, 1) = {0.0, -1.0};
    a(1, 0) = {1.0, 0.0};
    a(1, 1) = {3.0, 0.0};
    // pick x, form b = A x
    const Complex x0{1.5, -0.5}, x1{-2.0, 0.25};
    const std::vector<Complex> b{a(0, 0) * x0 + a(0, 1) * x1, a(1, 0) * x0 + a(1, 1) * x1};
    const LinearSolver solver(a);
    const std::vector<Complex> x = solver.solve(b);
    CHECK(testutil::complex_near(x[0], x0, 1e-14));
    CHECK(testutil::complex_near(x[1], x1, 1e-14));
}

TEST_CASE("rejects singular matrices") {
    ComplexMatrix a(2, 2);
    a(0, 0) = {1.0, 0.0};
    a(0, 1) = {2.0, 0.0};
    a(1, 0) = {2.0, 0.0};
    a(1, 1) = {4.0, 0.0};
    CHECK_THROWS_AS(LinearSolver{a}, SingularNetwork);
}

TEST_CASE("refinement recovers digits lost to admittance-scale cancellation") {
    // Terminated series branch with |Y| ~ 1e8 S against g0 = 0.02 S: a plain
    // double LU loses ~7 digits in exactly the port-voltage entries.
    const Complex y{0.0, -1.59e8};
    const double g = 0.02;
    ComplexMatrix a(2, 2);
    a(0, 0) = y + g;
    a(0, 1) = -y;
    a(1, 0) = -y;
    a(1, 1) = y + g;
    const std::vector<Complex> b{2.0 * g, 0.0};
    const LinearSolver solver(a);
    const std::vector<Complex> x = solver.solve(b);
    // closed form: v2 = 2Y/(2Y + g), v1 = v2 * (Y + g) / Y
    const Complex v2 = 2.0 * y / (2.0 * y + g);
    const Complex v1 = v2 * (y + g) / y;
    CHECK(std::abs(x[0] - v1) < 1e-13);
    CHECK(std::abs(x[1] - v2) < 1e-13);
}

TEST_CASE("random systems solve to near machine accuracy") {
    Rng rng(11);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + static_cast<int>(rng.integer(10));
        ComplexMatrix a(n, n);
        std::vector<Complex> xs(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = {rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
            for (int j = 0; j < n; ++j)
                a(i, j) = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
            a(i, i) += Complex(4.0, 0.0);  // keep it comfortably nonsingular
        }
        std::vector<Complex> b(n);
        for (int i = 0; i < n; ++i) {
            Complex acc = 0.0;
            for (int j = 0; j < n; ++j) acc += a(i, j) * xs[j];
            b[i] = acc;
        }
        const std::vector<Complex> x = LinearSolver(a).solve(b);
        for (int i = 0; i < n; ++i) CHECK(std::abs(x[i] - xs[i]) < 1e-12);
    }
}
