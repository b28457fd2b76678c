#include "portnet/linear_solver.hpp"

#include <cmath>
#include <cstdlib>

#include "dd.hpp"
#include "portnet/errors.hpp"

namespace portnet {

using detail::Dd;
using detail::DdComplex;

void CompensatedMatrix::add(int r, int c, Complex v) {
    Complex& hi = hi_(r, c);
    Complex& lo = lo_(r, c);
    const Dd re = detail::add(Dd{hi.real(), lo.real()}, v.real());
    const Dd im = detail::add(Dd{hi.imag(), lo.imag()}, v.imag());
    hi = Complex(re.hi, im.hi);
    lo = Complex(re.lo, im.lo);
}

struct LinearSolver::Impl {
    int n = 0;
    std::vector<DdComplex> lu;  // packed L (unit diagonal) and U
    std::vector<int> perm;

    DdComplex& at(int r, int c) { return lu[static_cast<std::size_t>(r) * n + c]; }
    const DdComplex& at(int r, int c) const { return lu[static_cast<std::size_t>(r) * n + c]; }

    void factorize() {
        perm.resize(n);
        for (int i = 0; i < n; ++i) perm[i] = i;
        for (int k = 0; k < n; ++k) {
            int pivot_row = k;
            double pivot_mag = detail::mag(at(k, k));
            for (int r = k + 1; r < n; ++r) {
                const double m = detail::mag(at(r, k));
                if (m > pivot_mag) { pivot_mag = m; pivot_row = r; }
            }
            // Partial pivoting keeps multipliers <= 1, so tiny-but-true
            // pivots are safe; only an exact zero is structural singularity
            // (floating node / zero row).
            if (pivot_mag == 0.0)
                throw SingularNetwork("nodal matrix is singular (zero pivot)");
            if (pivot_row != k) {
                std::swap(perm[k], perm[pivot_row]);
                for (int c = 0; c < n; ++c) std::swap(at(k, c), at(pivot_row, c));
            }
            for (int r = k + 1; r < n; ++r) {
                if (detail::is_zero(at(r, k))) continue;
                const DdComplex m = detail::div(at(r, k), at(k, k));
                at(r, k) = m;
                for (int c = k + 1; c < n; ++c)
                    at(r, c) = detail::sub(at(r, c), detail::mul(m, at(k, c)));
            }
        }
    }

    std::vector<DdComplex> substitute(const std::vector<DdComplex>& rhs) const {
        std::vector<DdComplex> x(n);
        for (int r = 0; r < n; ++r) x[r] = rhs[perm[r]];
        for (int r = 1; r < n; ++r) {
            DdComplex s = x[r];
            for (int c = 0; c < r; ++c) s = detail::sub(s, detail::mul(at(r, c), x[c]));
            x[r] = s;
        }
        for (int r = n - 1; r >= 0; --r) {
            DdComplex s = x[r];
            for (int c = r + 1; c < n; ++c) s = detail::sub(s, detail::mul(at(r, c), x[c]));
            x[r] = detail::div(s, at(r, r));
        }
        return x;
    }
};

LinearSolver::LinearSolver(const ComplexMatrix& a) : n_(a.rows()), impl_(new Impl) {
    if (a.rows() != a.cols()) throw SingularNetwork("nodal matrix must be square");
    impl_->n = n_;
    impl_->lu.resize(static_cast<std::size_t>(n_) * n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c) impl_->at(r, c) = detail::ddc(a(r, c));
    impl_->factorize();
}

LinearSolver::LinearSolver(const CompensatedMatrix& a) : n_(a.rows()), impl_(new Impl) {
    if (a.rows() != a.cols()) throw SingularNetwork("nodal matrix must be square");
    impl_->n = n_;
    impl_->lu.resize(static_cast<std::size_t>(n_) * n_);
    for (int r = 0; r < n_; ++r)
        for (int c = 0; c < n_; ++c)
            impl_->at(r, c) = detail::ddc(a.hi()(r, c).real(), a.lo()(r, c).real(),
                                          a.hi()(r, c).imag(), a.lo()(r, c).imag());
    impl_->factorize();
}

LinearSolver::~LinearSolver() = default;
LinearSolver::LinearSolver(LinearSolver&&) noexcept = default;
LinearSolver& LinearSolver::operator=(LinearSolver&&) noexcept = default;

std::vector<Complex> LinearSolver::solve(std::span<const Complex> rhs) const {
    if (static_cast<int>(rhs.size()) != n_)
        throw SingularNetwork("rhs length does not match matrix size");
    std::vector<DdComplex> b(n_);
    for (int r = 0; r < n_; ++r) b[r] = detail::ddc(rhs[r]);
    const std::vector<DdComplex> y = impl_->substitute(b);
    std::vector<Complex> x(n_);
    for (int r = 0; r < n_; ++r) {
        x[r] = detail::to_complex(y[r]);
        if (!std::isfinite(x[r].real()) || !std::isfinite(x[r].imag()))
            throw SingularNetwork("nodal solve produced non-finite voltages");
    }
    return x;
}

} // namespace portnet
