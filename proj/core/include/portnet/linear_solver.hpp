#pragma once

#include <memory>
#include <span>
#include <vector>

#include "portnet/types.hpp"

namespace portnet {

/// Dense complex matrix, row-major. Nodal systems here stay small
/// (tens of nodes), so a direct dense solve is the right tool.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), v_(static_cast<std::size_t>(rows) * cols) {}

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    Complex& operator()(int r, int c) { return v_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Complex& operator()(int r, int c) const { return v_[static_cast<std::size_t>(r) * cols_ + c]; }

private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> v_;
};

/// Matrix whose entries carry an error-free compensation term. Admittance
/// stamps straddle ~22 decades over a 1 Hz..15 GHz sweep; adding a 0.02 S
/// termination onto a 1e9 S diagonal would otherwise lose the termination's
/// bits entirely (ulp at 1e9 is ~2.4e-7) and cap S-parameter accuracy near
/// 1e-6 regardless of how the system is solved.
class CompensatedMatrix {
public:
    CompensatedMatrix() = default;
    CompensatedMatrix(int rows, int cols) : hi_(rows, cols), lo_(rows, cols) {}

    int rows() const { return hi_.rows(); }
    int cols() const { return hi_.cols(); }
    void add(int r, int c, Complex v);
    const ComplexMatrix& hi() const { return hi_; }
    const ComplexMatrix& lo() const { return lo_; }

private:
    ComplexMatrix hi_, lo_;
};

/// Partial-pivot Gaussian elimination carried out in double-double
/// arithmetic (~32 significant digits). The sweep's admittance dynamic
/// range defeats plain double factorization — a series-reactance chain can
/// absorb the only admittance keeping an internal node regular into bits a
/// double cannot represent — while 32 digits hold the full ~22-decade
/// spread with headroom, which the 1e-9..1e-10 oracle tolerances need.
/// Matrices stay at tens of nodes, so the constant factor is immaterial.
class LinearSolver {
public:
    explicit LinearSolver(const ComplexMatrix& a);
    explicit LinearSolver(const CompensatedMatrix& a);
    ~LinearSolver();
    LinearSolver(LinearSolver&&) noexcept;
    LinearSolver& operator=(LinearSolver&&) noexcept;

    int size() const { return n_; }

    /// Solve A x = b. Throws SingularNetwork on structural singularity
    /// (exact zero pivot) or a non-finite solution.
    std::vector<Complex> solve(std::span<const Complex> rhs) const;

private:
    struct Impl;
    int n_ = 0;
    std::unique_ptr<Impl> impl_;
};

} // namespace portnet
