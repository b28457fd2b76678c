#include "portnet/twoport.hpp"

#include <cmath>

#include "portnet/errors.hpp"

namespace portnet {

double SMatrix::spectral_norm() const {
    // Largest singular value of a 2x2 via the eigenvalues of S^H S.
    const double a = std::norm(s11) + std::norm(s21);
    const double b = std::norm(s12) + std::norm(s22);
    const Complex c = std::conj(s11) * s12 + std::conj(s21) * s22;
    const double mid = 0.5 * (a + b);
    const double rad = std::sqrt(0.25 * (a - b) * (a - b) + std::norm(c));
    return std::sqrt(std::max(0.0, mid + rad));
}

SMatrix abcd_to_s(const AbcdMatrix& m, ReferenceImpedance z0) {
    const double z = z0.ohms();
    const Complex b_over_z = m.b / z;
    const Complex c_times_z = m.c * z;
    const Complex den = m.a + b_over_z + c_times_z + m.d;
    if (den == Complex(0.0, 0.0))
        throw DegenerateConversion("abcd_to_s: zero denominator");
    SMatrix s;
    s.s11 = (m.a + b_over_z - c_times_z - m.d) / den;
    s.s12 = 2.0 * m.determinant() / den;
    s.s21 = 2.0 / den;
    s.s22 = (-m.a + b_over_z - c_times_z + m.d) / den;
    return s;
}

AbcdMatrix s_to_abcd(const SMatrix& s, ReferenceImpedance z0) {
    if (s.s21 == Complex(0.0, 0.0))
        throw NoThroughPath("s_to_abcd: s21 is zero, no through path");
    const double z = z0.ohms();
    const Complex two_s21 = 2.0 * s.s21;
    AbcdMatrix m;
    m.a = ((1.0 + s.s11) * (1.0 - s.s22) + s.s12 * s.s21) / two_s21;
    m.b = z * ((1.0 + s.s11) * (1.0 + s.s22) - s.s12 * s.s21) / two_s21;
    m.c = ((1.0 - s.s11) * (1.0 - s.s22) - s.s12 * s.s21) / (z * two_s21);
    m.d = ((1.0 - s.s11) * (1.0 + s.s22) + s.s12 * s.s21) / two_s21;
    return m;
}

SMatrix y_to_s(const std::array<Complex, 4>& y, ReferenceImpedance z0) {
    const double z = z0.ohms();
    const Complex u11 = z * y[0], u12 = z * y[1], u21 = z * y[2], u22 = z * y[3];
    // det(I + u) = 1 + tr(u) + det(u), kept as separate terms so that the
    // huge-admittance case (near-through blocks) does not cancel.
    const Complex det_u = u11 * u22 - u12 * u21;
    const Complex den = 1.0 + (u11 + u22) + det_u;
    if (den == Complex(0.0, 0.0))
        throw DegenerateConversion("y_to_s: I + z0*Y is singular");
    SMatrix s;
    s.s11 = (1.0 - u11 + u22 - det_u) / den;
    s.s12 = -2.0 * u12 / den;
    s.s21 = -2.0 * u21 / den;
    s.s22 = (1.0 + u11 - u22 - det_u) / den;
    return s;
}

std::array<Complex, 4> s_to_y(const SMatrix& s, ReferenceImpedance z0) {
    const double z = z0.ohms();
    const Complex det_s = s.determinant();
    const Complex den = 1.0 + (s.s11 + s.s22) + det_s;
    if (std::abs(den) < 1e-300)
        throw DegenerateConversion("s_to_y: I + S is singular (through-like network)");
    std::array<Complex, 4> y;
    y[0] = (1.0 - s.s11 + s.s22 - det_s) / (z * den);
    y[1] = -2.0 * s.s12 / (z * den);
    y[2] = -2.0 * s.s21 / (z * den);
    y[3] = (1.0 + s.s11 - s.s22 - det_s) / (z * den);
    return y;
}

AbcdMatrix cascade(std::span<const AbcdMatrix> stages) {
    if (stages.empty())
        throw InvalidTopology("cascade of zero stages");
    AbcdMatrix acc = stages[0];
    for (std::size_t i = 1; i < stages.size(); ++i) {
        const AbcdMatrix& m = stages[i];
        const AbcdMatrix next{acc.a * m.a + acc.b * m.c, acc.a * m.b + acc.b * m.d,
                              acc.c * m.a + acc.d * m.c, acc.c * m.b + acc.d * m.d};
        acc = next;
    }
    return acc;
}

bool check_reciprocity(const SMatrix& s, double tol) {
    if (!(tol > 0.0)) throw InvalidElement("tolerance must be positive");
    return std::abs(s.s12 - s.s21) <= tol;
}

bool check_symmetry(const SMatrix& s, double tol) {
    if (!(tol > 0.0)) throw InvalidElement("tolerance must be positive");
    return std::abs(s.s11 - s.s22) <= tol;
}

} // namespace portnet
