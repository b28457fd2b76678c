#pragma once

#include <array>
#include <span>

#include "portnet/types.hpp"

namespace portnet {

/// 2x2 scattering matrix at a single frequency.
struct SMatrix {
    Complex s11, s12, s21, s22;

    /// Largest singular value; <= 1 (plus rounding) for passive networks.
    double spectral_norm() const;
    bool is_passive(double tol = 1e-9) const { return spectral_norm() <= 1.0 + tol; }
    Complex determinant() const { return s11 * s22 - s12 * s21; }
};

/// Transmission (chain) parameters: [v1; i1] = M [v2; -i2].
/// a and d are dimensionless, b is ohms, c is siemens.
struct AbcdMatrix {
    Complex a, b, c, d;
    Complex determinant() const { return a * d - b * c; }
};

inline AbcdMatrix abcd_identity() { return {1.0, 0.0, 0.0, 1.0}; }
/// Single impedance in the series path.
inline AbcdMatrix series_impedance(Complex z) { return {1.0, z, 0.0, 1.0}; }
/// Single admittance shunted to ground.
inline AbcdMatrix shunt_admittance(Complex y) { return {1.0, 0.0, y, 1.0}; }

/// Standard ABCD -> S conversion at a real reference impedance.
SMatrix abcd_to_s(const AbcdMatrix& m, ReferenceImpedance z0);

/// Inverse of abcd_to_s; requires a through path (s21 != 0).
AbcdMatrix s_to_abcd(const SMatrix& s, ReferenceImpedance z0);

/// Port admittance matrix (y11,y12,y21,y22 in siemens) -> S.
/// Expanded so no large intermediate products cancel: trace and determinant
/// of the normalized matrix enter as separate terms.
SMatrix y_to_s(const std::array<Complex, 4>& y, ReferenceImpedance z0);

/// S -> port admittance matrix; requires I + S nonsingular.
std::array<Complex, 4> s_to_y(const SMatrix& s, ReferenceImpedance z0);

/// Left-to-right chain product. The identity is neutral; the list must be
/// non-empty.
AbcdMatrix cascade(std::span<const AbcdMatrix> stages);

/// |s12 - s21| <= tol. Holds for every passive RLC network.
bool check_reciprocity(const SMatrix& s, double tol);

/// |s11 - s22| <= tol. Holds for mirror-symmetric networks.
bool check_symmetry(const SMatrix& s, double tol);

} // namespace portnet
