#pragma once

// Private double-double arithmetic for the nodal solver. Element
// admittances straddle ~22 decades across the 1 Hz..15 GHz sweep, which
// exceeds double precision: a series-reactance chain can absorb the only
// admittance that keeps an internal node regular into bits a double cannot
// hold, making the factorization exactly singular. 32 significant digits
// leave ample headroom.

#include <cmath>
#include <complex>

namespace portnet::detail {

struct Dd {
    double hi = 0.0;
    double lo = 0.0;
};

inline Dd dd(double x) { return {x, 0.0}; }

inline Dd two_sum(double a, double b) {
    const double s = a + b;
    const double bv = s - a;
    return {s, (a - (s - bv)) + (b - bv)};
}

inline Dd quick_two_sum(double a, double b) {
    const double s = a + b;
    return {s, b - (s - a)};
}

inline Dd two_prod(double a, double b) {
    const double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline Dd add(const Dd& a, const Dd& b) {
    Dd s = two_sum(a.hi, b.hi);
    s.lo += a.lo + b.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd add(const Dd& a, double b) {
    Dd s = two_sum(a.hi, b);
    s.lo += a.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline Dd neg(const Dd& a) { return {-a.hi, -a.lo}; }

inline Dd sub(const Dd& a, const Dd& b) { return add(a, neg(b)); }

inline Dd mul(const Dd& a, const Dd& b) {
    Dd p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline Dd div(const Dd& a, const Dd& b) {
    const double q1 = a.hi / b.hi;
    Dd r = sub(a, mul(b, dd(q1)));
    const double q2 = r.hi / b.hi;
    r = sub(r, mul(b, dd(q2)));
    const double q3 = r.hi / b.hi;
    return add(quick_two_sum(q1, q2), q3);
}

struct DdComplex {
    Dd re, im;
};

inline DdComplex ddc(const std::complex<double>& c) { return {dd(c.real()), dd(c.imag())}; }
inline DdComplex ddc(double re, double lo_re, double im, double lo_im) {
    return {Dd{re, lo_re}, Dd{im, lo_im}};
}
inline std::complex<double> to_complex(const DdComplex& c) {
    return {c.re.hi + c.re.lo, c.im.hi + c.im.lo};
}

inline DdComplex add(const DdComplex& a, const DdComplex& b) {
    return {add(a.re, b.re), add(a.im, b.im)};
}

inline DdComplex sub(const DdComplex& a, const DdComplex& b) {
    return {sub(a.re, b.re), sub(a.im, b.im)};
}

inline DdComplex mul(const DdComplex& a, const DdComplex& b) {
    return {sub(mul(a.re, b.re), mul(a.im, b.im)), add(mul(a.re, b.im), mul(a.im, b.re))};
}

inline DdComplex div(const DdComplex& a, const DdComplex& b) {
    const Dd den = add(mul(b.re, b.re), mul(b.im, b.im));
    const DdComplex num = mul(a, DdComplex{b.re, neg(b.im)});
    return {div(num.re, den), div(num.im, den)};
}

inline bool is_zero(const DdComplex& a) {
    return a.re.hi == 0.0 && a.re.lo == 0.0 && a.im.hi == 0.0 && a.im.lo == 0.0;
}

/// Magnitude estimate for pivot selection; hi parts decide.
inline double mag(const DdComplex& a) { return std::abs(a.re.hi) + std::abs(a.im.hi); }

} // namespace portnet::detail
