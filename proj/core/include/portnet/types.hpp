#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "portnet/errors.hpp"

namespace portnet {

using Complex = std::complex<double>;

/// A single analysis frequency. Strictly positive.
class Frequency {
public:
    explicit Frequency(double hertz) : hertz_(hertz) {
        if (!(hertz > 0.0) || !std::isfinite(hertz))
            throw InvalidElement("frequency must be a positive finite number of hertz");
    }
    double hertz() const { return hertz_; }
    double omega() const { return 2.0 * std::numbers::pi * hertz_; }
    /// Laplace variable on the imaginary axis, s = j2*pi*f.
    Complex s() const { return Complex(0.0, omega()); }

private:
    double hertz_;
};

/// Port termination / wave-normalization impedance. 50 ohms unless stated.
class ReferenceImpedance {
public:
    explicit ReferenceImpedance(double ohms = 50.0) : ohms_(ohms) {
        if (!(ohms > 0.0) || !std::isfinite(ohms))
            throw InvalidElement("reference impedance must be positive and finite");
    }
    double ohms() const { return ohms_; }

private:
    double ohms_;
};

/// Explicit sorted grid of analysis frequencies.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    explicit FrequencyGrid(std::vector<Frequency> points);

    static FrequencyGrid log_spaced(double lo_hz, double hi_hz, int points);
    static FrequencyGrid linear_spaced(double lo_hz, double hi_hz, int points);
    /// 64 log-spaced points over 1 Hz .. 15 GHz.
    static FrequencyGrid default_sweep();

    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }
    const Frequency& operator[](std::size_t i) const { return points_[i]; }
    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }
    double min_hz() const { return points_.front().hertz(); }
    double max_hz() const { return points_.back().hertz(); }

private:
    std::vector<Frequency> points_;
};

} // namespace portnet
