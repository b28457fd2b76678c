#include "portnet/types.hpp"

#include <algorithm>
#include <cmath>

namespace portnet {

FrequencyGrid::FrequencyGrid(std::vector<Frequency> points) : points_(std::move(points)) {
    if (points_.empty())
        throw InvalidElement("frequency grid must contain at least one point");
    std::sort(points_.begin(), points_.end(),
              [](const Frequency& a, const Frequency& b) { return a.hertz() < b.hertz(); });
}

FrequencyGrid FrequencyGrid::log_spaced(double lo_hz, double hi_hz, int points) {
    if (points < 1 || !(lo_hz > 0.0) || !(hi_hz > lo_hz))
        throw InvalidElement("log grid needs points >= 1 and 0 < lo < hi");
    std::vector<Frequency> p;
    p.reserve(points);
    if (points == 1) {
        p.emplace_back(lo_hz);
        return FrequencyGrid(std::move(p));
    }
    const double llo = std::log10(lo_hz);
    const double lhi = std::log10(hi_hz);
    for (int i = 0; i < points; ++i)
        p.emplace_back(std::pow(10.0, llo + (lhi - llo) * i / (points - 1)));
    return FrequencyGrid(std::move(p));
}

FrequencyGrid FrequencyGrid::linear_spaced(double lo_hz, double hi_hz, int points) {
    if (points < 1 || !(lo_hz > 0.0) || !(hi_hz > lo_hz))
        throw InvalidElement("linear grid needs points >= 1 and 0 < lo < hi");
    std::vector<Frequency> p;
    p.reserve(points);
    if (points == 1) {
        p.emplace_back(lo_hz);
        return FrequencyGrid(std::move(p));
    }
    for (int i = 0; i < points; ++i)
        p.emplace_back(lo_hz + (hi_hz - lo_hz) * i / (points - 1));
    return FrequencyGrid(std::move(p));
}

FrequencyGrid FrequencyGrid::default_sweep() { return log_spaced(1.0, 15e9, 64); }

} // namespace portnet
