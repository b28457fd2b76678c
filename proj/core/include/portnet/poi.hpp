#pragma once

#include <optional>
#include <string>
#include <vector>

#include "portnet/mna.hpp"
#include "portnet/twoport.hpp"

namespace portnet {

/// Performance-of-interest values at one frequency. Source and load are
/// z0-matched throughout, which collapses the general gain expressions to
/// the |S|-only forms. dB values may be -inf (|S| = 0); power/available
/// gain may be NaN when the defining denominator is not positive.
struct PoiVector {
    double input_return_loss_db = 0.0;   // 20 log10 |s11|
    double insertion_loss_db = 0.0;      // 20 log10 |s21|
    double output_return_loss_db = 0.0;  // 20 log10 |s22|
    double insertion_phase_deg = 0.0;    // arg s21, wrapped to (-180, 180]
    double transducer_gain_db = 0.0;     // 10 log10 |s21|^2
    double power_gain_db = 0.0;          // 10 log10 (|s21|^2 / (1 - |s11|^2))
    double available_gain_db = 0.0;      // 10 log10 (|s21|^2 / (1 - |s22|^2))
    double rollett_k = 0.0;
    double stability_mu = 0.0;

    double by_name(const std::string& name) const;
};

/// Canonical PoI column names, in file order.
const std::vector<std::string>& poi_names();

/// -inf dB is written to files as this sentinel (below any physical value).
inline constexpr double kNegInfSentinelDb = -400.0;

PoiVector poi_from_s(const SMatrix& s);

/// Wraps degrees into (-180, 180].
double wrap_phase_deg(double deg);

struct SweepPoi {
    FrequencyGrid grid;
    std::vector<SMatrix> s;
    std::vector<PoiVector> poi;
    /// Grid argmax of the power-gain column, first index on ties; rows with
    /// undefined power gain are skipped. Empty when every row is undefined.
    std::optional<Frequency> max_power_gain_frequency;
};

SweepPoi sweep_poi(const Subcircuit& c, const FrequencyGrid& grid, ReferenceImpedance z0);
SweepPoi sweep_poi(const StampedCircuit& c, const FrequencyGrid& grid, ReferenceImpedance z0);
/// PoI over already-computed S data (one matrix per grid point).
SweepPoi sweep_poi(std::vector<SMatrix> s, FrequencyGrid grid);

/// CSV export: freq_hz, the eight S components, then the PoI columns.
/// Non-finite dB values map to the -400 sentinel; NaN stays "nan".
std::string sweep_csv(const SweepPoi& sweep);

} // namespace portnet
