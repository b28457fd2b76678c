#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "portnet/netlist.hpp"
#include "portnet/poi.hpp"
#include "portnet/rng.hpp"
#include "portnet/row_matrix.hpp"

namespace portnet {

/// How a 2x2 S-matrix becomes a real feature block.
/// Reciprocal networks store s12 once (6 features); symmetric ones also
/// drop s22 (4 features).
enum class SEncoding { Full8, Reciprocal6, Symmetric4 };

int encoding_width(SEncoding e);
const char* encoding_name(SEncoding e);
SEncoding encoding_from_name(const std::string& name);
void encode_s(const SMatrix& s, SEncoding e, std::span<double> out);
SMatrix decode_s(std::span<const double> feats, SEncoding e);
std::vector<std::string> encoding_feature_names(SEncoding e, const std::string& prefix);

struct SamplerConfig {
    std::uint64_t seed = 0;
    int count = 0;
    enum class SSource { FromTopologies, SyntheticPassive } s_source = SSource::FromTopologies;
    /// Adds log10(f_hz) as a trailing input feature; required when sampling
    /// across more than one frequency.
    bool frequency_feature = false;
    /// Solver failures are resampled up to this multiple of `count`.
    int resample_budget = 10;
};

/// Training table for one sub-model: design parameters -> S features of a
/// single E-network topology at fixed frequency.
struct SubDataset {
    std::string topology_key;
    std::string enetwork_label;
    double frequency_hz = 0.0;
    SEncoding encoding = SEncoding::Reciprocal6;
    std::uint64_t seed = 0;
    std::vector<std::string> param_names;
    RowMatrix x;  // one column per parameter
    RowMatrix s;  // encoded S features
};

/// Samples parameters in their declared ranges (log-uniform when flagged),
/// runs the oracle, and encodes the result. Deterministic under seed.
SubDataset gen_sub_dataset(const Subcircuit& enetwork, const std::string& label,
                           std::span<const DesignParameter> params, const SamplerConfig& cfg,
                           Frequency f, ReferenceImpedance z0);

/// Training table for the main model: per-slot S features plus residual
/// parameters -> PoI targets, sampled across a family of topologies.
struct MainDataset {
    double frequency_hz = 0.0;
    int n_enetworks = 0;
    SEncoding encoding = SEncoding::Reciprocal6;
    std::uint64_t seed = 0;
    std::vector<std::string> feature_names;  // slot features then residual names
    std::vector<std::string> target_names;
    std::vector<std::string> topology_keys;  // one per family member
    std::vector<int> topo_index;             // one per row
    int s_width = 0;                         // per-slot feature width
    int xr_width = 0;
    RowMatrix x, y;
};

/// from-topologies: picks a family member uniformly, samples its parameters
/// and switch states, records oracle E-network S and full-circuit PoI.
/// synthetic-passive: draws reciprocal S-matrices uniformly in the unit
/// disk per entry with rejection on spectral norm, and synthesizes the PoI
/// through the reduced circuit of family[0].
MainDataset gen_main_dataset(std::span<const Netlist> family, const SamplerConfig& cfg,
                             Frequency f, ReferenceImpedance z0,
                             std::span<const std::string> targets);

/// Re-derives the PoI targets of one row from its stored S features and
/// residual parameters through the reduced-circuit oracle.
std::vector<double> reconstruct_targets(const Netlist& member, const MainDataset& ds, int row,
                                        ReferenceImpedance z0);

struct SplitIndices {
    std::vector<int> train, val, test;
};

/// Seed-deterministic disjoint split; stratified by `strata` when non-empty.
/// Fraction counts are of the total row count.
SplitIndices split_rows(int n_rows, std::span<const int> strata, double val_frac,
                        double test_frac, std::uint64_t seed);

// --- persistence: one JSON header line, one column-name line, CSV rows ---
void save_sub_dataset(const std::filesystem::path& path, const SubDataset& ds);
SubDataset load_sub_dataset(const std::filesystem::path& path);
void save_main_dataset(const std::filesystem::path& path, const MainDataset& ds);
MainDataset load_main_dataset(const std::filesystem::path& path);

} // namespace portnet
