#pragma once

#include <filesystem>
#include <map>
#include <optional>

#include "portnet/composed.hpp"
#include "portnet/netlist.hpp"
#include "portnet/nsga2.hpp"

namespace portnet {

enum class GoalKind { Equals, LessThan, GreaterThan };

const char* goal_kind_name(GoalKind g);
GoalKind goal_kind_from_name(const std::string& name);

/// One sizing goal: a PoI at a frequency under a switch condition.
/// Equality goals become objectives |PoI - value|; inequality goals become
/// constraints with violation max(0, signed excess).
struct SizingTarget {
    std::string poi;
    double frequency_hz = 0.0;
    GoalKind goal = GoalKind::Equals;
    double value = 0.0;
    double weight = 1.0;
    /// Pass band for equality goals in verification reports.
    double tolerance = 0.0;
    std::map<std::string, bool> switches;  // switch name -> on
};

enum class SimulatorKind { Oracle, Composed };

struct SizingProblem {
    Netlist netlist;
    std::vector<DesignParameter> params;  // genome decoding order
    std::vector<SizingTarget> targets;
    SimulatorKind simulator = SimulatorKind::Composed;
    std::optional<ComposedModel> model;  // required for the composed simulator
    double z0 = 50.0;
    Nsga2Config nsga2;
};

/// genome in [0,1]^n -> parameter values through the declared ranges.
std::vector<double> decode_genome(const SizingProblem& p, std::span<const double> genome);

/// Target PoI values for explicit parameter values, through either simulator.
std::vector<double> evaluate_targets(const SizingProblem& p, std::span<const double> values,
                                     SimulatorKind simulator);

struct VerifyRecord {
    SizingTarget target;
    double surrogate_value = 0.0;
    double oracle_value = 0.0;
    bool surrogate_pass = false;
    bool oracle_pass = false;
    /// |surrogate - oracle|: non-zero gap flags surrogate optimism.
    double gap = 0.0;
};

/// Oracle-vs-surrogate report for one candidate (the two simulator-result
/// columns of a sizing comparison table).
std::vector<VerifyRecord> verify(const SizingProblem& p, std::span<const double> values);

struct SizedCandidate {
    std::vector<double> genome;
    std::vector<double> values;
    std::vector<VerifyRecord> report;
    double oracle_error = 0.0;  // scalarized against the targets
    bool oracle_pass = false;
};

struct SizingResult {
    EvolveResult evolve;
    std::vector<SizedCandidate> verified;  // oracle-best first
    long surrogate_evaluations = 0;
    long oracle_evaluations = 0;
};

/// Surrogate-in-the-loop NSGA-II, then one oracle verification pass over the
/// final Pareto front plus the per-generation bests; candidates are ranked
/// by oracle error.
SizingResult run_sizing(const SizingProblem& p);

// Problem and result files.
SizingProblem load_problem(const std::filesystem::path& path);
void save_result(const std::filesystem::path& path, const SizingProblem& p,
                 const SizingResult& r);
std::string generation_stats_csv(const EvolveResult& r);

} // namespace portnet
