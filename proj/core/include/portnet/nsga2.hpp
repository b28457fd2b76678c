#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "portnet/rng.hpp"

namespace portnet {

/// One candidate: a genome in [0,1]^n plus its evaluation. Objectives are
/// minimized; constraint_violation 0 means feasible.
struct Individual {
    std::vector<double> genome;
    std::vector<double> objectives;
    double constraint_violation = 0.0;
};

struct Nsga2Config {
    int population = 30;       // must be even
    int generations = 30;
    double crossover_prob = 0.9;
    double mutation_prob = -1.0;  // < 0 means 1/genome_length
    double sbx_eta = 15.0;
    double pm_eta = 20.0;
    std::uint64_t seed = 0;
};

/// Constraint-dominance: a feasible point dominates an infeasible one, the
/// lesser violation dominates the greater, and feasible points compare by
/// Pareto dominance on the objectives.
bool dominates(const Individual& a, const Individual& b);

/// Deb's fast nondominated sort; front 0 is the nondominated set.
std::vector<std::vector<int>> fast_nondominated_sort(std::span<const Individual> pop);

/// Crowding distances within one front; boundary points get +infinity.
std::vector<double> crowding_distance(std::span<const Individual> pop,
                                      std::span<const int> front);

/// Simulated binary crossover; children are clamped to [0,1].
std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    std::span<const double> parent1, std::span<const double> parent2, double eta, Rng& rng);

/// Polynomial mutation in place; genes stay in [0,1].
void polynomial_mutation(std::span<double> genome, double eta, double prob, Rng& rng);

/// objectives + constraint violation for one genome.
using Evaluator =
    std::function<std::pair<std::vector<double>, double>(std::span<const double> genome)>;

struct GenerationStats {
    int generation = 0;
    long evaluations = 0;
    double best_error = 0.0;  // scalarized: sum of objectives + violation
    int feasible = 0;
    int front_size = 0;
};

struct EvolveResult {
    std::vector<Individual> population;   // final generation
    std::vector<int> pareto_front;        // indices into population
    std::vector<Individual> generation_bests;
    std::vector<GenerationStats> stats;
    long evaluations = 0;
};

double scalarized_error(const Individual& ind);

/// Standard elitist loop: binary tournament on (rank, crowding), SBX,
/// polynomial mutation, parent+child truncation. Deterministic under seed.
EvolveResult evolve(int n_genes, int n_objectives, const Evaluator& eval,
                    const Nsga2Config& cfg);

} // namespace portnet
