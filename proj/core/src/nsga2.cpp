#include "portnet/nsga2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "portnet/errors.hpp"

namespace portnet {

namespace {
constexpr double kWorst = 1e30;
}

bool dominates(const Individual& a, const Individual& b) {
    const bool a_feasible = a.constraint_violation <= 0.0;
    const bool b_feasible = b.constraint_violation <= 0.0;
    if (a_feasible != b_feasible) return a_feasible;
    if (!a_feasible) return a.constraint_violation < b.constraint_violation;
    bool any_better = false;
    for (std::size_t i = 0; i < a.objectives.size(); ++i) {
        if (a.objectives[i] > b.objectives[i]) return false;
        if (a.objectives[i] < b.objectives[i]) any_better = true;
    }
    return any_better;
}

std::vector<std::vector<int>> fast_nondominated_sort(std::span<const Individual> pop) {
    const int n = static_cast<int>(pop.size());
    std::vector<std::vector<int>> dominated(n);
    std::vector<int> domination_count(n, 0);
    std::vector<std::vector<int>> fronts(1);

    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            if (dominates(pop[p], pop[q]))
                dominated[p].push_back(q);
            else if (dominates(pop[q], pop[p]))
                ++domination_count[p];
        }
        if (domination_count[p] == 0) fronts[0].push_back(p);
    }
    int i = 0;
    while (!fronts[i].empty()) {
        std::vector<int> next;
        for (int p : fronts[i]) {
            for (int q : dominated[p]) {
                if (--domination_count[q] == 0) next.push_back(q);
            }
        }
        ++i;
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(std::span<const Individual> pop,
                                      std::span<const int> front) {
    const std::size_t n = front.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> dist(n, 0.0);
    if (n <= 2) {
        std::fill(dist.begin(), dist.end(), inf);
        return dist;
    }
    const std::size_t n_obj = pop[front[0]].objectives.size();
    std::vector<int> order(n);
    for (std::size_t m = 0; m < n_obj; ++m) {
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
            return pop[front[a]].objectives[m] < pop[front[b]].objectives[m];
        });
        const double lo = pop[front[order.front()]].objectives[m];
        const double hi = pop[front[order.back()]].objectives[m];
        dist[order.front()] = inf;
        dist[order.back()] = inf;
        const double range = hi - lo;
        if (range <= 0.0) continue;
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double gap = pop[front[order[i + 1]]].objectives[m] -
                               pop[front[order[i - 1]]].objectives[m];
            dist[order[i]] += gap / range;
        }
    }
    return dist;
}

std::pair<std::vector<double>, std::vector<double>> sbx_crossover(
    std::span<const double> parent1, std::span<const double> parent2, double eta, Rng& rng) {
    std::vector<double> c1(parent1.begin(), parent1.end());
    std::vector<double> c2(parent2.begin(), parent2.end());
    for (std::size_t i = 0; i < c1.size(); ++i) {
        if (!rng.bernoulli(0.5)) continue;
        if (std::abs(parent1[i] - parent2[i]) < 1e-14) continue;
        const double u = rng.uniform();
        const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                     : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
        const double a = 0.5 * ((1.0 + beta) * parent1[i] + (1.0 - beta) * parent2[i]);
        const double b = 0.5 * ((1.0 - beta) * parent1[i] + (1.0 + beta) * parent2[i]);
        c1[i] = std::clamp(a, 0.0, 1.0);
        c2[i] = std::clamp(b, 0.0, 1.0);
    }
    return {std::move(c1), std::move(c2)};
}

void polynomial_mutation(std::span<double> genome, double eta, double prob, Rng& rng) {
    for (double& g : genome) {
        if (!rng.bernoulli(prob)) continue;
        const double u = rng.uniform();
        const double delta = u < 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0)) - 1.0
                                     : 1.0 - std::pow(2.0 * (1.0 - u), 1.0 / (eta + 1.0));
        g = std::clamp(g + delta, 0.0, 1.0);
    }
}

double scalarized_error(const Individual& ind) {
    double s = ind.constraint_violation;
    for (double o : ind.objectives) s += o;
    return s;
}

namespace {

Individual evaluate_genome(std::vector<double> genome, int n_objectives, const Evaluator& eval,
                           long& failures) {
    Individual ind;
    ind.genome = std::move(genome);
    try {
        auto [objectives, violation] = eval(ind.genome);
        if (static_cast<int>(objectives.size()) != n_objectives)
            throw SchemaMismatch("evaluator returned wrong objective count");
        ind.objectives = std::move(objectives);
        ind.constraint_violation = violation;
        for (double& o : ind.objectives)
            if (!std::isfinite(o)) o = kWorst;
        if (!std::isfinite(ind.constraint_violation)) ind.constraint_violation = kWorst;
    } catch (const std::exception&) {
        // failed simulation: keep the individual but make it lose every comparison
        ind.objectives.assign(n_objectives, kWorst);
        ind.constraint_violation = kWorst;
        ++failures;
    }
    return ind;
}

/// index of the feasible individual with least scalarized error, or -1
int best_feasible(std::span<const Individual> pop) {
    int best = -1;
    for (std::size_t i = 0; i < pop.size(); ++i) {
        if (pop[i].constraint_violation > 0.0) continue;
        if (best < 0 || scalarized_error(pop[i]) < scalarized_error(pop[best]))
            best = static_cast<int>(i);
    }
    return best;
}

} // namespace

EvolveResult evolve(int n_genes, int n_objectives, const Evaluator& eval,
                    const Nsga2Config& cfg) {
    if (n_genes <= 0 || n_objectives <= 0)
        throw SchemaMismatch("evolve needs positive genome and objective sizes");
    if (cfg.population < 2 || cfg.population % 2 != 0)
        throw SchemaMismatch("population must be even and >= 2");
    if (cfg.generations < 1) throw SchemaMismatch("generations must be >= 1");
    if (cfg.crossover_prob < 0.0 || cfg.crossover_prob > 1.0)
        throw SchemaMismatch("crossover probability must be in [0,1]");
    const double pm = cfg.mutation_prob < 0.0 ? 1.0 / n_genes : cfg.mutation_prob;
    if (pm < 0.0 || pm > 1.0) throw SchemaMismatch("mutation probability must be in [0,1]");

    Rng rng(cfg.seed);
    EvolveResult result;
    long failures = 0;

    std::vector<Individual> pop;
    pop.reserve(cfg.population);
    for (int i = 0; i < cfg.population; ++i) {
        std::vector<double> genome(n_genes);
        for (double& g : genome) g = rng.uniform();
        pop.push_back(evaluate_genome(std::move(genome), n_objectives, eval, failures));
        ++result.evaluations;
    }

    for (int gen = 1; gen <= cfg.generations; ++gen) {
        const std::vector<std::vector<int>> fronts = fast_nondominated_sort(pop);
        std::vector<int> rank(pop.size());
        std::vector<double> crowd(pop.size(), 0.0);
        for (std::size_t f = 0; f < fronts.size(); ++f) {
            const std::vector<double> d = crowding_distance(pop, fronts[f]);
            for (std::size_t i = 0; i < fronts[f].size(); ++i) {
                rank[fronts[f][i]] = static_cast<int>(f);
                crowd[fronts[f][i]] = d[i];
            }
        }
        auto tournament = [&]() -> int {
            const int a = static_cast<int>(rng.integer(pop.size()));
            const int b = static_cast<int>(rng.integer(pop.size()));
            if (rank[a] != rank[b]) return rank[a] < rank[b] ? a : b;
            if (crowd[a] != crowd[b]) return crowd[a] > crowd[b] ? a : b;
            return a;
        };

        std::vector<Individual> children;
        children.reserve(cfg.population);
        while (static_cast<int>(children.size()) < cfg.population) {
            const Individual& p1 = pop[tournament()];
            const Individual& p2 = pop[tournament()];
            std::vector<double> g1, g2;
            if (rng.bernoulli(cfg.crossover_prob)) {
                auto [a, b] = sbx_crossover(p1.genome, p2.genome, cfg.sbx_eta, rng);
                g1 = std::move(a);
                g2 = std::move(b);
            } else {
                g1 = p1.genome;
                g2 = p2.genome;
            }
            polynomial_mutation(g1, cfg.pm_eta, pm, rng);
            polynomial_mutation(g2, cfg.pm_eta, pm, rng);
            children.push_back(evaluate_genome(std::move(g1), n_objectives, eval, failures));
            children.push_back(evaluate_genome(std::move(g2), n_objectives, eval, failures));
            result.evaluations += 2;
        }

        std::vector<Individual> combined = std::move(pop);
        combined.insert(combined.end(), std::make_move_iterator(children.begin()),
                        std::make_move_iterator(children.end()));

        const std::vector<std::vector<int>> cfronts = fast_nondominated_sort(combined);
        std::vector<int> selected;
        selected.reserve(cfg.population);
        // keep the best feasible point unconditionally: crowding truncation
        // of an oversized first front may not, and the per-generation error
        // must never regress
        const int guard = best_feasible(combined);
        if (guard >= 0) selected.push_back(guard);
        for (const std::vector<int>& front : cfronts) {
            const std::vector<double> d = crowding_distance(combined, front);
            std::vector<std::size_t> idx(front.size());
            for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
            std::stable_sort(idx.begin(), idx.end(),
                             [&](std::size_t a, std::size_t b) { return d[a] > d[b]; });
            for (std::size_t i : idx) {
                const int candidate = front[i];
                if (candidate == guard) continue;
                if (static_cast<int>(selected.size()) >= cfg.population) break;
                selected.push_back(candidate);
            }
            if (static_cast<int>(selected.size()) >= cfg.population) break;
        }

        pop.clear();
        pop.reserve(cfg.population);
        for (int i : selected) pop.push_back(std::move(combined[i]));

        GenerationStats st;
        st.generation = gen;
        st.evaluations = result.evaluations;
        const int best = best_feasible(pop);
        st.best_error = best >= 0 ? scalarized_error(pop[best])
                                  : std::numeric_limits<double>::infinity();
        for (const Individual& ind : pop)
            if (ind.constraint_violation <= 0.0) ++st.feasible;
        st.front_size = static_cast<int>(fast_nondominated_sort(pop)[0].size());
        result.stats.push_back(st);
        if (best >= 0) result.generation_bests.push_back(pop[best]);
    }

    result.pareto_front = fast_nondominated_sort(pop)[0];
    result.population = std::move(pop);
    (void)failures;
    return result;
}

} // namespace portnet
