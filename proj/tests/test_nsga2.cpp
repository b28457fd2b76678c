#include <doctest.h>

#include <cmath>

#include "portnet/nsga2.hpp"
#include "testutil.hpp"

using namespace portnet;

namespace {

Individual make_ind(std::vector<double> objectives, double violation = 0.0) {
    Individual ind;
    ind.objectives = std::move(objectives);
    ind.constraint_violation = violation;
    return ind;
}

/// O(n^3) front assignment by repeated nondominated peeling.
std::vector<int> brute_force_ranks(std::span<const Individual> pop) {
    const int n = static_cast<int>(pop.size());
    std::vector<int> rank(n, -1);
    int assigned = 0, level = 0;
    while (assigned < n) {
        std::vector<int> current;
        for (int i = 0; i < n; ++i) {
            if (rank[i] >= 0) continue;
            bool dominated = false;
            for (int j = 0; j < n && !dominated; ++j)
                if (i != j && rank[j] < 0 && dominates(pop[j], pop[i])) dominated = true;
            if (!dominated) current.push_back(i);
        }
        for (int i : current) rank[i] = level;
        assigned += static_cast<int>(current.size());
        ++level;
    }
    return rank;
}

} // namespace

TEST_CASE("constraint dominance") {
    const Individual feasible = make_ind({1.0, 1.0});
    const Individual infeasible = make_ind({0.0, 0.0}, 2.0);
    const Individual less_infeasible = make_ind({9.0, 9.0}, 1.0);
    CHECK(dominates(feasible, infeasible));
    CHECK_FALSE(dominates(infeasible, feasible));
    CHECK(dominates(less_infeasible, infeasible));
    CHECK(dominates(make_ind({0.0, 1.0}), make_ind({1.0, 1.0})));
    CHECK_FALSE(dominates(make_ind({0.0, 1.0}), make_ind({1.0, 0.0})));
    CHECK_FALSE(dominates(feasible, feasible));
}

TEST_CASE("nondominated sort on hand cases") {
    SUBCASE("three mutually nondominated points form one front") {
        std::vector<Individual> pop{make_ind({1, 3}), make_ind({2, 2}), make_ind({3, 1})};
        const auto fronts = fast_nondominated_sort(pop);
        REQUIRE(fronts.size() == 1);
        CHECK(fronts[0].size() == 3);
    }
    SUBCASE("a strict chain gives singleton fronts") {
        std::vector<Individual> pop{make_ind({3, 3}), make_ind({1, 1}), make_ind({2, 2})};
        const auto fronts = fast_nondominated_sort(pop);
        REQUIRE(fronts.size() == 3);
        CHECK(fronts[0] == std::vector<int>{1});
        CHECK(fronts[1] == std::vector<int>{2});
        CHECK(fronts[2] == std::vector<int>{0});
    }
}

TEST_CASE("nondominated sort agrees with brute force on random instances") {
    Rng rng(99);
    for (int trial = 0; trial < 100; ++trial) {
        const int n = 5 + static_cast<int>(rng.integer(46));
        const int n_obj = 2 + static_cast<int>(rng.integer(2));
        std::vector<Individual> pop;
        for (int i = 0; i < n; ++i) {
            std::vector<double> obj(n_obj);
            for (double& o : obj) o = rng.uniform(0.0, 1.0);
            const double viol = rng.bernoulli(0.3) ? rng.uniform(0.0, 1.0) : 0.0;
            pop.push_back(make_ind(std::move(obj), viol));
        }
        const auto fronts = fast_nondominated_sort(pop);
        const std::vector<int> expect = brute_force_ranks(pop);
        std::vector<int> got(n, -1);
        for (std::size_t f = 0; f < fronts.size(); ++f)
            for (int i : fronts[f]) got[i] = static_cast<int>(f);
        CHECK(got == expect);
    }
}

TEST_CASE("crowding distance") {
    std::vector<Individual> pop{make_ind({0.0, 1.0}), make_ind({0.5, 0.5}), make_ind({1.0, 0.0}),
                                make_ind({0.1, 0.9})};
    SUBCASE("two-point front: both infinite") {
        const std::vector<int> front{0, 2};
        const std::vector<double> d = crowding_distance(pop, front);
        CHECK(std::isinf(d[0]));
        CHECK(std::isinf(d[1]));
    }
    SUBCASE("boundaries infinite, interior finite") {
        const std::vector<int> front{0, 1, 2, 3};
        const std::vector<double> d = crowding_distance(pop, front);
        CHECK(std::isinf(d[0]));
        CHECK(std::isinf(d[2]));
        CHECK(std::isfinite(d[1]));
        CHECK(std::isfinite(d[3]));
        CHECK(d[1] > d[3]);  // the lonelier point is less crowded
    }
}

TEST_CASE("sbx crossover") {
    Rng rng(4);
    const std::vector<double> p1{0.2, 0.8, 0.5};
    const std::vector<double> p2{0.6, 0.1, 0.5};
    SUBCASE("children stay in bounds") {
        for (int i = 0; i < 200; ++i) {
            const auto [c1, c2] = sbx_crossover(p1, p2, 15.0, rng);
            for (double g : c1) CHECK((g >= 0.0 && g <= 1.0));
            for (double g : c2) CHECK((g >= 0.0 && g <= 1.0));
        }
    }
    SUBCASE("large eta degenerates to copying") {
        for (int i = 0; i < 50; ++i) {
            const auto [c1, c2] = sbx_crossover(p1, p2, 1e9, rng);
            for (std::size_t g = 0; g < p1.size(); ++g) {
                const bool near1 = std::abs(c1[g] - p1[g]) < 1e-6 || std::abs(c1[g] - p2[g]) < 1e-6;
                CHECK(near1);
            }
            (void)c2;
        }
    }
}

TEST_CASE("polynomial mutation") {
    Rng rng(12);
    std::vector<double> g{0.3, 0.6, 0.9};
    SUBCASE("probability zero is the identity") {
        std::vector<double> copy = g;
        polynomial_mutation(copy, 20.0, 0.0, rng);
        CHECK(copy == g);
    }
    SUBCASE("bounds hold under heavy mutation") {
        for (int i = 0; i < 500; ++i) {
            std::vector<double> copy = g;
            polynomial_mutation(copy, 20.0, 1.0, rng);
            for (double v : copy) CHECK((v >= 0.0 && v <= 1.0));
        }
    }
}

TEST_CASE("tournament never prefers a dominated individual") {
    // exercised indirectly: every front-0 member of evolve's result must be
    // nondominated within the returned population
    const Evaluator eval = [](std::span<const double> g) {
        std::vector<double> obj{g[0], 1.0 - g[0]};
        return std::make_pair(obj, 0.0);
    };
    Nsga2Config cfg;
    cfg.population = 16;
    cfg.generations = 5;
    cfg.seed = 3;
    const EvolveResult res = evolve(2, 2, eval, cfg);
    for (int i : res.pareto_front)
        for (const Individual& other : res.population)
            CHECK_FALSE(dominates(other, res.population[i]));
}

TEST_CASE("single-objective sphere toy converges under the 30x30 budget") {
    // genome decodes to [-1,1]^3; optimum at the center
    const Evaluator eval = [](std::span<const double> g) {
        double acc = 0.0;
        for (double v : g) {
            const double x = 2.0 * v - 1.0;
            acc += x * x;
        }
        return std::make_pair(std::vector<double>{acc}, 0.0);
    };
    Nsga2Config cfg;  // population 30, generations 30
    cfg.seed = 17;
    const EvolveResult res = evolve(3, 1, eval, cfg);
    double best = 1e300;
    for (const Individual& ind : res.population) best = std::min(best, ind.objectives[0]);
    CHECK(best < 1e-2);
    CHECK(res.evaluations == 30 + 30 * 30);
}

TEST_CASE("best feasible error never regresses across generations") {
    const Evaluator eval = [](std::span<const double> g) {
        const double x = g[0], y = g[1];
        std::vector<double> obj{std::abs(x - 0.3), std::abs(y - 0.7)};
        const double violation = std::max(0.0, 0.2 - x);  // x >= 0.2
        return std::make_pair(obj, violation);
    };
    Nsga2Config cfg;
    cfg.seed = 5;
    const EvolveResult res = evolve(2, 2, eval, cfg);
    for (std::size_t i = 1; i < res.stats.size(); ++i)
        CHECK(res.stats[i].best_error <= res.stats[i - 1].best_error + 1e-15);
}

TEST_CASE("seeded evolution is reproducible") {
    const Evaluator eval = [](std::span<const double> g) {
        return std::make_pair(std::vector<double>{g[0] * g[0], (1 - g[0]) * (1 - g[0])}, 0.0);
    };
    Nsga2Config cfg;
    cfg.population = 20;
    cfg.generations = 10;
    cfg.seed = 31;
    const EvolveResult a = evolve(4, 2, eval, cfg);
    const EvolveResult b = evolve(4, 2, eval, cfg);
    REQUIRE(a.population.size() == b.population.size());
    for (std::size_t i = 0; i < a.population.size(); ++i) {
        CHECK(a.population[i].genome == b.population[i].genome);
        CHECK(a.population[i].objectives == b.population[i].objectives);
    }
    CHECK(a.pareto_front == b.pareto_front);
}

TEST_CASE("genomes stay in the unit cube through evolution") {
    const Evaluator eval = [](std::span<const double> g) {
        return std::make_pair(std::vector<double>{std::abs(g[0] - 2.0)}, 0.0);  // pushes toward 1
    };
    Nsga2Config cfg;
    cfg.population = 12;
    cfg.generations = 15;
    cfg.seed = 2;
    const EvolveResult res = evolve(3, 1, eval, cfg);
    for (const Individual& ind : res.population)
        for (double g : ind.genome) CHECK((g >= 0.0 && g <= 1.0));
}

TEST_CASE("failing evaluations are demoted, not fatal") {
    int calls = 0;
    const Evaluator eval = [&calls](std::span<const double> g) {
        if (++calls % 7 == 0) throw SingularNetwork("synthetic failure");
        return std::make_pair(std::vector<double>{g[0]}, 0.0);
    };
    Nsga2Config cfg;
    cfg.population = 10;
    cfg.generations = 5;
    cfg.seed = 1;
    const EvolveResult res = evolve(2, 1, eval, cfg);
    double best = 1e300;
    for (const Individual& ind : res.population) best = std::min(best, ind.objectives[0]);
    CHECK(best < 0.5);  // progress despite failures
}

TEST_CASE("config validation") {
    const Evaluator eval = [](std::span<const double>) {
        return std::make_pair(std::vector<double>{0.0}, 0.0);
    };
    Nsga2Config odd;
    odd.population = 7;
    CHECK_THROWS_AS(evolve(2, 1, eval, odd), SchemaMismatch);
    Nsga2Config bad_prob;
    bad_prob.crossover_prob = 1.5;
    CHECK_THROWS_AS(evolve(2, 1, eval, bad_prob), SchemaMismatch);
}
