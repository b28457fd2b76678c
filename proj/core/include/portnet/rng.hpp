#pragma once

#include <cstdint>
#include <random>

namespace portnet {

/// Deterministic random source. Every stochastic component in the toolkit
/// draws through this wrapper (not std distributions, whose output is
/// implementation-defined), so equal seeds give byte-identical artifacts.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Uniform double in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t integer(std::uint64_t n) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t r;
        do { r = engine_(); } while (r >= limit);
        return r % n;
    }

    bool bernoulli(double p) { return uniform() < p; }

    /// Independent stream derived from the base seed; unaffected by how many
    /// draws the parent has made.
    Rng fork(std::uint64_t stream) const {
        return Rng(splitmix(seed_ ^ splitmix(stream + 0x9E3779B97F4A7C15ULL)));
    }

    static std::uint64_t splitmix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

} // namespace portnet
