#pragma once

#include <cstdint>
#include <random>

namespace metacdn {

/// Deterministic random source for the simulator. mt19937_64 output is pinned
/// by the standard; the uniform mappings are spelled out here because the
/// std::uniform_* distributions are implementation-defined and would break
/// bit-identical replay across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed), seed_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return uniform01() < p;
    }

    /// Derives an independent stream for a named subsystem so that adding a
    /// consumer does not perturb the draws seen by the others.
    Rng fork(std::uint64_t stream) const {
        // splitmix64 step over (seed, stream)
        std::uint64_t z = seed_ + stream * 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

}  // namespace metacdn
