#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>

namespace csrank {

// Deterministic random source.  All randomness in the library flows through
// this type so that a (seed, stream) pair fully determines every draw, across
// runs and platforms.  Gaussians use an explicit Box-Muller transform instead
// of std::normal_distribution, whose output is implementation defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

    // Independent child stream.  fork(i) != fork(j) for i != j, and forking
    // does not disturb this stream's state.
    Rng fork(std::uint64_t stream) const {
        return Rng(mix(seed_ ^ (0x9E3779B97F4A7C15ULL * (stream + 1))));
    }

    std::uint64_t bits() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(bits() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::size_t index(std::size_t n) { return static_cast<std::size_t>(bits() % n); }

    // Standard normal.
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Complex gaussian with E|z|^2 = 1.
    std::complex<double> cgaussian() {
        const double re = gaussian();
        const double im = gaussian();
        return {re * 0.7071067811865475244, im * 0.7071067811865475244};
    }

    std::uint64_t seed() const { return seed_; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        // splitmix64 finalizer
        z += 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace csrank
