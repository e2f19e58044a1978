#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace nanolaser {

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Stable seed for one run: folds each key into the running hash so that
/// (base, method, pump index, run index) tuples map to distinct streams.
constexpr std::uint64_t derive_seed(std::uint64_t base_seed, std::initializer_list<std::uint64_t> keys) {
    std::uint64_t h = mix64(base_seed);
    for (std::uint64_t k : keys) h = mix64(h ^ mix64(k + 0x632BE59BD9B4E019ULL));
    return h;
}

/// Per-trajectory random stream. Not shared between threads.
class RngStream {
public:
    using Engine = std::mt19937_64;

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on the open interval (0, 1).
    double uniform_open() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53; }

    double normal() { return normal_(engine_); }

    /// Exact Poisson variate (multiplication method for small means,
    /// rejection for large ones, as provided by the standard library).
    std::int64_t poisson(double mean) {
        if (!(mean > 0.0)) return 0;
        std::poisson_distribution<std::int64_t> dist(mean);
        return dist(engine_);
    }

    Engine& engine() { return engine_; }

private:
    Engine engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace nanolaser
