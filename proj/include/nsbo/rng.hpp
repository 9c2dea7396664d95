// rng.hpp -- seeded random streams with a fixed draw discipline.
//
// Every helper consumes exactly one 64-bit draw per call, including the
// degenerate single-candidate cases. Runs are therefore replayable from a
// root seed, and independently derived streams never perturb each other.
#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace nsbo {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives the seed of an independent purpose-tagged stream from a root seed.
inline std::uint64_t derive_seed(std::uint64_t root, std::uint64_t tag) {
    return splitmix64(splitmix64(root) ^ splitmix64(~tag));
}

class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next() { return gen_(); }

    /// Uniform double in [0, 1), 53 random bits.
    double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform index in [0, n). One draw, multiply-shift (bias < n / 2^64).
    std::size_t pick(std::size_t n) {
        if (n == 0) throw std::invalid_argument("pick: empty range");
        using u128 = unsigned __int128;
        return static_cast<std::size_t>((static_cast<u128>(next()) * n) >> 64);
    }

    /// Roulette-wheel draw: index i with probability weights[i] / sum(weights).
    /// Weights must be non-negative with a positive sum. One draw.
    std::size_t roulette(std::span<const double> weights) {
        double total = 0.0;
        for (double w : weights) total += w;
        if (!(total > 0.0)) throw std::invalid_argument("roulette: weights sum to zero");
        const double u = next_unit() * total;
        double acc = 0.0;
        std::size_t last_positive = weights.size();
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            acc += weights[i];
            last_positive = i;
            if (u < acc) return i;
        }
        return last_positive;  // u landed on the rounding sliver past acc
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace nsbo
