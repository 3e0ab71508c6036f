#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <random>
#include <string_view>

#include "qbias/matrix.hpp"

namespace qbias {

namespace detail {

// splitmix64 finalizer; used to mix seeds, never as the main generator.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Combine a base seed with a task tag into an independent substream seed.
// Parallel sweep workers rely on this being pure: the stream a task sees
// depends only on (seed, tags), never on scheduling.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t tag) {
    return detail::mix64(seed ^ detail::mix64(tag));
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> tags) {
    std::uint64_t s = seed;
    for (std::uint64_t t : tags) s = mix_seed(s, t);
    return s;
}

// FNV-1a, for deriving tags from family labels.
inline std::uint64_t hash_label(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Deterministic random stream. Normal deviates are produced by an explicit
// Box-Muller transform rather than std::normal_distribution, whose output
// sequence is implementation defined.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Standard normal via Box-Muller; both deviates are consumed to keep the
    // stream position a pure function of the call count.
    double normal() {
        const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    Complex normal_complex() {
        const double re = normal();
        const double im = normal();
        return {re, im};
    }

private:
    std::mt19937_64 engine_;
};

} // namespace qbias
