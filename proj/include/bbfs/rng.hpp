#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace bbfs {

/// All randomness in the library flows from one of these, seeded from the
/// experiment config. Streams for sub-tasks are forked by label so results
/// do not depend on execution order. The generator is std::mt19937_64;
/// doubles are produced by the fixed 53-bit ldexp recipe below, never by
/// std::uniform_real_distribution, so that byte-identical reruns hold.
class SeededRng {
public:
    explicit SeededRng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    /// Child stream whose seed depends only on (seed, label).
    SeededRng fork(std::string_view label) const {
        std::uint64_t h = 1469598103934665603ull;  // FNV-1a
        for (char c : label) {
            h ^= static_cast<std::uint64_t>(static_cast<unsigned char>(c));
            h *= 1099511628211ull;
        }
        return SeededRng(h ^ (seed_ * 0x9e3779b97f4a7c15ull));
    }

    std::uint64_t next() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Uniform integer in [lo, hi] inclusive.
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<std::int64_t>(gen_() % span);
    }

private:
    std::mt19937_64 gen_;
    std::uint64_t seed_;
};

}  // namespace bbfs
