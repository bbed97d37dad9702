#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace lapchol {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Uniform double in (0, 1] from the top 53 bits.
constexpr double unit_interval(std::uint64_t bits) noexcept
{
    return static_cast<double>((bits >> 11) + 1) * 0x1.0p-53;
}

/// Counter-based generator for the elimination samplers.
///
/// A draw is a pure function of (seed, elimination index, star index, draw
/// index), so two runs that visit the same eliminations in the same order see
/// the same samples regardless of which output format they build.
class CounterRng {
public:
    explicit constexpr CounterRng(std::uint64_t seed = 0) noexcept
        : key_(mix64(seed ^ 0x6A09E667F3BCC908ULL))
    {}

    /// Key for one elimination; cheap to derive once per vertex.
    constexpr std::uint64_t elimination_key(std::uint64_t elimination) const noexcept
    {
        return mix64(key_ ^ (elimination * 0xD1B54A32D192ED03ULL));
    }

    static constexpr double uniform_keyed(std::uint64_t elim_key, std::uint64_t star,
                                    std::uint64_t draw) noexcept
    {
        return unit_interval(mix64(elim_key ^ (star * 0x9E6C63D0676A9A99ULL)
                                   ^ (draw * 0xC2B2AE3D27D4EB4FULL + 0x165667B19E3779F9ULL)));
    }

    constexpr double uniform(std::uint64_t elimination, std::uint64_t star,
                             std::uint64_t draw) const noexcept
    {
        return uniform_keyed(elimination_key(elimination), star, draw);
    }

private:
    std::uint64_t key_;
};

/// Sequential stream used by the generators and right-hand sides.
///
/// Integer and uniform draws avoid std distributions so results match across
/// standard library implementations.
class StreamRng {
public:
    explicit StreamRng(std::uint64_t seed) noexcept : state_(mix64(seed ^ 0xA0761D6478BD642FULL)) {}

    std::uint64_t next() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double uniform() noexcept { return unit_interval(next()); }

    // Uniform integer in [0, bound) by multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound) noexcept
    {
        if (bound <= 1) {
            return 0;
        }
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            const __uint128_t m = static_cast<__uint128_t>(next()) * bound;
            if (static_cast<std::uint64_t>(m) >= threshold) {
                return static_cast<std::uint64_t>(m >> 64);
            }
        }
    }

    // Uniform integer in [lo, hi].
    std::int64_t between(std::int64_t lo, std::int64_t hi) noexcept
    {
        return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    bool coin(double p = 0.5) noexcept { return uniform() <= p; }

    // Box-Muller; one value per call.
    double normal() noexcept
    {
        const double u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    StreamRng fork(std::uint64_t salt) noexcept { return StreamRng(next() ^ mix64(salt)); }

private:
    std::uint64_t state_;
};

}  // namespace lapchol
