#pragma once

// Counter-based deterministic random primitives. Everything downstream that
// needs randomness (lattice gradients, baseline noise fields, synthetic
// motions) derives its values from these mixers so that results are
// bit-identical across runs, platforms and thread schedules.

#include <cstdint>
#include <cmath>

namespace skperlin::detail {

inline constexpr std::uint64_t golden_gamma = 0x9E3779B97F4A7C15ull;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += golden_gamma;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Mix a coordinate triple and a seed into one well-stirred 64-bit word.
inline constexpr std::uint64_t mix_coords(std::int64_t ix, std::int64_t iy,
                                          std::int64_t iz, std::uint64_t seed) noexcept {
    std::uint64_t h = splitmix64(seed ^ static_cast<std::uint64_t>(ix));
    h = splitmix64(h ^ static_cast<std::uint64_t>(iy));
    h = splitmix64(h ^ static_cast<std::uint64_t>(iz));
    return h;
}

inline constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    return splitmix64(splitmix64(seed ^ tag) + tag);
}

// Uniform double in [0, 1) from the top 53 bits.
inline constexpr double to_unit(std::uint64_t h) noexcept {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

// Small forward-only stream over splitmix64, used where a handful of
// sequential draws keyed by one hash are needed.
class SplitMix {
public:
    explicit constexpr SplitMix(std::uint64_t state) noexcept : state_(state) {}

    constexpr std::uint64_t next() noexcept {
        state_ += golden_gamma;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    double next_unit() noexcept { return to_unit(next()); }

    // Box-Muller; one Gaussian per call, cosine branch only.
    double next_gaussian() noexcept {
        double u1 = next_unit();
        if (u1 < 1e-300) u1 = 1e-300;
        const double u2 = next_unit();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

private:
    std::uint64_t state_;
};

// Stateless Gaussian draw keyed by (seed, index, lane); used for i.i.d.
// baseline fields so the value of any cell is independent of evaluation order.
inline double gaussian_at(std::uint64_t seed, std::uint64_t index) noexcept {
    double u1 = to_unit(mix_coords(static_cast<std::int64_t>(index), 0, 1, seed));
    if (u1 < 1e-300) u1 = 1e-300;
    const double u2 = to_unit(mix_coords(static_cast<std::int64_t>(index), 1, 0, seed));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

inline double uniform_at(std::uint64_t seed, std::uint64_t index, double lo, double hi) noexcept {
    return lo + (hi - lo) * to_unit(mix_coords(static_cast<std::int64_t>(index), 2, 3, seed));
}

}  // namespace skperlin::detail
