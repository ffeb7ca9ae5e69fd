#pragma once

// Lattice gradient noise, fractal octave synthesis and the skeleton-based
// field that drives motion label smoothing, together with the closed-form
// bound calculators for amplitude, temporal rate and inter-joint variation.
//
// Gradient vectors come from a seeded coordinate hash feeding a 3-component
// Gaussian draw normalized to unit length, so the field is a pure function of
// (coordinates, seed): no permutation table, no global state, bit-identical
// under any evaluation order.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "skperlin/detail/rng.hpp"
#include "skperlin/skeleton.hpp"

namespace skperlin {

struct PerlinParams {
    double base_scale = 0.07;    // noise amplitude, six-channel units
    double time_scale = 0.5;     // lattice cells spanned by the time axis
    double space_scale = 0.7;    // lattice cells per chain/joint index
    double persistence = 0.5;    // per-octave amplitude decay, in (0, 1]
    int octaves = 5;
    double lacunarity = 1.5;     // per-octave frequency growth, >= 1
    double offset_weight = 0.5;  // weight of the per-joint single-octave offset
    std::uint64_t seed = 0;

    void validate() const {
        if (!(base_scale >= 0.0) || !std::isfinite(base_scale))
            throw std::invalid_argument("PerlinParams: base_scale must be >= 0");
        if (!(time_scale > 0.0)) throw std::invalid_argument("PerlinParams: time_scale must be > 0");
        if (!(space_scale > 0.0)) throw std::invalid_argument("PerlinParams: space_scale must be > 0");
        if (!(persistence > 0.0 && persistence <= 1.0))
            throw std::invalid_argument("PerlinParams: persistence must be in (0, 1]");
        if (octaves < 1) throw std::invalid_argument("PerlinParams: octaves must be >= 1");
        if (!(lacunarity >= 1.0)) throw std::invalid_argument("PerlinParams: lacunarity must be >= 1");
        if (!(offset_weight >= 0.0)) throw std::invalid_argument("PerlinParams: offset_weight must be >= 0");
    }
};

struct NoiseField {
    std::size_t frames = 0;
    std::size_t joints = 0;
    std::size_t channels = kRotationChannels;
    double fps = 60.0;
    PerlinParams params;
    std::vector<double> values;  // frames * joints * channels, (t, j, c) order

    std::size_t index(std::size_t t, std::size_t j, std::size_t c) const noexcept {
        return (t * joints + j) * channels + c;
    }
    double at(std::size_t t, std::size_t j, std::size_t c) const { return values[index(t, j, c)]; }
    double& at(std::size_t t, std::size_t j, std::size_t c) { return values[index(t, j, c)]; }
};

namespace detail {

// Unit gradient for one lattice point. Gaussian draw keyed by the coordinate
// hash, normalized; a degenerate draw falls back to a fixed axis.
inline Vec3 lattice_gradient(std::int64_t ix, std::int64_t iy, std::int64_t iz,
                             std::uint64_t seed) noexcept {
    SplitMix s(mix_coords(ix, iy, iz, seed));
    const double g1 = s.next_gaussian();
    const double g2 = s.next_gaussian();
    const double g3 = s.next_gaussian();
    const double n = std::sqrt(g1 * g1 + g2 * g2 + g3 * g3);
    if (n < 1e-12) return {1.0, 0.0, 0.0};
    return {g1 / n, g2 / n, g3 / n};
}

// Quintic fade 6t^5 - 15t^4 + 10t^3.
inline constexpr double fade(double t) noexcept { return t * t * t * (t * (t * 6.0 - 15.0) + 10.0); }

inline constexpr double lerp(double a, double b, double t) noexcept { return a + (b - a) * t; }

}  // namespace detail

// Classic 3D gradient noise: dot products of the eight corner gradients with
// the offsets to (x, y, z), blended with the quintic fade per axis. Exactly
// zero at integer lattice points; |value| <= 1.
inline double perlin3(double x, double y, double z, std::uint64_t seed) noexcept {
    const double fx = std::floor(x), fy = std::floor(y), fz = std::floor(z);
    const auto ix = static_cast<std::int64_t>(fx);
    const auto iy = static_cast<std::int64_t>(fy);
    const auto iz = static_cast<std::int64_t>(fz);
    const double rx = x - fx, ry = y - fy, rz = z - fz;

    double corner[2][2][2];
    for (int dx = 0; dx < 2; ++dx)
        for (int dy = 0; dy < 2; ++dy)
            for (int dz = 0; dz < 2; ++dz) {
                const Vec3 g = detail::lattice_gradient(ix + dx, iy + dy, iz + dz, seed);
                corner[dx][dy][dz] = g.x * (rx - dx) + g.y * (ry - dy) + g.z * (rz - dz);
            }

    const double u = detail::fade(rx), v = detail::fade(ry), w = detail::fade(rz);
    const double q00 = detail::lerp(corner[0][0][0], corner[1][0][0], u);
    const double q10 = detail::lerp(corner[0][1][0], corner[1][1][0], u);
    const double q01 = detail::lerp(corner[0][0][1], corner[1][0][1], u);
    const double q11 = detail::lerp(corner[0][1][1], corner[1][1][1], u);
    return detail::lerp(detail::lerp(q00, q10, v), detail::lerp(q01, q11, v), w);
}

// Geometric series S(r, n) = (1 - r^n) / (1 - r), or n when r = 1.
inline double geometric_sum(double r, int n) {
    if (n < 1) throw std::invalid_argument("geometric_sum: n must be >= 1");
    if (r == 1.0) return static_cast<double>(n);
    return (1.0 - std::pow(r, n)) / (1.0 - r);
}

// Octave sum: sum_k base_scale * p^k * perlin3(l^k x, l^k y, l^k z, seed ^ k).
// |result| <= base_scale * S(p, octaves).
inline double fbm(double x, double y, double z, const PerlinParams& pp) {
    double sum = 0.0;
    double amp = pp.base_scale;
    double freq = 1.0;
    for (int k = 0; k < pp.octaves; ++k) {
        sum += amp * perlin3(freq * x, freq * y, freq * z, pp.seed ^ static_cast<std::uint64_t>(k));
        amp *= pp.persistence;
        freq *= pp.lacunarity;
    }
    return sum;
}

// Per-second upper bound on each channel's rate of change: g_max * S_b * S_t *
// S(p*l, oct). g_max is the per-unit-coordinate slope bound of the base noise
// (measure_base_gradient gives an empirical value for this implementation).
inline double gradient_bound(const PerlinParams& pp, double g_max) {
    if (!(g_max > 0.0)) throw std::invalid_argument("gradient_bound: g_max must be > 0");
    return g_max * pp.base_scale * pp.time_scale * geometric_sum(pp.persistence * pp.lacunarity, pp.octaves);
}

// Global amplitude bound B = S_b * S(p, oct) * sqrt(d) on the d-channel
// Euclidean norm of any field sample.
inline double amplitude_bound(const PerlinParams& pp, int d) {
    if (d < 1) throw std::invalid_argument("amplitude_bound: d must be >= 1");
    return pp.base_scale * geometric_sum(pp.persistence, pp.octaves) * std::sqrt(static_cast<double>(d));
}

// Bound C = k_g * bone_length * g / (S_s * f) on the noise difference between
// adjacent joints, with g the offset weight from the params.
inline double interjoint_bound(const PerlinParams& pp, double bone_length, double spatial_freq,
                               double k_g) {
    const double denom = pp.space_scale * spatial_freq;
    if (!(denom > 0.0)) throw std::invalid_argument("interjoint_bound: S_s * f must be > 0");
    return k_g * bone_length * pp.offset_weight / denom;
}

// Max finite-difference slope of the base noise per unit coordinate, measured
// over a dense random sample along all three axes.
inline double measure_base_gradient(std::uint64_t seed, std::size_t samples = 200000,
                                    double delta = 1e-4) {
    detail::SplitMix s(detail::derive_seed(seed, 0x67726164ull));
    double g = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        const double x = (s.next_unit() - 0.5) * 100.0;
        const double y = (s.next_unit() - 0.5) * 100.0;
        const double z = (s.next_unit() - 0.5) * 100.0;
        const double v = perlin3(x, y, z, seed);
        const double dx = std::abs(perlin3(x + delta, y, z, seed) - v);
        const double dy = std::abs(perlin3(x, y + delta, z, seed) - v);
        const double dz = std::abs(perlin3(x, y, z + delta, seed) - v);
        const double m = std::max(dx, std::max(dy, dz)) / delta;
        if (m > g) g = m;
    }
    return g;
}

// The skeleton-based field. Per (frame, joint, channel):
//
//   raw = fbm(x, S_s * chain_index(j), c) + w * S_b * perlin3(x, S_s * j, c)
//
// where x = S_t * t / (T - 1): the time axis spans S_t lattice cells
// regardless of length, so a longer sequence is a finer sampling of the same
// smooth field. The fbm term is shared by every joint of a chain; the
// single-octave per-joint term carries no higher octaves and keys the joint
// axis by global joint index. A single global rescale sets the field's max
// absolute value to the fbm amplitude budget S_b * S(p, oct), which keeps the
// six-channel norm within amplitude_bound(pp, 6).
inline NoiseField sk_perlin(const PerlinParams& pp, const SkeletonConfig& sk, std::size_t frames,
                            double fps) {
    pp.validate();
    sk.validate();
    if (frames < 2) throw std::invalid_argument("sk_perlin: need at least 2 frames");
    if (!(fps > 0.0)) throw std::invalid_argument("sk_perlin: fps must be positive");

    const std::size_t joints = sk.joint_count();
    NoiseField field;
    field.frames = frames;
    field.joints = joints;
    field.channels = kRotationChannels;
    field.fps = fps;
    field.params = pp;
    field.values.resize(frames * joints * kRotationChannels);

    const std::uint64_t offset_seed = detail::derive_seed(pp.seed, 0x6A6F696E74ull);
    const double tstep = pp.time_scale / static_cast<double>(frames - 1);

    double max_abs = 0.0;
    for (std::size_t t = 0; t < frames; ++t) {
        const double x = tstep * static_cast<double>(t);
        for (std::size_t j = 0; j < joints; ++j) {
            const double y_chain = pp.space_scale * static_cast<double>(static_cast<int>(sk.joints[j].chain));
            const double y_joint = pp.space_scale * static_cast<double>(j);
            for (std::size_t c = 0; c < kRotationChannels; ++c) {
                const double zc = static_cast<double>(c);
                const double raw = fbm(x, y_chain, zc, pp) +
                                   pp.offset_weight * pp.base_scale * perlin3(x, y_joint, zc, offset_seed);
                field.values[field.index(t, j, c)] = raw;
                const double a = std::abs(raw);
                if (a > max_abs) max_abs = a;
            }
        }
    }

    const double budget = pp.base_scale * geometric_sum(pp.persistence, pp.octaves);
    if (max_abs > 0.0 && budget > 0.0) {
        const double norm = budget / max_abs;
        for (double& v : field.values) v *= norm;
    }
    return field;
}

}  // namespace skperlin
