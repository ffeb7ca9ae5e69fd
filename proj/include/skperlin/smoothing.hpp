#pragma once

// The label smoothing operator R' = (1 - eps) R + eps u, the baseline
// strategies it is compared against, and the temporal Gaussian filter.
// Smoothing operates on the six-number rotation channels directly; outputs
// are training targets and are not re-orthonormalized unless reproject() is
// called.

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "skperlin/io.hpp"
#include "skperlin/motion.hpp"
#include "skperlin/noise.hpp"

namespace skperlin {

struct SkPerlinStrategy { PerlinParams params; };
struct GaussianStrategy { double sigma = 0.07; };
struct UniformStrategy { double lo = -0.07, hi = 0.07; };
struct TPoseStrategy {};
struct DatasetMeanStrategy { std::vector<R6d> mean_pose; };
struct TemporalGaussianStrategy { double sigma_frames = 3.0; };

struct SmoothingStrategy {
    std::variant<SkPerlinStrategy, GaussianStrategy, UniformStrategy, TPoseStrategy,
                 DatasetMeanStrategy, TemporalGaussianStrategy>
        kind = SkPerlinStrategy{};
    double epsilon = 0.1;

    void validate() const {
        if (!(epsilon >= 0.0 && epsilon <= 1.0))
            throw std::invalid_argument("SmoothingStrategy: epsilon must be in [0, 1]");
        if (const auto* g = std::get_if<GaussianStrategy>(&kind)) {
            if (!(g->sigma > 0.0)) throw std::invalid_argument("gaussian strategy: sigma must be > 0");
        } else if (const auto* u = std::get_if<UniformStrategy>(&kind)) {
            if (!(u->lo < u->hi)) throw std::invalid_argument("uniform strategy: need lo < hi");
        } else if (const auto* t = std::get_if<TemporalGaussianStrategy>(&kind)) {
            if (!(t->sigma_frames > 0.0))
                throw std::invalid_argument("temporal strategy: sigma must be > 0");
        } else if (const auto* p = std::get_if<SkPerlinStrategy>(&kind)) {
            p->params.validate();
        }
    }
};

// Elementwise affine blend. eps = 0 and eps = 1 reproduce R and u bit-exactly.
inline MotionSequence smooth_labels(const MotionSequence& labels, const NoiseField& u, double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("smooth_labels: epsilon must be in [0, 1]");
    if (labels.frames != u.frames || labels.joints != u.joints || u.channels != kRotationChannels)
        throw std::invalid_argument("smooth_labels: shape mismatch between labels and noise field");
    MotionSequence out = labels;
    if (epsilon == 0.0) return out;
    if (epsilon == 1.0) {
        out.data = u.values;
        return out;
    }
    const double keep = 1.0 - epsilon;
    for (std::size_t i = 0; i < out.data.size(); ++i)
        out.data[i] = keep * labels.data[i] + epsilon * u.values[i];
    return out;
}

// i.i.d. field for the Gaussian / uniform baselines. Values are keyed by
// (seed, cell index), so the field is reproducible regardless of evaluation
// order.
inline NoiseField make_baseline_field(const SmoothingStrategy& strategy, std::size_t frames,
                                      std::size_t joints, double fps, std::uint64_t seed) {
    strategy.validate();
    NoiseField f;
    f.frames = frames;
    f.joints = joints;
    f.channels = kRotationChannels;
    f.fps = fps;
    f.params.seed = seed;
    f.values.resize(frames * joints * kRotationChannels);
    if (const auto* g = std::get_if<GaussianStrategy>(&strategy.kind)) {
        for (std::size_t i = 0; i < f.values.size(); ++i)
            f.values[i] = g->sigma * detail::gaussian_at(seed, i);
    } else if (const auto* u = std::get_if<UniformStrategy>(&strategy.kind)) {
        for (std::size_t i = 0; i < f.values.size(); ++i)
            f.values[i] = detail::uniform_at(seed, i, u->lo, u->hi);
    } else {
        throw std::invalid_argument("make_baseline_field: strategy must be gaussian or uniform");
    }
    return f;
}

// Blend every frame toward one static pose. The T-pose in six-number form is
// [1,0,0, 0,1,0] per joint.
inline MotionSequence static_blend(const MotionSequence& labels, const std::vector<R6d>& pose,
                                   double epsilon) {
    if (!(epsilon >= 0.0 && epsilon <= 1.0))
        throw std::invalid_argument("static_blend: epsilon must be in [0, 1]");
    if (pose.size() != labels.joints)
        throw std::invalid_argument("static_blend: pose has " + std::to_string(pose.size()) +
                                    " joints, sequence has " + std::to_string(labels.joints));
    MotionSequence out = labels;
    if (epsilon == 0.0) return out;
    const double keep = 1.0 - epsilon;
    for (std::size_t t = 0; t < out.frames; ++t)
        for (std::size_t j = 0; j < out.joints; ++j)
            for (std::size_t c = 0; c < kRotationChannels; ++c) {
                double& v = out.data[out.index(t, j, c)];
                v = keep * v + epsilon * pose[j][c];
            }
    return out;
}

inline std::vector<R6d> t_pose(std::size_t joints) {
    return std::vector<R6d>(joints, t_pose_r6d());
}

// 1-D Gaussian convolution along time per joint channel. Kernel truncated at
// +-3 sigma and normalized to unit sum; boundaries are symmetric-reflected
// (x[-1] mirrors x[0]), which keeps each channel's mean unchanged.
inline MotionSequence temporal_gaussian_smooth(const MotionSequence& labels, double sigma_frames) {
    if (!(sigma_frames > 0.0))
        throw std::invalid_argument("temporal_gaussian_smooth: sigma must be > 0");
    if (labels.frames < 3)
        throw std::invalid_argument("temporal_gaussian_smooth: need at least 3 frames");

    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma_frames)));
    std::vector<double> kernel(2 * radius + 1);
    double sum = 0.0;
    for (int k = -radius; k <= radius; ++k) {
        const double w = std::exp(-0.5 * (k / sigma_frames) * (k / sigma_frames));
        kernel[k + radius] = w;
        sum += w;
    }
    for (double& w : kernel) w /= sum;

    const auto frames = static_cast<std::ptrdiff_t>(labels.frames);
    auto reflect = [frames](std::ptrdiff_t t) {
        while (t < 0 || t >= frames) {
            if (t < 0) t = -1 - t;
            if (t >= frames) t = 2 * frames - 1 - t;
        }
        return static_cast<std::size_t>(t);
    };

    MotionSequence out = labels;
    const std::size_t stride = labels.joints * kRotationChannels;
    for (std::size_t ch = 0; ch < stride; ++ch) {
        for (std::ptrdiff_t t = 0; t < frames; ++t) {
            double acc = 0.0;
            for (int k = -radius; k <= radius; ++k)
                acc += kernel[k + radius] * labels.data[reflect(t + k) * stride + ch];
            out.data[static_cast<std::size_t>(t) * stride + ch] = acc;
        }
    }
    return out;
}

// Per-joint, per-channel mean over all frames of all sequences.
inline std::vector<R6d> dataset_mean_pose(const std::vector<MotionSequence>& sequences) {
    if (sequences.empty()) throw std::invalid_argument("dataset_mean_pose: empty input");
    const std::size_t joints = sequences.front().joints;
    std::vector<R6d> mean(joints, R6d{});
    std::size_t total_frames = 0;
    for (const MotionSequence& s : sequences) {
        if (s.joints != joints)
            throw std::invalid_argument("dataset_mean_pose: joint-count mismatch across sequences");
        for (std::size_t t = 0; t < s.frames; ++t)
            for (std::size_t j = 0; j < joints; ++j)
                for (std::size_t c = 0; c < kRotationChannels; ++c) mean[j][c] += s.at(t, j, c);
        total_frames += s.frames;
    }
    if (total_frames == 0) throw std::invalid_argument("dataset_mean_pose: no frames");
    for (R6d& v : mean)
        for (double& e : v) e /= static_cast<double>(total_frames);
    return mean;
}

inline std::vector<R6d> dataset_mean_pose(const std::vector<std::string>& files) {
    if (files.empty()) throw std::invalid_argument("dataset_mean_pose: empty file list");
    std::vector<MotionSequence> seqs;
    seqs.reserve(files.size());
    for (const std::string& f : files) seqs.push_back(read_motion(f));
    return dataset_mean_pose(seqs);
}

// Map every joint through the Gram-Schmidt reconstruction and back, snapping
// smoothed labels onto valid rotations.
inline MotionSequence reproject(const MotionSequence& seq) {
    MotionSequence out = seq;
    for (std::size_t t = 0; t < seq.frames; ++t)
        for (std::size_t j = 0; j < seq.joints; ++j)
            out.set_joint_r6d(t, j, rotmat_to_r6d(r6d_to_rotmat(seq.joint_r6d(t, j))));
    return out;
}

// One entry point for every strategy; used by the command-line front end.
inline MotionSequence apply_strategy(const MotionSequence& labels, const SmoothingStrategy& strategy,
                                     const SkeletonConfig& sk, std::uint64_t seed) {
    strategy.validate();
    if (const auto* p = std::get_if<SkPerlinStrategy>(&strategy.kind)) {
        PerlinParams pp = p->params;
        pp.seed = seed;
        if (labels.joints != sk.joint_count())
            throw std::invalid_argument("apply_strategy: sequence joints do not match skeleton");
        const NoiseField u = sk_perlin(pp, sk, labels.frames, labels.fps);
        return smooth_labels(labels, u, strategy.epsilon);
    }
    if (std::holds_alternative<GaussianStrategy>(strategy.kind) ||
        std::holds_alternative<UniformStrategy>(strategy.kind)) {
        const NoiseField u = make_baseline_field(strategy, labels.frames, labels.joints, labels.fps, seed);
        return smooth_labels(labels, u, strategy.epsilon);
    }
    if (std::holds_alternative<TPoseStrategy>(strategy.kind))
        return static_blend(labels, t_pose(labels.joints), strategy.epsilon);
    if (const auto* m = std::get_if<DatasetMeanStrategy>(&strategy.kind))
        return static_blend(labels, m->mean_pose, strategy.epsilon);
    const auto& tg = std::get<TemporalGaussianStrategy>(strategy.kind);
    return temporal_gaussian_smooth(labels, tg.sigma_frames);
}

}  // namespace skperlin
