#pragma once

// The motion label container: T x J x 6 six-number rotation channels at a
// fixed frame rate.

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "skperlin/rotmath.hpp"

namespace skperlin {

inline constexpr std::size_t kRotationChannels = 6;

struct MotionSequence {
    std::size_t frames = 0;
    std::size_t joints = 0;
    double fps = 60.0;
    std::vector<double> data;  // frames * joints * 6, (t, j, c) order

    MotionSequence() = default;
    MotionSequence(std::size_t t, std::size_t j, double frame_rate)
        : frames(t), joints(j), fps(frame_rate), data(t * j * kRotationChannels, 0.0) {
        if (frame_rate <= 0.0) throw std::invalid_argument("MotionSequence: fps must be positive");
    }

    std::size_t index(std::size_t t, std::size_t j, std::size_t c) const noexcept {
        return (t * joints + j) * kRotationChannels + c;
    }
    double at(std::size_t t, std::size_t j, std::size_t c) const { return data[index(t, j, c)]; }
    double& at(std::size_t t, std::size_t j, std::size_t c) { return data[index(t, j, c)]; }

    R6d joint_r6d(std::size_t t, std::size_t j) const {
        R6d v;
        const std::size_t base = index(t, j, 0);
        for (std::size_t c = 0; c < kRotationChannels; ++c) v[c] = data[base + c];
        return v;
    }
    void set_joint_r6d(std::size_t t, std::size_t j, const R6d& v) {
        const std::size_t base = index(t, j, 0);
        for (std::size_t c = 0; c < kRotationChannels; ++c) data[base + c] = v[c];
    }

    bool same_shape(const MotionSequence& o) const noexcept {
        return frames == o.frames && joints == o.joints;
    }
};

}  // namespace skperlin
