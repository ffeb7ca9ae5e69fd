#pragma once

// Pose-accuracy metrics between two motion sequences, computed on the
// forward-kinematics-composed global rotations: SIP error (hips + shoulders),
// angular error (all joints) and positional error in centimeters. Mesh error
// is out of scope (it needs a body mesh).

#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skperlin/io.hpp"
#include "skperlin/motion.hpp"
#include "skperlin/skeleton.hpp"

namespace skperlin {

struct MetricResult {
    double sip_deg = 0.0;
    double angular_deg = 0.0;
    double positional_cm = 0.0;
    double sip_std = 0.0;        // std over per-frame means
    double angular_std = 0.0;
    double positional_std = 0.0;
};

namespace detail {

inline void check_pair(const MotionSequence& pred, const MotionSequence& gt, const SkeletonConfig& sk) {
    if (!pred.same_shape(gt))
        throw std::invalid_argument("metrics: sequence shapes differ");
    if (pred.fps != gt.fps) throw std::invalid_argument("metrics: frame rates differ");
    if (pred.joints != sk.joint_count())
        throw std::invalid_argument("metrics: joint count does not match skeleton");
}

struct MeanStd {
    double mean = 0.0, stdev = 0.0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
    const double n = static_cast<double>(xs.size());
    double m = 0.0;
    for (double x : xs) m += x;
    m /= n;
    double v = 0.0;
    for (double x : xs) v += (x - m) * (x - m);
    return {m, std::sqrt(v / n)};
}

}  // namespace detail

// Mean geodesic angle of global rotations over the configured SIP joints.
inline double sip_error(const MotionSequence& pred, const MotionSequence& gt, const SkeletonConfig& sk) {
    detail::check_pair(pred, gt, sk);
    if (sk.sip_joints.empty()) throw std::invalid_argument("sip_error: skeleton has no sip_joints");
    const FkResult fp = forward_kinematics(pred, sk);
    const FkResult fg = forward_kinematics(gt, sk);
    double sum = 0.0;
    for (std::size_t t = 0; t < pred.frames; ++t)
        for (int j : sk.sip_joints)
            sum += geodesic_angle_deg(fp.rot(t, static_cast<std::size_t>(j)),
                                      fg.rot(t, static_cast<std::size_t>(j)));
    return sum / (static_cast<double>(pred.frames) * static_cast<double>(sk.sip_joints.size()));
}

// Mean geodesic angle of global rotations over all joints and frames.
inline double angular_error(const MotionSequence& pred, const MotionSequence& gt,
                            const SkeletonConfig& sk) {
    detail::check_pair(pred, gt, sk);
    const FkResult fp = forward_kinematics(pred, sk);
    const FkResult fg = forward_kinematics(gt, sk);
    double sum = 0.0;
    for (std::size_t t = 0; t < pred.frames; ++t)
        for (std::size_t j = 0; j < pred.joints; ++j)
            sum += geodesic_angle_deg(fp.rot(t, j), fg.rot(t, j));
    return sum / (static_cast<double>(pred.frames) * static_cast<double>(pred.joints));
}

// Mean joint position distance in centimeters (offsets are meters).
inline double positional_error(const MotionSequence& pred, const MotionSequence& gt,
                               const SkeletonConfig& sk) {
    detail::check_pair(pred, gt, sk);
    const FkResult fp = forward_kinematics(pred, sk);
    const FkResult fg = forward_kinematics(gt, sk);
    double sum = 0.0;
    for (std::size_t t = 0; t < pred.frames; ++t)
        for (std::size_t j = 0; j < pred.joints; ++j) sum += (fp.pos(t, j) - fg.pos(t, j)).norm();
    return 100.0 * sum / (static_cast<double>(pred.frames) * static_cast<double>(pred.joints));
}

// All three metrics plus the std of the per-frame means, in one FK pass per
// sequence.
inline MetricResult evaluate_metrics(const MotionSequence& pred, const MotionSequence& gt,
                                     const SkeletonConfig& sk) {
    detail::check_pair(pred, gt, sk);
    if (sk.sip_joints.empty()) throw std::invalid_argument("evaluate_metrics: skeleton has no sip_joints");
    const FkResult fp = forward_kinematics(pred, sk);
    const FkResult fg = forward_kinematics(gt, sk);
    std::vector<double> sip(pred.frames), ang(pred.frames), pos(pred.frames);
    for (std::size_t t = 0; t < pred.frames; ++t) {
        double s = 0.0;
        for (int j : sk.sip_joints)
            s += geodesic_angle_deg(fp.rot(t, static_cast<std::size_t>(j)),
                                    fg.rot(t, static_cast<std::size_t>(j)));
        sip[t] = s / static_cast<double>(sk.sip_joints.size());
        double a = 0.0, p = 0.0;
        for (std::size_t j = 0; j < pred.joints; ++j) {
            a += geodesic_angle_deg(fp.rot(t, j), fg.rot(t, j));
            p += (fp.pos(t, j) - fg.pos(t, j)).norm();
        }
        ang[t] = a / static_cast<double>(pred.joints);
        pos[t] = 100.0 * p / static_cast<double>(pred.joints);
    }
    const auto ms = detail::mean_std(sip);
    const auto ma = detail::mean_std(ang);
    const auto mp = detail::mean_std(pos);
    return {ms.mean, ma.mean, mp.mean, ms.stdev, ma.stdev, mp.stdev};
}

inline nlohmann::json metrics_to_json(const MetricResult& m) {
    return {{"sip_deg", m.sip_deg},       {"sip_std", m.sip_std},
            {"angular_deg", m.angular_deg}, {"angular_std", m.angular_std},
            {"positional_cm", m.positional_cm}, {"positional_std", m.positional_std}};
}

// Mirrors the usual SIP / Ang / Joint table layout.
inline void write_metrics_csv(const std::string& path, const MetricResult& m) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "sip_deg,sip_std,angular_deg,angular_std,positional_cm,positional_std\n";
    out << detail::format_double(m.sip_deg) << "," << detail::format_double(m.sip_std) << ","
        << detail::format_double(m.angular_deg) << "," << detail::format_double(m.angular_std) << ","
        << detail::format_double(m.positional_cm) << "," << detail::format_double(m.positional_std)
        << "\n";
}

}  // namespace skperlin
