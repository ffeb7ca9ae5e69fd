#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "skperlin/metrics.hpp"

using namespace skperlin;

namespace {

constexpr double kPi = 3.14159265358979323846;

MotionSequence identity_sequence(std::size_t frames, std::size_t joints) {
    MotionSequence seq(frames, joints, 60.0);
    for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t j = 0; j < joints; ++j) seq.set_joint_r6d(t, j, t_pose_r6d());
    return seq;
}

// Independent FK oracle: composes global rotations straight from the parent
// chain without going through the library's FkResult.
Mat3 oracle_global(const MotionSequence& seq, const SkeletonConfig& sk, std::size_t t, int j) {
    std::vector<int> chain;
    for (int cur = j; cur >= 0; cur = sk.joints[static_cast<std::size_t>(cur)].parent)
        chain.push_back(cur);
    Mat3 g = Mat3::identity();
    for (auto it = chain.rbegin(); it != chain.rend(); ++it)
        g = g * r6d_to_rotmat(seq.joint_r6d(t, static_cast<std::size_t>(*it)));
    return g;
}

}  // namespace

TEST_CASE("all metrics vanish on identical sequences") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence seq = synth_motion(20, 60.0, 1, 2.0, 0.6);
    CHECK(sip_error(seq, seq, sk) == 0.0);
    CHECK(angular_error(seq, seq, sk) == 0.0);
    CHECK(positional_error(seq, seq, sk) == 0.0);
    const MetricResult m = evaluate_metrics(seq, seq, sk);
    CHECK(m.sip_deg == 0.0);
    CHECK(m.angular_deg == 0.0);
    CHECK(m.positional_cm == 0.0);
    CHECK(m.sip_std == 0.0);
}

TEST_CASE("left-hip perturbation spreads over the SIP joints per the FK oracle") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence gt = identity_sequence(1, 24);
    MotionSequence pred = gt;
    pred.set_joint_r6d(0, 1, rotmat_to_r6d(axis_angle({1, 0, 0}, 10.0 * kPi / 180.0)));

    // oracle value: geodesic angle between oracle globals, averaged over SIP joints
    double want = 0.0;
    for (int j : sk.sip_joints)
        want += geodesic_angle_deg(oracle_global(pred, sk, 0, j), oracle_global(gt, sk, 0, j));
    want /= static_cast<double>(sk.sip_joints.size());
    CHECK(want == Catch::Approx(10.0 / 4.0).margin(1e-9));  // only the hip itself is a SIP joint
    CHECK(sip_error(pred, gt, sk) == Catch::Approx(want).margin(1e-9));
}

TEST_CASE("identical global rotation on both sequences cancels") {
    const SkeletonConfig sk = default_skeleton();
    MotionSequence a = identity_sequence(2, 24);
    MotionSequence b = identity_sequence(2, 24);
    const R6d root = rotmat_to_r6d(axis_angle({0, 0, 1}, kPi / 2.0));
    for (std::size_t t = 0; t < 2; ++t) {
        a.set_joint_r6d(t, 0, root);
        b.set_joint_r6d(t, 0, root);
    }
    CHECK(sip_error(a, b, sk) == Catch::Approx(0.0).margin(1e-9));
    CHECK(angular_error(a, b, sk) == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("angular error of a leaf perturbation averages over all joints") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence gt = identity_sequence(1, 24);
    MotionSequence pred = gt;
    pred.set_joint_r6d(0, 23, rotmat_to_r6d(axis_angle({0, 1, 0}, 12.0 * kPi / 180.0)));
    CHECK(angular_error(pred, gt, sk) == Catch::Approx(12.0 / 24.0).margin(1e-9));
}

TEST_CASE("angular error of a root perturbation hits every joint") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence gt = identity_sequence(1, 24);
    MotionSequence pred = gt;
    pred.set_joint_r6d(0, 0, rotmat_to_r6d(axis_angle({0, 0, 1}, 12.0 * kPi / 180.0)));
    CHECK(angular_error(pred, gt, sk) == Catch::Approx(12.0).margin(1e-6));
}

TEST_CASE("positional error of a planar root flip doubles the radial parts") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence gt = identity_sequence(1, 24);
    MotionSequence pred = gt;
    pred.set_joint_r6d(0, 0, rotmat_to_r6d(axis_angle({0, 0, 1}, kPi)));

    // reflection oracle: a 180-degree z-rotation about the root negates the
    // xy components of every joint's rest position relative to the root
    const FkResult rest = forward_kinematics(gt, sk);
    const Vec3 root = rest.pos(0, 0);
    double want = 0.0;
    for (std::size_t j = 0; j < 24; ++j) {
        const Vec3 rel = rest.pos(0, j) - root;
        want += 2.0 * std::sqrt(rel.x * rel.x + rel.y * rel.y);
    }
    want = 100.0 * want / 24.0;
    CHECK(positional_error(pred, gt, sk) == Catch::Approx(want).margin(1e-9));
}

TEST_CASE("scaled skeleton offsets shift positions by the rest distances") {
    // guards against silent unit errors: doubling every offset moves each
    // joint by exactly its rest position norm
    const SkeletonConfig sk = default_skeleton();
    SkeletonConfig sk2 = sk;
    for (Joint& j : sk2.joints) j.offset = j.offset * 2.0;
    const MotionSequence seq = identity_sequence(1, 24);
    const FkResult a = forward_kinematics(seq, sk);
    const FkResult b = forward_kinematics(seq, sk2);
    for (std::size_t j = 0; j < 24; ++j)
        CHECK((b.pos(0, j) - a.pos(0, j)).norm() == Catch::Approx(a.pos(0, j).norm()).margin(1e-12));
}

TEST_CASE("metrics are symmetric in their arguments") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence a = synth_motion(12, 60.0, 7, 2.0, 0.5);
    const MotionSequence b = synth_motion(12, 60.0, 8, 2.0, 0.5);
    CHECK(sip_error(a, b, sk) == Catch::Approx(sip_error(b, a, sk)).margin(1e-9));
    CHECK(angular_error(a, b, sk) == Catch::Approx(angular_error(b, a, sk)).margin(1e-9));
    CHECK(positional_error(a, b, sk) == Catch::Approx(positional_error(b, a, sk)).margin(1e-9));
}

TEST_CASE("any difference yields strictly positive errors") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence gt = identity_sequence(1, 24);
    MotionSequence pred = gt;
    pred.set_joint_r6d(0, 16, rotmat_to_r6d(axis_angle({1, 1, 0}, 1e-4)));
    CHECK(angular_error(pred, gt, sk) > 0.0);
    CHECK(sip_error(pred, gt, sk) > 0.0);
}

TEST_CASE("metric preconditions") {
    const SkeletonConfig sk = default_skeleton();
    const MotionSequence a = identity_sequence(2, 24);
    const MotionSequence b = identity_sequence(3, 24);
    CHECK_THROWS_AS(angular_error(a, b, sk), std::invalid_argument);
    MotionSequence c = identity_sequence(2, 24);
    c.fps = 30.0;
    CHECK_THROWS_AS(angular_error(a, c, sk), std::invalid_argument);
    const MotionSequence d = identity_sequence(2, 10);
    CHECK_THROWS_AS(angular_error(d, d, sk), std::invalid_argument);
}
