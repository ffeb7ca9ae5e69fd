#pragma once

// SMPL-style joint tree, the six kinematic chains, and forward kinematics.
//
// The config file is JSON:
//   {
//     "joints": [ {"name": "...", "parent": -1, "offset": [x, y, z], "chain": "torso"}, ... ],
//     "sip_joints": [1, 2, 16, 17]
//   }
// Joints must be listed parent-before-child with exactly one root (parent -1),
// and every joint carries one of the six chain labels.

#include <array>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "skperlin/motion.hpp"
#include "skperlin/rotmath.hpp"

namespace skperlin {

enum class Chain : int { left_leg = 0, right_leg = 1, left_arm = 2, right_arm = 3, torso = 4, head = 5 };

inline constexpr int kChainCount = 6;

inline std::string_view chain_name(Chain c) {
    switch (c) {
        case Chain::left_leg: return "left_leg";
        case Chain::right_leg: return "right_leg";
        case Chain::left_arm: return "left_arm";
        case Chain::right_arm: return "right_arm";
        case Chain::torso: return "torso";
        case Chain::head: return "head";
    }
    throw std::invalid_argument("chain_name: bad chain value");
}

inline Chain chain_from_name(std::string_view name) {
    for (int i = 0; i < kChainCount; ++i) {
        const Chain c = static_cast<Chain>(i);
        if (chain_name(c) == name) return c;
    }
    throw std::invalid_argument("unknown chain id \"" + std::string(name) + "\"");
}

struct Joint {
    std::string name;
    int parent = -1;      // -1 for the root
    Vec3 offset;          // rest-pose bone offset relative to parent, meters
    Chain chain = Chain::torso;
};

class SkeletonConfig {
public:
    std::vector<Joint> joints;
    std::vector<int> sip_joints;  // hips + shoulders by convention

    std::size_t joint_count() const noexcept { return joints.size(); }

    // Tree shape, chain coverage and SIP indices. Throws on violation.
    void validate() const {
        if (joints.empty()) throw std::runtime_error("skeleton: no joints");
        int roots = 0;
        for (std::size_t i = 0; i < joints.size(); ++i) {
            const int p = joints[i].parent;
            if (p == -1) {
                ++roots;
            } else if (p < 0 || static_cast<std::size_t>(p) >= i) {
                throw std::runtime_error("skeleton: tree-structure error at joint " + std::to_string(i) +
                                         " (parent must precede child)");
            }
        }
        if (roots != 1)
            throw std::runtime_error("skeleton: tree-structure error (" + std::to_string(roots) +
                                     " roots, expected exactly 1)");
        std::array<bool, kChainCount> seen{};
        for (const Joint& j : joints) seen[static_cast<int>(j.chain)] = true;
        for (int c = 0; c < kChainCount; ++c)
            if (!seen[c])
                throw std::runtime_error("skeleton: chain-coverage error (missing " +
                                         std::string(chain_name(static_cast<Chain>(c))) + ")");
        for (int s : sip_joints)
            if (s < 0 || static_cast<std::size_t>(s) >= joints.size())
                throw std::runtime_error("skeleton: sip_joints index out of range");
    }
};

// Members of one chain in root-to-tip order (joints are stored topologically,
// so index order is root-to-tip within a chain).
inline std::vector<int> chain_members(const SkeletonConfig& sk, Chain chain) {
    std::vector<int> out;
    for (std::size_t i = 0; i < sk.joints.size(); ++i)
        if (sk.joints[i].chain == chain) out.push_back(static_cast<int>(i));
    return out;
}

inline std::vector<int> chain_members(const SkeletonConfig& sk, std::string_view chain_id) {
    return chain_members(sk, chain_from_name(chain_id));
}

// Bundled 24-joint SMPL-topology skeleton with plausible bone offsets. The
// six chains partition all joints: torso absorbs pelvis and spine, head
// absorbs neck.
inline SkeletonConfig default_skeleton() {
    struct Row { const char* name; int parent; double x, y, z; Chain chain; };
    static const Row rows[24] = {
        {"pelvis",      -1,  0.000,  0.950,  0.000, Chain::torso},
        {"l_hip",        0,  0.090, -0.060,  0.000, Chain::left_leg},
        {"r_hip",        0, -0.090, -0.060,  0.000, Chain::right_leg},
        {"spine1",       0,  0.000,  0.110,  0.000, Chain::torso},
        {"l_knee",       1,  0.000, -0.380,  0.000, Chain::left_leg},
        {"r_knee",       2,  0.000, -0.380,  0.000, Chain::right_leg},
        {"spine2",       3,  0.000,  0.120,  0.000, Chain::torso},
        {"l_ankle",      4,  0.000, -0.400,  0.000, Chain::left_leg},
        {"r_ankle",      5,  0.000, -0.400,  0.000, Chain::right_leg},
        {"spine3",       6,  0.000,  0.130,  0.000, Chain::torso},
        {"l_foot",       7,  0.000, -0.060,  0.130, Chain::left_leg},
        {"r_foot",       8,  0.000, -0.060,  0.130, Chain::right_leg},
        {"neck",         9,  0.000,  0.100,  0.000, Chain::head},
        {"l_collar",     9,  0.070,  0.060,  0.000, Chain::left_arm},
        {"r_collar",     9, -0.070,  0.060,  0.000, Chain::right_arm},
        {"head",        12,  0.000,  0.120,  0.000, Chain::head},
        {"l_shoulder",  13,  0.110,  0.000,  0.000, Chain::left_arm},
        {"r_shoulder",  14, -0.110,  0.000,  0.000, Chain::right_arm},
        {"l_elbow",     16,  0.260,  0.000,  0.000, Chain::left_arm},
        {"r_elbow",     17, -0.260,  0.000,  0.000, Chain::right_arm},
        {"l_wrist",     18,  0.250,  0.000,  0.000, Chain::left_arm},
        {"r_wrist",     19, -0.250,  0.000,  0.000, Chain::right_arm},
        {"l_hand",      20,  0.080,  0.000,  0.000, Chain::left_arm},
        {"r_hand",      21, -0.080,  0.000,  0.000, Chain::right_arm},
    };
    SkeletonConfig sk;
    sk.joints.reserve(24);
    for (const Row& r : rows) sk.joints.push_back({r.name, r.parent, {r.x, r.y, r.z}, r.chain});
    sk.sip_joints = {1, 2, 16, 17};
    sk.validate();
    return sk;
}

inline SkeletonConfig skeleton_from_json(const nlohmann::json& doc) {
    SkeletonConfig sk;
    if (!doc.contains("joints") || !doc["joints"].is_array())
        throw std::runtime_error("skeleton: parse error (missing \"joints\" array)");
    for (const auto& item : doc["joints"]) {
        Joint j;
        if (!item.contains("name") || !item.contains("parent") || !item.contains("offset"))
            throw std::runtime_error("skeleton: parse error (joint needs name/parent/offset)");
        if (!item.contains("chain"))
            throw std::runtime_error("skeleton: chain-coverage error (joint \"" +
                                     item.value("name", std::string("?")) + "\" missing chain)");
        j.name = item["name"].get<std::string>();
        j.parent = item["parent"].get<int>();
        const auto& off = item["offset"];
        if (!off.is_array() || off.size() != 3)
            throw std::runtime_error("skeleton: parse error (offset must be [x, y, z])");
        j.offset = {off[0].get<double>(), off[1].get<double>(), off[2].get<double>()};
        j.chain = chain_from_name(item["chain"].get<std::string>());
        sk.joints.push_back(std::move(j));
    }
    if (doc.contains("sip_joints")) sk.sip_joints = doc["sip_joints"].get<std::vector<int>>();
    sk.validate();
    return sk;
}

inline nlohmann::json skeleton_to_json(const SkeletonConfig& sk) {
    nlohmann::json doc;
    doc["joints"] = nlohmann::json::array();
    for (const Joint& j : sk.joints) {
        doc["joints"].push_back({{"name", j.name},
                                 {"parent", j.parent},
                                 {"offset", {j.offset.x, j.offset.y, j.offset.z}},
                                 {"chain", std::string(chain_name(j.chain))}});
    }
    doc["sip_joints"] = sk.sip_joints;
    return doc;
}

inline SkeletonConfig load_skeleton(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("skeleton: cannot open \"" + path + "\"");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("skeleton: parse error in \"" + path + "\": " + e.what());
    }
    return skeleton_from_json(doc);
}

inline void save_skeleton(const std::string& path, const SkeletonConfig& sk) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("skeleton: cannot write \"" + path + "\"");
    out << skeleton_to_json(sk).dump(2) << "\n";
}

struct FkResult {
    std::size_t frames = 0;
    std::size_t joints = 0;
    std::vector<Mat3> global_rot;  // frames * joints
    std::vector<Vec3> position;    // frames * joints, meters

    std::size_t index(std::size_t t, std::size_t j) const noexcept { return t * joints + j; }
    const Mat3& rot(std::size_t t, std::size_t j) const { return global_rot[index(t, j)]; }
    const Vec3& pos(std::size_t t, std::size_t j) const { return position[index(t, j)]; }
};

// global_rot[j] = global_rot[parent] * local_rot[j], position[j] =
// position[parent] + global_rot[parent] * offset[j]. The root takes its own
// local rotation and sits at its rest offset (no translation channel).
inline FkResult forward_kinematics(const MotionSequence& seq, const SkeletonConfig& sk) {
    if (seq.joints != sk.joint_count())
        throw std::invalid_argument("forward_kinematics: joint count mismatch (sequence " +
                                    std::to_string(seq.joints) + ", skeleton " +
                                    std::to_string(sk.joint_count()) + ")");
    FkResult fk;
    fk.frames = seq.frames;
    fk.joints = seq.joints;
    fk.global_rot.resize(seq.frames * seq.joints);
    fk.position.resize(seq.frames * seq.joints);
    for (std::size_t t = 0; t < seq.frames; ++t) {
        for (std::size_t j = 0; j < seq.joints; ++j) {
            const Mat3 local = r6d_to_rotmat(seq.joint_r6d(t, j));
            const int p = sk.joints[j].parent;
            const std::size_t idx = fk.index(t, j);
            if (p < 0) {
                fk.global_rot[idx] = local;
                fk.position[idx] = sk.joints[j].offset;
            } else {
                const std::size_t pidx = fk.index(t, static_cast<std::size_t>(p));
                fk.global_rot[idx] = fk.global_rot[pidx] * local;
                fk.position[idx] = fk.position[pidx] + fk.global_rot[pidx] * sk.joints[j].offset;
            }
        }
    }
    return fk;
}

}  // namespace skperlin
