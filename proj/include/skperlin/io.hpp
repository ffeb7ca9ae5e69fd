#pragma once

// Motion and noise-field files, CSV fixtures, and the synthetic motion
// generator used for tests, demos and threshold calibration.
//
// Binary layout (both file kinds): one ASCII header line terminated by '\n',
// then the payload as little-endian IEEE-754 float32 in (t, j, c) order.
//
//   MOTN 1 r6d T=<frames> J=<joints> C=6 fps=<fps> [name=<token>]
//   SKPN 1 T=<frames> J=<joints> C=<channels> fps=<fps> base_scale=... time_scale=...
//          space_scale=... persistence=... octaves=... lacunarity=...
//          offset_weight=... seed=<u64>
//
// The payload length must match the header exactly; a short payload is a
// truncation error, trailing bytes are an inconsistency error.

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "skperlin/detail/rng.hpp"
#include "skperlin/motion.hpp"
#include "skperlin/noise.hpp"

namespace skperlin {

struct MotionFileHeader {
    std::string magic = "MOTN";
    int version = 1;
    std::size_t frames = 0;
    std::size_t joints = 0;
    std::size_t channels = kRotationChannels;
    double fps = 60.0;
    std::string representation = "r6d";
    std::string name;
};

namespace detail {

inline std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_double(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("file header: bad " + what + " value \"" + s + "\"");
    return v;
}

inline std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("file header: bad " + what + " value \"" + s + "\"");
    return v;
}

inline void write_f32_le(std::ostream& out, float f) {
    const auto bits = std::bit_cast<std::uint32_t>(f);
    const char bytes[4] = {static_cast<char>(bits & 0xFF), static_cast<char>((bits >> 8) & 0xFF),
                           static_cast<char>((bits >> 16) & 0xFF),
                           static_cast<char>((bits >> 24) & 0xFF)};
    out.write(bytes, 4);
}

inline float read_f32_le(const unsigned char* p) {
    const std::uint32_t bits = static_cast<std::uint32_t>(p[0]) |
                               (static_cast<std::uint32_t>(p[1]) << 8) |
                               (static_cast<std::uint32_t>(p[2]) << 16) |
                               (static_cast<std::uint32_t>(p[3]) << 24);
    return std::bit_cast<float>(bits);
}

// First line as (magic, version, bare tags, key=value map).
struct HeaderLine {
    std::string magic;
    int version = 0;
    std::vector<std::string> tags;  // bare tokens such as the representation tag
    std::map<std::string, std::string> fields;
};

inline HeaderLine read_header_line(std::istream& in, const std::string& path) {
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("cannot read header of \"" + path + "\"");
    std::istringstream ls(line);
    HeaderLine h;
    std::string tok;
    if (!(ls >> h.magic)) throw std::runtime_error("empty header in \"" + path + "\"");
    if (!(ls >> h.version)) throw std::runtime_error("missing version in \"" + path + "\"");
    while (ls >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos)
            h.tags.push_back(tok);
        else
            h.fields[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    return h;
}

inline std::string require_field(const HeaderLine& h, const std::string& key, const std::string& path) {
    const auto it = h.fields.find(key);
    if (it == h.fields.end())
        throw std::runtime_error("header of \"" + path + "\" is missing " + key);
    return it->second;
}

inline std::vector<double> read_payload(std::istream& in, std::size_t count, const std::string& path) {
    std::vector<unsigned char> bytes(count * 4);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw std::runtime_error("truncated payload in \"" + path + "\" (expected " +
                                 std::to_string(bytes.size()) + " bytes, got " +
                                 std::to_string(in.gcount()) + ")");
    if (in.peek() != std::char_traits<char>::eof())
        throw std::runtime_error("header/payload inconsistency in \"" + path +
                                 "\" (trailing bytes after payload)");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = static_cast<double>(read_f32_le(&bytes[i * 4]));
    return out;
}

}  // namespace detail

inline void write_motion(const std::string& path, const MotionSequence& seq,
                         const std::string& name = "") {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "MOTN 1 r6d T=" << seq.frames << " J=" << seq.joints << " C=" << kRotationChannels
        << " fps=" << detail::format_double(seq.fps);
    if (!name.empty()) out << " name=" << name;
    out << "\n";
    for (double v : seq.data) detail::write_f32_le(out, static_cast<float>(v));
    if (!out) throw std::runtime_error("write failure on \"" + path + "\"");
}

inline MotionSequence read_motion(const std::string& path, MotionFileHeader* header = nullptr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    const auto h = detail::read_header_line(in, path);
    if (h.magic != "MOTN") throw std::runtime_error("\"" + path + "\" is not a motion file");
    if (h.version != 1)
        throw std::runtime_error("motion file version mismatch in \"" + path + "\" (got " +
                                 std::to_string(h.version) + ", expected 1)");
    if (h.tags.empty() || h.tags.front() != "r6d")
        throw std::runtime_error("motion file \"" + path + "\" is missing the r6d representation tag");
    const std::size_t frames = detail::parse_u64(detail::require_field(h, "T", path), "T");
    const std::size_t joints = detail::parse_u64(detail::require_field(h, "J", path), "J");
    const std::size_t channels = detail::parse_u64(detail::require_field(h, "C", path), "C");
    const double fps = detail::parse_double(detail::require_field(h, "fps", path), "fps");
    if (channels != kRotationChannels)
        throw std::runtime_error("motion file \"" + path + "\" has C=" + std::to_string(channels) +
                                 ", expected 6");
    if (!(fps > 0.0)) throw std::runtime_error("motion file \"" + path + "\" has non-positive fps");
    MotionSequence seq(frames, joints, fps);
    seq.data = detail::read_payload(in, frames * joints * channels, path);
    if (header) {
        header->magic = h.magic;
        header->version = h.version;
        header->frames = frames;
        header->joints = joints;
        header->channels = channels;
        header->fps = fps;
        header->representation = "r6d";
        const auto it = h.fields.find("name");
        header->name = it == h.fields.end() ? "" : it->second;
    }
    return seq;
}

inline void write_noise_field(const std::string& path, const NoiseField& field) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    const PerlinParams& p = field.params;
    out << "SKPN 1 T=" << field.frames << " J=" << field.joints << " C=" << field.channels
        << " fps=" << detail::format_double(field.fps)
        << " base_scale=" << detail::format_double(p.base_scale)
        << " time_scale=" << detail::format_double(p.time_scale)
        << " space_scale=" << detail::format_double(p.space_scale)
        << " persistence=" << detail::format_double(p.persistence) << " octaves=" << p.octaves
        << " lacunarity=" << detail::format_double(p.lacunarity)
        << " offset_weight=" << detail::format_double(p.offset_weight) << " seed=" << p.seed << "\n";
    for (double v : field.values) detail::write_f32_le(out, static_cast<float>(v));
    if (!out) throw std::runtime_error("write failure on \"" + path + "\"");
}

inline NoiseField read_noise_field(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    const auto h = detail::read_header_line(in, path);
    if (h.magic != "SKPN") throw std::runtime_error("\"" + path + "\" is not a noise field file");
    if (h.version != 1)
        throw std::runtime_error("noise file version mismatch in \"" + path + "\" (got " +
                                 std::to_string(h.version) + ", expected 1)");
    NoiseField f;
    f.frames = detail::parse_u64(detail::require_field(h, "T", path), "T");
    f.joints = detail::parse_u64(detail::require_field(h, "J", path), "J");
    f.channels = detail::parse_u64(detail::require_field(h, "C", path), "C");
    f.fps = detail::parse_double(detail::require_field(h, "fps", path), "fps");
    f.params.base_scale = detail::parse_double(detail::require_field(h, "base_scale", path), "base_scale");
    f.params.time_scale = detail::parse_double(detail::require_field(h, "time_scale", path), "time_scale");
    f.params.space_scale = detail::parse_double(detail::require_field(h, "space_scale", path), "space_scale");
    f.params.persistence = detail::parse_double(detail::require_field(h, "persistence", path), "persistence");
    f.params.octaves = static_cast<int>(detail::parse_u64(detail::require_field(h, "octaves", path), "octaves"));
    f.params.lacunarity = detail::parse_double(detail::require_field(h, "lacunarity", path), "lacunarity");
    f.params.offset_weight =
        detail::parse_double(detail::require_field(h, "offset_weight", path), "offset_weight");
    f.params.seed = detail::parse_u64(detail::require_field(h, "seed", path), "seed");
    f.values = detail::read_payload(in, f.frames * f.joints * f.channels, path);
    return f;
}

// Secondary fixture reader: one frame per line, J*6 comma-separated columns.
// Lines starting with '#' are comments; "# fps=<x>" sets the frame rate.
inline MotionSequence read_motion_csv(const std::string& path, double default_fps = 60.0) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    double fps = default_fps;
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto pos = line.find("fps=");
            if (pos != std::string::npos) fps = std::stod(line.substr(pos + 4));
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (row.empty()) continue;
        if (!rows.empty() && row.size() != rows.front().size())
            throw std::runtime_error("csv \"" + path + "\": ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::runtime_error("csv \"" + path + "\": no data rows");
    const std::size_t cols = rows.front().size();
    if (cols % kRotationChannels != 0)
        throw std::runtime_error("csv \"" + path + "\": column count must be a multiple of 6");
    MotionSequence seq(rows.size(), cols / kRotationChannels, fps);
    for (std::size_t t = 0; t < rows.size(); ++t)
        for (std::size_t i = 0; i < cols; ++i) seq.data[t * cols + i] = rows[t][i];
    return seq;
}

inline void write_motion_csv(const std::string& path, const MotionSequence& seq) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "# fps=" << detail::format_double(seq.fps) << "\n";
    const std::size_t cols = seq.joints * kRotationChannels;
    for (std::size_t t = 0; t < seq.frames; ++t) {
        for (std::size_t i = 0; i < cols; ++i) {
            if (i) out << ",";
            out << detail::format_double(seq.data[t * cols + i]);
        }
        out << "\n";
    }
}

// Text tensor form of a noise field: header comment, then one frame per
// line with J*C columns.
inline void write_noise_csv(const std::string& path, const NoiseField& f) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "# T=" << f.frames << " J=" << f.joints << " C=" << f.channels
        << " fps=" << detail::format_double(f.fps) << " seed=" << f.params.seed << "\n";
    const std::size_t cols = f.joints * f.channels;
    for (std::size_t t = 0; t < f.frames; ++t) {
        for (std::size_t i = 0; i < cols; ++i) {
            if (i) out << ",";
            out << detail::format_double(f.values[t * cols + i]);
        }
        out << "\n";
    }
}

// (frame, joint) grid of one channel, for terrain-style plots.
inline void write_terrain_csv(const std::string& path, std::size_t frames, std::size_t joints,
                              std::size_t channels, const std::vector<double>& values,
                              std::size_t channel) {
    if (channel >= channels) throw std::invalid_argument("write_terrain_csv: channel out of range");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "frame";
    for (std::size_t j = 0; j < joints; ++j) out << ",j" << j;
    out << "\n";
    for (std::size_t t = 0; t < frames; ++t) {
        out << t;
        for (std::size_t j = 0; j < joints; ++j)
            out << "," << detail::format_double(values[(t * joints + j) * channels + channel]);
        out << "\n";
    }
}

// Band-limited synthetic motion: per joint, two axis-angle layers whose angle
// signals are sums of one or two random sinusoids with frequencies in
// (0, max_freq], so every rotation channel varies. Per-joint peak amplitude
// spans two decades below amp, mimicking the mix of busy and near-still
// joints in real capture data. Values are quantized to float32 so binary
// round trips are bit-exact.
inline MotionSequence synth_motion(std::size_t frames, double fps, std::uint64_t seed,
                                   double max_freq, double amp, std::size_t joints = 24) {
    if (!(fps > 0.0)) throw std::invalid_argument("synth_motion: fps must be positive");
    if (!(max_freq > 0.0) || max_freq >= fps / 2.0)
        throw std::invalid_argument("synth_motion: need 0 < max_freq < fps/2");
    if (amp < 0.0) throw std::invalid_argument("synth_motion: amp must be >= 0");
    if (frames < 1) throw std::invalid_argument("synth_motion: need at least 1 frame");

    MotionSequence seq(frames, joints, fps);
    constexpr double two_pi = 6.283185307179586476925286766559;
    for (std::size_t j = 0; j < joints; ++j) {
        detail::SplitMix s(detail::mix_coords(static_cast<std::int64_t>(j), 17, 29, seed));
        const double amp_j = amp * std::pow(10.0, -2.0 * s.next_unit());

        struct Layer {
            Vec3 axis;
            std::vector<std::array<double, 3>> sines;  // amplitude, freq, phase
            double scale = 0.0;
        };
        std::array<Layer, 2> layers;
        for (Layer& layer : layers) {
            Vec3 ax{s.next_gaussian(), s.next_gaussian(), s.next_gaussian()};
            if (ax.norm() < 1e-9) ax = {1, 0, 0};
            layer.axis = ax * (1.0 / ax.norm());
            const int nsin = 1 + static_cast<int>(s.next() % 2);
            for (int k = 0; k < nsin; ++k)
                layer.sines.push_back({0.3 + 0.7 * s.next_unit(),
                                       max_freq * (0.05 + 0.95 * s.next_unit()),
                                       two_pi * s.next_unit()});
            double peak = 0.0;
            for (std::size_t t = 0; t < frames; ++t) {
                double th = 0.0;
                const double ts = static_cast<double>(t) / fps;
                for (const auto& sn : layer.sines) th += sn[0] * std::sin(two_pi * sn[1] * ts + sn[2]);
                peak = std::max(peak, std::abs(th));
            }
            layer.scale = peak > 0.0 ? amp_j / peak : 0.0;
        }

        for (std::size_t t = 0; t < frames; ++t) {
            const double ts = static_cast<double>(t) / fps;
            Mat3 rot = Mat3::identity();
            for (const Layer& layer : layers) {
                double th = 0.0;
                for (const auto& sn : layer.sines) th += sn[0] * std::sin(two_pi * sn[1] * ts + sn[2]);
                rot = rot * axis_angle(layer.axis, th * layer.scale);
            }
            R6d v = rotmat_to_r6d(rot);
            for (double& e : v) e = static_cast<double>(static_cast<float>(e));
            seq.set_joint_r6d(t, j, v);
        }
    }
    return seq;
}

// The bundled synthetic corpus: a fixed set of sequences used for entropy
// comparisons and for calibrating the default temporal-rate threshold.
inline std::vector<MotionSequence> synth_corpus(std::size_t count = 4, std::size_t frames = 1200,
                                                double fps = 60.0, double max_freq = 2.0,
                                                double amp = 0.5, std::uint64_t base_seed = 201) {
    std::vector<MotionSequence> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        out.push_back(synth_motion(frames, fps, base_seed + i, max_freq, amp));
    return out;
}

}  // namespace skperlin
