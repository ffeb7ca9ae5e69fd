#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "skperlin/analysis.hpp"
#include "skperlin/io.hpp"

using namespace skperlin;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("io_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("motion round trip is bit-identical") {
    const MotionSequence seq = synth_motion(100, 60.0, 5, 2.0, 0.5);
    TempFile f("roundtrip.mot");
    write_motion(f.path, seq, "fixture");
    MotionFileHeader header;
    const MotionSequence back = read_motion(f.path, &header);
    CHECK(back.frames == seq.frames);
    CHECK(back.joints == seq.joints);
    CHECK(back.fps == seq.fps);
    CHECK(back.data == seq.data);  // exact: synth output is float32-quantized
    CHECK(header.name == "fixture");
    CHECK(header.representation == "r6d");

    TempFile g("roundtrip2.mot");
    write_motion(g.path, back, "fixture");
    CHECK(slurp(f.path) == slurp(g.path));
}

TEST_CASE("truncated payload is detected") {
    const MotionSequence seq = synth_motion(10, 60.0, 1, 2.0, 0.2);
    TempFile f("trunc.mot");
    write_motion(f.path, seq);
    const std::string bytes = slurp(f.path);
    std::ofstream out(f.path, std::ios::binary | std::ios::trunc);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size() - 7));
    out.close();
    CHECK_THROWS_WITH(read_motion(f.path), Catch::Matchers::ContainsSubstring("truncated"));
}

TEST_CASE("header/payload inconsistency is detected") {
    // header promises 10 frames, payload carries 9
    TempFile f("short.mot");
    {
        std::ofstream out(f.path, std::ios::binary);
        out << "MOTN 1 r6d T=10 J=2 C=6 fps=60\n";
        for (int i = 0; i < 9 * 2 * 6; ++i) detail::write_f32_le(out, 0.25f);
    }
    CHECK_THROWS_WITH(read_motion(f.path), Catch::Matchers::ContainsSubstring("truncated"));

    // trailing garbage after a complete payload
    TempFile g("long.mot");
    {
        std::ofstream out(g.path, std::ios::binary);
        out << "MOTN 1 r6d T=2 J=1 C=6 fps=60\n";
        for (int i = 0; i < 2 * 1 * 6; ++i) detail::write_f32_le(out, 0.5f);
        out << "extra";
    }
    CHECK_THROWS_WITH(read_motion(g.path), Catch::Matchers::ContainsSubstring("inconsistency"));
}

TEST_CASE("bad magic and version are rejected") {
    TempFile f("magic.mot");
    {
        std::ofstream out(f.path, std::ios::binary);
        out << "BLOB 1 T=1 J=1 C=6 fps=60\n";
    }
    CHECK_THROWS(read_motion(f.path));
    TempFile g("ver.mot");
    {
        std::ofstream out(g.path, std::ios::binary);
        out << "MOTN 2 r6d T=1 J=1 C=6 fps=60\n";
        for (int i = 0; i < 6; ++i) detail::write_f32_le(out, 0.0f);
    }
    CHECK_THROWS_WITH(read_motion(g.path), Catch::Matchers::ContainsSubstring("version"));
    CHECK_THROWS(read_motion("does_not_exist.mot"));
}

TEST_CASE("noise field round trip") {
    const SkeletonConfig sk = default_skeleton();
    PerlinParams pp;
    pp.seed = 77;
    const NoiseField field = sk_perlin(pp, sk, 32, 120.0);
    TempFile f("field.skpn");
    write_noise_field(f.path, field);
    const NoiseField back = read_noise_field(f.path);
    CHECK(back.frames == field.frames);
    CHECK(back.joints == field.joints);
    CHECK(back.channels == field.channels);
    CHECK(back.fps == field.fps);
    CHECK(back.params.seed == pp.seed);
    CHECK(back.params.base_scale == pp.base_scale);
    CHECK(back.params.lacunarity == pp.lacunarity);
    CHECK(back.params.octaves == pp.octaves);
    REQUIRE(back.values.size() == field.values.size());
    for (std::size_t i = 0; i < back.values.size(); ++i)
        CHECK(back.values[i] == static_cast<double>(static_cast<float>(field.values[i])));
}

TEST_CASE("csv fixture round trip") {
    const MotionSequence seq = synth_motion(20, 50.0, 9, 2.0, 0.4, 3);
    TempFile f("fix.csv");
    write_motion_csv(f.path, seq);
    const MotionSequence back = read_motion_csv(f.path);
    CHECK(back.fps == 50.0);
    CHECK(back.frames == seq.frames);
    CHECK(back.joints == seq.joints);
    CHECK(back.data == seq.data);
}

TEST_CASE("synth with zero amplitude is the constant T-pose") {
    const MotionSequence seq = synth_motion(50, 60.0, 3, 2.0, 0.0);
    const R6d tp = t_pose_r6d();
    for (std::size_t t = 0; t < seq.frames; ++t)
        for (std::size_t j = 0; j < seq.joints; ++j) CHECK(seq.joint_r6d(t, j) == tp);
}

TEST_CASE("synth is deterministic in the seed") {
    const MotionSequence a = synth_motion(64, 60.0, 21, 2.0, 0.5);
    const MotionSequence b = synth_motion(64, 60.0, 21, 2.0, 0.5);
    const MotionSequence c = synth_motion(64, 60.0, 22, 2.0, 0.5);
    CHECK(a.data == b.data);
    CHECK(a.data != c.data);
}

TEST_CASE("synth output is band-limited") {
    const MotionSequence seq = synth_motion(1200, 60.0, 30, 2.0, 0.5);
    CHECK(low_freq_ratio(psd(seq), 5.0) >= 0.99);
}

TEST_CASE("synth sequences pass the default property checks they can satisfy") {
    const MotionSequence seq = synth_motion(1200, 60.0, 31, 2.0, 0.5);
    const PropertyReport rep = property_report(seq, default_skeleton(), PropertyThresholds::defaults());
    CHECK(rep.rate_ok);
    CHECK(rep.ratio_ok);
}

TEST_CASE("synth validates parameters") {
    CHECK_THROWS_AS(synth_motion(10, 60.0, 1, 40.0, 0.5), std::invalid_argument);  // >= Nyquist
    CHECK_THROWS_AS(synth_motion(10, 60.0, 1, 2.0, -0.1), std::invalid_argument);
    CHECK_THROWS_AS(synth_motion(0, 60.0, 1, 2.0, 0.5), std::invalid_argument);
}
