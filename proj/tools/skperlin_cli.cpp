// Command-line front end: noise generation, label smoothing, property
// analysis, pose metrics, bound tables and synthetic motion, all driven by an
// explicit seed so repeated runs produce byte-identical artifacts.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "skperlin/skperlin.hpp"

namespace {

using namespace skperlin;

struct NoiseFlags {
    double base_scale = 0.07;
    double time_scale = 0.5;
    double space_scale = 0.7;
    double persistence = 0.5;
    int octaves = 5;
    double lacunarity = 1.5;
    double offset_weight = 0.5;

    void attach(CLI::App* cmd) {
        cmd->add_option("--base-scale", base_scale, "Noise amplitude S_b")->capture_default_str();
        cmd->add_option("--time-scale", time_scale, "Lattice cells spanned by the time axis S_t")
            ->capture_default_str();
        cmd->add_option("--space-scale", space_scale, "Lattice cells per chain/joint index S_s")
            ->capture_default_str();
        cmd->add_option("--persistence", persistence, "Per-octave amplitude decay p")
            ->capture_default_str();
        cmd->add_option("--octaves", octaves, "Octave count")->capture_default_str();
        cmd->add_option("--lacunarity", lacunarity, "Per-octave frequency growth l")
            ->capture_default_str();
        cmd->add_option("--offset-weight", offset_weight, "Per-joint offset weight w")
            ->capture_default_str();
    }

    PerlinParams params(std::uint64_t seed) const {
        PerlinParams pp;
        pp.base_scale = base_scale;
        pp.time_scale = time_scale;
        pp.space_scale = space_scale;
        pp.persistence = persistence;
        pp.octaves = octaves;
        pp.lacunarity = lacunarity;
        pp.offset_weight = offset_weight;
        pp.seed = seed;
        pp.validate();
        return pp;
    }
};

SkeletonConfig resolve_skeleton(const std::string& path) {
    if (!path.empty()) return load_skeleton(path);
    return default_skeleton();
}

bool is_noise_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\"");
    char magic[4] = {};
    in.read(magic, 4);
    return std::string(magic, 4) == "SKPN";
}

int run(int argc, char** argv) {
    CLI::App app{"skeleton-based Perlin noise for motion label smoothing"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Read option defaults from a TOML/INI file");

    std::string skeleton_path;
    std::uint64_t seed = 0;

    auto add_skeleton = [&skeleton_path](CLI::App* cmd) {
        cmd->add_option("--skeleton", skeleton_path,
                        "Skeleton config JSON (default: bundled 24-joint config)")
            ->envname("SKPERLIN_SKELETON");
    };
    auto add_seed = [&seed](CLI::App* cmd) {
        cmd->add_option("--seed", seed, "Seed for all randomness")->capture_default_str();
    };

    // gen-noise ------------------------------------------------------------
    auto* gen = app.add_subcommand("gen-noise", "Generate a skeleton-based noise field");
    NoiseFlags gen_noise_flags;
    std::size_t gen_frames = 0;
    double gen_fps = 60.0;
    std::string gen_out, gen_format = "bin";
    gen->add_option("--frames", gen_frames, "Frame count")->required();
    gen->add_option("--fps", gen_fps, "Frame rate, Hz")->capture_default_str();
    add_seed(gen);
    add_skeleton(gen);
    gen_noise_flags.attach(gen);
    gen->add_option("--out", gen_out, "Output file")->required();
    gen->add_option("--format", gen_format, "bin or csv")
        ->check(CLI::IsMember({"bin", "csv"}))
        ->capture_default_str();
    gen->callback([&] {
        const PerlinParams pp = gen_noise_flags.params(seed);
        const SkeletonConfig sk = resolve_skeleton(skeleton_path);
        const NoiseField field = sk_perlin(pp, sk, gen_frames, gen_fps);
        if (gen_format == "csv")
            write_noise_csv(gen_out, field);
        else
            write_noise_field(gen_out, field);
        std::cout << "wrote " << gen_out << " (" << field.frames << "x" << field.joints << "x"
                  << field.channels << ")\n"
                  << "octave amplitude sum S(p,oct) = "
                  << geometric_sum(pp.persistence, pp.octaves) << "\n"
                  << "gradient bound (unit base slope) = " << gradient_bound(pp, 1.0) << "\n"
                  << "amplitude bound B = " << amplitude_bound(pp, 6) << "\n";
    });

    // synth ----------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "Generate a band-limited synthetic motion");
    std::size_t synth_frames = 1200, synth_joints = 24;
    double synth_fps = 60.0, synth_max_freq = 2.0, synth_amp = 0.5;
    std::string synth_out, synth_format = "bin";
    synth->add_option("--frames", synth_frames, "Frame count")->capture_default_str();
    synth->add_option("--fps", synth_fps, "Frame rate, Hz")->capture_default_str();
    synth->add_option("--joints", synth_joints, "Joint count")->capture_default_str();
    synth->add_option("--max-freq", synth_max_freq, "Sinusoid frequency cap, Hz")->capture_default_str();
    synth->add_option("--amp", synth_amp, "Peak joint angle, radians")->capture_default_str();
    add_seed(synth);
    synth->add_option("--out", synth_out, "Output motion file")->required();
    synth->add_option("--format", synth_format, "bin or csv")
        ->check(CLI::IsMember({"bin", "csv"}))
        ->capture_default_str();
    synth->callback([&] {
        const MotionSequence seq =
            synth_motion(synth_frames, synth_fps, seed, synth_max_freq, synth_amp, synth_joints);
        if (synth_format == "csv")
            write_motion_csv(synth_out, seq);
        else
            write_motion(synth_out, seq);
        std::cout << "wrote " << synth_out << " (" << seq.frames << " frames, " << seq.joints
                  << " joints)\n";
    });

    // smooth ---------------------------------------------------------------
    auto* smooth = app.add_subcommand("smooth", "Blend a motion file with a smoothing vector");
    NoiseFlags smooth_noise_flags;
    std::string smooth_in, smooth_out, smooth_strategy = "sk-perlin";
    double smooth_eps = 0.1;
    double smooth_sigma = std::numeric_limits<double>::quiet_NaN();
    double uniform_min = std::numeric_limits<double>::quiet_NaN();
    double uniform_max = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::string> mean_files;
    bool do_reproject = false;
    smooth->add_option("--in", smooth_in, "Input motion file")->required();
    smooth->add_option("--out", smooth_out, "Output motion file")->required();
    smooth->add_option("--strategy", smooth_strategy,
                       "sk-perlin, gaussian, uniform, t-pose, dataset-mean or temporal")
        ->check(CLI::IsMember({"sk-perlin", "gaussian", "uniform", "t-pose", "dataset-mean", "temporal"}))
        ->capture_default_str();
    smooth->add_option("--epsilon", smooth_eps, "Blend weight of the smoothing vector")
        ->capture_default_str();
    smooth->add_option("--sigma", smooth_sigma,
                       "Gaussian sigma (gaussian strategy) or kernel sigma in frames (temporal)");
    smooth->add_option("--uniform-min", uniform_min, "Uniform noise lower bound");
    smooth->add_option("--uniform-max", uniform_max, "Uniform noise upper bound");
    smooth->add_option("--mean-file", mean_files, "Motion files averaged into the dataset-mean pose");
    smooth->add_flag("--reproject", do_reproject, "Snap smoothed labels back onto valid rotations");
    add_seed(smooth);
    add_skeleton(smooth);
    smooth_noise_flags.attach(smooth);
    smooth->callback([&] {
        MotionFileHeader header;
        const MotionSequence labels = read_motion(smooth_in, &header);
        SmoothingStrategy strategy;
        strategy.epsilon = smooth_eps;
        nlohmann::json meta{{"strategy", smooth_strategy}, {"epsilon", smooth_eps}, {"seed", seed}};
        if (smooth_strategy == "sk-perlin") {
            SkPerlinStrategy s;
            s.params = smooth_noise_flags.params(seed);
            meta["params"] = {{"base_scale", s.params.base_scale},
                              {"time_scale", s.params.time_scale},
                              {"space_scale", s.params.space_scale},
                              {"persistence", s.params.persistence},
                              {"octaves", s.params.octaves},
                              {"lacunarity", s.params.lacunarity},
                              {"offset_weight", s.params.offset_weight}};
            strategy.kind = s;
        } else if (smooth_strategy == "gaussian") {
            GaussianStrategy s;
            if (!std::isnan(smooth_sigma)) s.sigma = smooth_sigma;
            meta["sigma"] = s.sigma;
            strategy.kind = s;
        } else if (smooth_strategy == "uniform") {
            UniformStrategy s;
            const double sigma = std::isnan(smooth_sigma) ? 0.07 : smooth_sigma;
            s.lo = std::isnan(uniform_min) ? -sigma * std::sqrt(3.0) : uniform_min;
            s.hi = std::isnan(uniform_max) ? sigma * std::sqrt(3.0) : uniform_max;
            meta["lo"] = s.lo;
            meta["hi"] = s.hi;
            strategy.kind = s;
        } else if (smooth_strategy == "t-pose") {
            strategy.kind = TPoseStrategy{};
        } else if (smooth_strategy == "dataset-mean") {
            if (mean_files.empty())
                throw std::invalid_argument("dataset-mean strategy needs at least one --mean-file");
            DatasetMeanStrategy s;
            s.mean_pose = dataset_mean_pose(mean_files);
            meta["mean_files"] = mean_files;
            strategy.kind = s;
        } else {  // temporal
            TemporalGaussianStrategy s;
            if (!std::isnan(smooth_sigma)) s.sigma_frames = smooth_sigma;
            meta["sigma_frames"] = s.sigma_frames;
            strategy.kind = s;
        }
        const SkeletonConfig sk = resolve_skeleton(skeleton_path);
        MotionSequence out = apply_strategy(labels, strategy, sk, seed);
        if (do_reproject) out = reproject(out);
        meta["reproject"] = do_reproject;
        write_motion(smooth_out, out, header.name);
        std::ofstream metaout(smooth_out + ".meta.json");
        metaout << meta.dump(2) << "\n";
        std::cout << "wrote " << smooth_out << " (strategy " << smooth_strategy << ", epsilon "
                  << smooth_eps << ")\n";
    });

    // analyze ----------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "Property report for a motion or noise file");
    std::string an_in, an_out;
    double an_fc = 5.0, an_alpha = 0.7;
    double an_rate_bound = 0.0;
    double an_beta_lo = 1.5, an_beta_hi = 2.5, an_slope_flo = 0.5, an_slope_fhi = 5.0;
    int an_bins = 64;
    std::size_t an_channel = 0;
    bool an_strict = false;
    analyze->add_option("--in", an_in, "Motion or noise-field file")->required();
    analyze->add_option("--out", an_out, "Output prefix for report/psd/terrain files")->required();
    analyze->add_option("--fc", an_fc, "Low-frequency cutoff, Hz")->capture_default_str();
    analyze->add_option("--alpha", an_alpha, "Required low-frequency power fraction")
        ->capture_default_str();
    analyze->add_option("--rate-bound", an_rate_bound,
                        "Temporal rate bound M (default: calibrated from the synthetic corpus)");
    analyze->add_option("--beta-lo", an_beta_lo, "Spectral slope lower bound")->capture_default_str();
    analyze->add_option("--beta-hi", an_beta_hi, "Spectral slope upper bound")->capture_default_str();
    analyze->add_option("--slope-flo", an_slope_flo, "Slope fit band start, Hz")->capture_default_str();
    analyze->add_option("--slope-fhi", an_slope_fhi, "Slope fit band end, Hz")->capture_default_str();
    analyze->add_option("--bins", an_bins, "Entropy histogram bins")->capture_default_str();
    analyze->add_option("--channel", an_channel, "Channel exported to the terrain grid")
        ->capture_default_str();
    analyze->add_flag("--strict", an_strict, "Exit nonzero unless all property checks pass");
    add_skeleton(analyze);
    analyze->callback([&] {
        const SkeletonConfig sk = resolve_skeleton(skeleton_path);
        PropertyThresholds th;
        th.max_rate_bound = an_rate_bound > 0.0 ? an_rate_bound : default_rate_bound();
        th.f_c = an_fc;
        th.alpha = an_alpha;
        th.beta_lo = an_beta_lo;
        th.beta_hi = an_beta_hi;
        th.slope_f_lo = an_slope_flo;
        th.slope_f_hi = an_slope_fhi;
        th.entropy_bins = an_bins;

        PropertyReport rep;
        PsdResult spec;
        if (is_noise_file(an_in)) {
            const NoiseField f = read_noise_field(an_in);
            rep = property_report(f, sk, th);
            spec = psd(f);
            write_terrain_csv(an_out + ".terrain.csv", f.frames, f.joints, f.channels, f.values,
                              an_channel);
        } else {
            const MotionSequence s = read_motion(an_in);
            rep = property_report(s, sk, th);
            spec = psd(s);
            write_terrain_csv(an_out + ".terrain.csv", s.frames, s.joints, kRotationChannels, s.data,
                              an_channel);
        }
        std::ofstream jout(an_out + ".report.json");
        jout << report_to_json(rep).dump(2) << "\n";
        write_report_csv(an_out + ".report.csv", rep);
        write_psd_csv(an_out + ".psd.csv", spec);

        std::cout << "max_rate = " << rep.rate_max << " (bound " << th.max_rate_bound << ", "
                  << (rep.rate_ok ? "pass" : "fail") << ")\n";
        if (rep.ratio_error.empty())
            std::cout << "low_freq_ratio = " << rep.ratio << " at f_c " << th.f_c << " Hz ("
                      << (rep.ratio_ok ? "pass" : "fail") << ")\n";
        else
            std::cout << "low_freq_ratio undefined: " << rep.ratio_error << "\n";
        if (rep.beta_error.empty())
            std::cout << "spectral slope beta = " << rep.beta
                      << (rep.beta_in_range ? " (in range)" : " (out of range)") << "\n";
        else
            std::cout << "spectral slope unavailable: " << rep.beta_error << "\n";
        if (rep.chain_error.empty())
            std::cout << "chain correlation intra = " << rep.intra << ", inter = " << rep.inter
                      << " (" << (rep.chain_ok ? "pass" : "fail") << ")\n";
        else
            std::cout << "chain correlation unavailable: " << rep.chain_error << "\n";
        if (rep.entropy_error.empty())
            std::cout << "mean channel entropy = " << rep.entropy_mean << " nats\n";
        std::cout << "report written to " << an_out << ".report.json\n";
        if (an_strict && (!rep.passed() || !rep.ratio_error.empty()))
            throw std::runtime_error("strict mode: property checks failed");
    });

    // metrics ----------------------------------------------------------------
    auto* metrics = app.add_subcommand("metrics", "Pose errors between two motion files");
    std::string m_pred, m_gt, m_out, m_format = "csv";
    metrics->add_option("--pred", m_pred, "Predicted motion file")->required();
    metrics->add_option("--gt", m_gt, "Ground-truth motion file")->required();
    metrics->add_option("--out", m_out, "Optional report file");
    metrics->add_option("--format", m_format, "csv or json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    add_skeleton(metrics);
    metrics->callback([&] {
        const MotionSequence pred = read_motion(m_pred);
        const MotionSequence gt = read_motion(m_gt);
        const SkeletonConfig sk = resolve_skeleton(skeleton_path);
        const MetricResult m = evaluate_metrics(pred, gt, sk);
        std::cout << "SIP (deg)        " << m.sip_deg << " +- " << m.sip_std << "\n"
                  << "Angular (deg)    " << m.angular_deg << " +- " << m.angular_std << "\n"
                  << "Positional (cm)  " << m.positional_cm << " +- " << m.positional_std << "\n";
        if (!m_out.empty()) {
            if (m_format == "json") {
                std::ofstream out(m_out);
                out << metrics_to_json(m).dump(2) << "\n";
            } else {
                write_metrics_csv(m_out, m);
            }
            std::cout << "report written to " << m_out << "\n";
        }
    });

    // bounds -----------------------------------------------------------------
    auto* bounds = app.add_subcommand("bounds", "Print the closed-form noise bounds");
    NoiseFlags bounds_flags;
    double b_gmax = 1.0, b_bone = 0.3, b_sfreq = 1.0, b_kg = 2.5;
    bounds_flags.attach(bounds);
    bounds->add_option("--g-max", b_gmax, "Base-noise slope bound per unit coordinate")
        ->capture_default_str();
    bounds->add_option("--bone-length", b_bone, "Inter-joint distance, meters")->capture_default_str();
    bounds->add_option("--spatial-freq", b_sfreq, "Spatial frequency in the inter-joint bound")
        ->capture_default_str();
    bounds->add_option("--k-g", b_kg, "Gradient constant in the inter-joint bound")
        ->capture_default_str();
    bounds->callback([&] {
        const PerlinParams pp = bounds_flags.params(0);
        std::cout << "S(p*l, oct)      = " << geometric_sum(pp.persistence * pp.lacunarity, pp.octaves)
                  << "\n"
                  << "gradient bound   = " << gradient_bound(pp, b_gmax) << "\n"
                  << "amplitude bound  = " << amplitude_bound(pp, 6) << "\n"
                  << "inter-joint C    = " << interjoint_bound(pp, b_bone, b_sfreq, b_kg) << "\n";
    });

    CLI11_PARSE(app, argc, argv);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
