#pragma once

// Empirical verification of the three motion-label properties: temporal
// rate statistics, low-frequency dominance via the periodogram, spectral
// slope, chain correlation structure and histogram entropy.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "skperlin/io.hpp"
#include "skperlin/motion.hpp"
#include "skperlin/noise.hpp"
#include "skperlin/skeleton.hpp"

namespace skperlin {

struct UndefinedRatioError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Iterative radix-2 Cooley-Tukey; length must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::logic_error("fft_pow2: length not a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? 2.0 : -2.0) * 3.14159265358979323846 / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
    if (inverse)
        for (auto& x : a) x /= static_cast<double>(n);
}

// Forward DFT of arbitrary length via Bluestein's chirp transform.
inline std::vector<std::complex<double>> dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    if (n == 0) return {};
    if ((n & (n - 1)) == 0) {
        std::vector<std::complex<double>> a(x.begin(), x.end());
        fft_pow2(a, false);
        return a;
    }
    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;
    // chirp exponent uses n^2 mod 2n to keep the angle argument small
    auto chirp = [n](std::size_t k) {
        const std::size_t q = (k * k) % (2 * n);
        const double ang = 3.14159265358979323846 * static_cast<double>(q) / static_cast<double>(n);
        return std::complex<double>(std::cos(ang), -std::sin(ang));
    };
    std::vector<std::complex<double>> a(m, {0.0, 0.0}), b(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) {
        a[k] = x[k] * chirp(k);
        const std::complex<double> c = std::conj(chirp(k));
        b[k] = c;
        if (k > 0) b[m - k] = c;
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp(k);
    return out;
}

// Pearson correlation; nullopt when either trace is constant.
inline std::optional<double> pearson(const std::vector<double>& a, const std::vector<double>& b) {
    const std::size_t n = a.size();
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / static_cast<double>(n);
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / static_cast<double>(n);
    double saa = 0.0, sbb = 0.0, sab = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double da = a[i] - ma, db = b[i] - mb;
        saa += da * da;
        sbb += db * db;
        sab += da * db;
    }
    if (saa <= 0.0 || sbb <= 0.0) return std::nullopt;
    return sab / std::sqrt(saa * sbb);
}

}  // namespace detail

struct PsdResult {
    std::vector<double> freqs;                // Hz, bin k at k * fps / T
    std::vector<std::vector<double>> power;   // power[channel][bin], folded one-sided
    double fps = 0.0;
};

// One-sided periodogram per channel: raw squared DFT magnitudes with the
// symmetric bins folded (rectangular window). Sum over the folded bins equals
// T * sum |x|^2.
inline PsdResult psd(const std::vector<std::vector<double>>& channels, double fps) {
    if (channels.empty()) throw std::invalid_argument("psd: no channels");
    const std::size_t frames = channels.front().size();
    if (frames < 8) throw std::invalid_argument("psd: need at least 8 frames");
    for (const auto& ch : channels) {
        if (ch.size() != frames) throw std::invalid_argument("psd: ragged channels");
        for (double v : ch)
            if (!std::isfinite(v)) throw std::invalid_argument("psd: non-finite sample");
    }
    PsdResult out;
    out.fps = fps;
    const std::size_t half = frames / 2;
    out.freqs.resize(half + 1);
    for (std::size_t k = 0; k <= half; ++k)
        out.freqs[k] = static_cast<double>(k) * fps / static_cast<double>(frames);
    out.power.reserve(channels.size());
    for (const auto& ch : channels) {
        const auto spec = detail::dft(ch);
        std::vector<double> p(half + 1, 0.0);
        p[0] = std::norm(spec[0]);
        for (std::size_t k = 1; k < half; ++k) p[k] = std::norm(spec[k]) + std::norm(spec[frames - k]);
        if (frames % 2 == 0)
            p[half] = std::norm(spec[half]);
        else
            p[half] = std::norm(spec[half]) + std::norm(spec[frames - half]);
        out.power.push_back(std::move(p));
    }
    return out;
}

inline std::vector<std::vector<double>> to_channels(const std::vector<double>& values,
                                                    std::size_t frames, std::size_t width) {
    std::vector<std::vector<double>> out(width, std::vector<double>(frames));
    for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t w = 0; w < width; ++w) out[w][t] = values[t * width + w];
    return out;
}

inline PsdResult psd(const MotionSequence& seq) {
    return psd(to_channels(seq.data, seq.frames, seq.joints * kRotationChannels), seq.fps);
}

inline PsdResult psd(const NoiseField& field) {
    return psd(to_channels(field.values, field.frames, field.joints * field.channels), field.fps);
}

// Fraction of total power at frequencies (0, f_c], summed over channels. The
// DC bin is excluded from both sums; all-zero remaining power is an error.
inline double low_freq_ratio(const PsdResult& spec, double f_c) {
    if (!(f_c > 0.0) || f_c > spec.freqs.back() + 1e-12)
        throw std::invalid_argument("low_freq_ratio: f_c must be in (0, Nyquist]");
    double low = 0.0, total = 0.0;
    for (const auto& ch : spec.power)
        for (std::size_t k = 1; k < ch.size(); ++k) {
            total += ch[k];
            if (spec.freqs[k] <= f_c) low += ch[k];
        }
    if (total <= 0.0) throw UndefinedRatioError("low_freq_ratio: all non-DC power is zero");
    return low / total;
}

// Least-squares slope of log(power) against log(f) over bins in [f_lo, f_hi]
// on the channel-averaged spectrum, returned as beta = -slope.
inline double spectral_slope(const PsdResult& spec, double f_lo, double f_hi) {
    if (!(f_lo > 0.0 && f_lo < f_hi)) throw std::invalid_argument("spectral_slope: need 0 < f_lo < f_hi");
    std::vector<double> lf, lp;
    for (std::size_t k = 1; k < spec.freqs.size(); ++k) {
        const double f = spec.freqs[k];
        if (f < f_lo || f > f_hi) continue;
        double mean = 0.0;
        for (const auto& ch : spec.power) mean += ch[k];
        mean /= static_cast<double>(spec.power.size());
        if (mean <= 0.0) continue;
        lf.push_back(std::log(f));
        lp.push_back(std::log(mean));
    }
    if (lf.size() < 5)
        throw std::invalid_argument("spectral_slope: fewer than 5 usable bins in [f_lo, f_hi]");
    const double n = static_cast<double>(lf.size());
    const double mx = std::accumulate(lf.begin(), lf.end(), 0.0) / n;
    const double my = std::accumulate(lp.begin(), lp.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lf.size(); ++i) {
        sxx += (lf[i] - mx) * (lf[i] - mx);
        sxy += (lf[i] - mx) * (lp[i] - my);
    }
    return -(sxy / sxx);
}

// Max over frames and joints of the per-second channel-norm rate
// ||x[t+1] - x[t]||_2 * fps.
inline double max_rate(const std::vector<double>& values, std::size_t frames, std::size_t joints,
                       std::size_t channels, double fps) {
    if (frames < 2) throw std::invalid_argument("max_rate: need at least 2 frames");
    double best = 0.0;
    const std::size_t stride = joints * channels;
    for (std::size_t t = 0; t + 1 < frames; ++t)
        for (std::size_t j = 0; j < joints; ++j) {
            double ss = 0.0;
            const std::size_t base = t * stride + j * channels;
            for (std::size_t c = 0; c < channels; ++c) {
                const double d = values[base + stride + c] - values[base + c];
                ss += d * d;
            }
            best = std::max(best, ss);
        }
    return std::sqrt(best) * fps;
}

inline double max_rate(const MotionSequence& seq) {
    return max_rate(seq.data, seq.frames, seq.joints, kRotationChannels, seq.fps);
}
inline double max_rate(const NoiseField& f) {
    return max_rate(f.values, f.frames, f.joints, f.channels, f.fps);
}

struct ChainCorrelation {
    double intra = 0.0;          // mean Pearson over same-chain joint pairs
    double inter = 0.0;          // mean Pearson over cross-chain joint pairs
    std::size_t skipped_pairs = 0;  // pairs with a constant trace, excluded
};

// Pearson correlation of channel-concatenated per-joint traces, averaged
// within and across chains.
inline ChainCorrelation chain_correlation(const std::vector<double>& values, std::size_t frames,
                                          std::size_t joints, std::size_t channels,
                                          const SkeletonConfig& sk) {
    if (joints != sk.joint_count())
        throw std::invalid_argument("chain_correlation: joint count does not match skeleton");
    std::vector<std::vector<double>> traces(joints, std::vector<double>(frames * channels));
    for (std::size_t t = 0; t < frames; ++t)
        for (std::size_t j = 0; j < joints; ++j)
            for (std::size_t c = 0; c < channels; ++c)
                traces[j][t * channels + c] = values[(t * joints + j) * channels + c];

    double intra_sum = 0.0, inter_sum = 0.0;
    std::size_t intra_n = 0, inter_n = 0, skipped = 0;
    for (std::size_t a = 0; a < joints; ++a)
        for (std::size_t b = a + 1; b < joints; ++b) {
            const auto r = detail::pearson(traces[a], traces[b]);
            if (!r) {
                ++skipped;
                continue;
            }
            if (sk.joints[a].chain == sk.joints[b].chain) {
                intra_sum += *r;
                ++intra_n;
            } else {
                inter_sum += *r;
                ++inter_n;
            }
        }
    if (intra_n == 0 || inter_n == 0)
        throw std::runtime_error("chain_correlation: all pairs in a class were constant");
    return {intra_sum / static_cast<double>(intra_n), inter_sum / static_cast<double>(inter_n), skipped};
}

inline ChainCorrelation chain_correlation(const NoiseField& f, const SkeletonConfig& sk) {
    return chain_correlation(f.values, f.frames, f.joints, f.channels, sk);
}
inline ChainCorrelation chain_correlation(const MotionSequence& s, const SkeletonConfig& sk) {
    return chain_correlation(s.data, s.frames, s.joints, kRotationChannels, sk);
}

struct EntropyResult {
    double nats = 0.0;
    bool degenerate = false;  // max == min; nats is -inf
};

// Plug-in differential entropy: Shannon entropy of the equal-width histogram
// over [min, max] plus log of the bin width.
inline EntropyResult entropy_estimate(const std::vector<double>& samples, int bins = 64) {
    if (samples.size() < 1000) throw std::invalid_argument("entropy_estimate: need at least 1000 samples");
    if (bins < 8) throw std::invalid_argument("entropy_estimate: need at least 8 bins");
    const auto [lo_it, hi_it] = std::minmax_element(samples.begin(), samples.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) return {-std::numeric_limits<double>::infinity(), true};
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
    for (double v : samples) {
        auto b = static_cast<std::ptrdiff_t>((v - lo) / width);
        if (b < 0) b = 0;
        if (b >= bins) b = bins - 1;
        ++counts[static_cast<std::size_t>(b)];
    }
    double h = 0.0;
    const double n = static_cast<double>(samples.size());
    for (std::size_t c : counts) {
        if (c == 0) continue;
        const double q = static_cast<double>(c) / n;
        h -= q * std::log(q);
    }
    return {h + std::log(width), false};
}

// Mean per-channel entropy: one histogram per (joint, channel) trace over
// time, degenerate channels skipped. This is the quantity the entropy
// comparisons between smoothing strategies are made on.
inline double mean_channel_entropy(const std::vector<double>& values, std::size_t frames,
                                   std::size_t joints, std::size_t channels, int bins = 64) {
    double sum = 0.0;
    std::size_t n = 0;
    std::vector<double> trace(frames);
    for (std::size_t j = 0; j < joints; ++j)
        for (std::size_t c = 0; c < channels; ++c) {
            for (std::size_t t = 0; t < frames; ++t) trace[t] = values[(t * joints + j) * channels + c];
            const EntropyResult e = entropy_estimate(trace, bins);
            if (e.degenerate) continue;
            sum += e.nats;
            ++n;
        }
    if (n == 0) throw std::runtime_error("mean_channel_entropy: every channel is constant");
    return sum / static_cast<double>(n);
}

inline double mean_channel_entropy(const MotionSequence& s, int bins = 64) {
    return mean_channel_entropy(s.data, s.frames, s.joints, kRotationChannels, bins);
}
inline double mean_channel_entropy(const NoiseField& f, int bins = 64) {
    return mean_channel_entropy(f.values, f.frames, f.joints, f.channels, bins);
}

// Rate threshold calibrated from the bundled synthetic corpus: 1.5x its
// 99.9th-percentile per-joint rate. Computed once and cached.
inline double default_rate_bound() {
    static std::once_flag flag;
    static double bound = 0.0;
    std::call_once(flag, [] {
        std::vector<double> rates;
        for (const MotionSequence& seq : synth_corpus()) {
            const std::size_t stride = seq.joints * kRotationChannels;
            for (std::size_t t = 0; t + 1 < seq.frames; ++t)
                for (std::size_t j = 0; j < seq.joints; ++j) {
                    double ss = 0.0;
                    const std::size_t base = t * stride + j * kRotationChannels;
                    for (std::size_t c = 0; c < kRotationChannels; ++c) {
                        const double d = seq.data[base + stride + c] - seq.data[base + c];
                        ss += d * d;
                    }
                    rates.push_back(std::sqrt(ss) * seq.fps);
                }
        }
        const auto idx = static_cast<std::size_t>(0.999 * static_cast<double>(rates.size() - 1));
        std::nth_element(rates.begin(), rates.begin() + static_cast<std::ptrdiff_t>(idx), rates.end());
        bound = 1.5 * rates[idx];
    });
    return bound;
}

struct PropertyThresholds {
    double max_rate_bound = 0.0;  // M; physiological rate bound, per second
    double f_c = 5.0;             // Hz
    double alpha = 0.7;           // required low-frequency power fraction
    double beta_lo = 1.5, beta_hi = 2.5;
    double slope_f_lo = 0.5, slope_f_hi = 5.0;  // slope fit band, Hz
    int entropy_bins = 64;

    static PropertyThresholds defaults() {
        PropertyThresholds th;
        th.max_rate_bound = default_rate_bound();
        return th;
    }
};

struct PropertyReport {
    PropertyThresholds thresholds;

    double rate_max = 0.0;
    bool rate_ok = false;

    double ratio = 0.0;
    bool ratio_ok = false;
    std::string ratio_error;  // set when the ratio is undefined

    double beta = 0.0;
    bool beta_in_range = false;
    std::string beta_error;

    double intra = 0.0, inter = 0.0;
    std::size_t skipped_pairs = 0;
    bool chain_ok = false;
    std::string chain_error;

    double entropy_mean = 0.0;
    std::string entropy_error;

    // Verdict over the three property checks (rate, ratio, chains).
    bool passed() const {
        return rate_ok && ratio_ok && ratio_error.empty() && chain_ok && chain_error.empty();
    }
};

inline PropertyReport property_report(const std::vector<double>& values, std::size_t frames,
                                      std::size_t joints, std::size_t channels, double fps,
                                      const SkeletonConfig& sk, const PropertyThresholds& th) {
    PropertyReport rep;
    rep.thresholds = th;

    rep.rate_max = max_rate(values, frames, joints, channels, fps);
    rep.rate_ok = rep.rate_max <= th.max_rate_bound;

    const PsdResult spec = psd(to_channels(values, frames, joints * channels), fps);
    try {
        rep.ratio = low_freq_ratio(spec, th.f_c);
        rep.ratio_ok = rep.ratio >= th.alpha;
    } catch (const UndefinedRatioError& e) {
        rep.ratio_error = e.what();
    }
    try {
        rep.beta = spectral_slope(spec, th.slope_f_lo, th.slope_f_hi);
        rep.beta_in_range = rep.beta >= th.beta_lo && rep.beta <= th.beta_hi;
    } catch (const std::exception& e) {
        rep.beta_error = e.what();
    }
    try {
        const ChainCorrelation cc = chain_correlation(values, frames, joints, channels, sk);
        rep.intra = cc.intra;
        rep.inter = cc.inter;
        rep.skipped_pairs = cc.skipped_pairs;
        rep.chain_ok = cc.intra > cc.inter;
    } catch (const std::exception& e) {
        rep.chain_error = e.what();
    }
    try {
        rep.entropy_mean = mean_channel_entropy(values, frames, joints, channels, th.entropy_bins);
    } catch (const std::exception& e) {
        rep.entropy_error = e.what();
    }
    return rep;
}

inline PropertyReport property_report(const NoiseField& f, const SkeletonConfig& sk,
                                      const PropertyThresholds& th) {
    return property_report(f.values, f.frames, f.joints, f.channels, f.fps, sk, th);
}
inline PropertyReport property_report(const MotionSequence& s, const SkeletonConfig& sk,
                                      const PropertyThresholds& th) {
    return property_report(s.data, s.frames, s.joints, kRotationChannels, s.fps, sk, th);
}

inline nlohmann::json report_to_json(const PropertyReport& r) {
    nlohmann::json j;
    j["thresholds"] = {{"max_rate_bound", r.thresholds.max_rate_bound},
                       {"f_c", r.thresholds.f_c},
                       {"alpha", r.thresholds.alpha},
                       {"beta_lo", r.thresholds.beta_lo},
                       {"beta_hi", r.thresholds.beta_hi},
                       {"slope_f_lo", r.thresholds.slope_f_lo},
                       {"slope_f_hi", r.thresholds.slope_f_hi},
                       {"entropy_bins", r.thresholds.entropy_bins}};
    j["temporal_smoothness"] = {{"max_rate", r.rate_max}, {"pass", r.rate_ok}};
    j["low_freq_dominance"] = {{"ratio", r.ratio}, {"pass", r.ratio_ok}};
    if (!r.ratio_error.empty()) j["low_freq_dominance"]["error"] = r.ratio_error;
    j["spectral_slope"] = {{"beta", r.beta}, {"in_range", r.beta_in_range}};
    if (!r.beta_error.empty()) j["spectral_slope"]["error"] = r.beta_error;
    j["joint_correlation"] = {{"intra", r.intra},
                              {"inter", r.inter},
                              {"skipped_pairs", r.skipped_pairs},
                              {"pass", r.chain_ok}};
    if (!r.chain_error.empty()) j["joint_correlation"]["error"] = r.chain_error;
    j["entropy"] = {{"mean_nats", r.entropy_mean}};
    if (!r.entropy_error.empty()) j["entropy"]["error"] = r.entropy_error;
    j["passed"] = r.passed();
    return j;
}

inline void write_report_csv(const std::string& path, const PropertyReport& r) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "key,value\n";
    auto row = [&out](const std::string& k, const std::string& v) { out << k << "," << v << "\n"; };
    row("max_rate", detail::format_double(r.rate_max));
    row("max_rate_bound", detail::format_double(r.thresholds.max_rate_bound));
    row("temporal_smoothness_pass", r.rate_ok ? "1" : "0");
    row("low_freq_ratio", r.ratio_error.empty() ? detail::format_double(r.ratio) : "undefined");
    row("f_c", detail::format_double(r.thresholds.f_c));
    row("alpha", detail::format_double(r.thresholds.alpha));
    row("low_freq_dominance_pass", r.ratio_ok ? "1" : "0");
    row("beta", r.beta_error.empty() ? detail::format_double(r.beta) : "undefined");
    row("beta_in_range", r.beta_in_range ? "1" : "0");
    row("intra_chain_corr", r.chain_error.empty() ? detail::format_double(r.intra) : "undefined");
    row("inter_chain_corr", r.chain_error.empty() ? detail::format_double(r.inter) : "undefined");
    row("joint_correlation_pass", r.chain_ok ? "1" : "0");
    row("entropy_mean_nats", r.entropy_error.empty() ? detail::format_double(r.entropy_mean) : "undefined");
    row("passed", r.passed() ? "1" : "0");
}

inline void write_psd_csv(const std::string& path, const PsdResult& spec) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write \"" + path + "\"");
    out << "freq_hz";
    for (std::size_t c = 0; c < spec.power.size(); ++c) out << ",ch" << c;
    out << "\n";
    for (std::size_t k = 0; k < spec.freqs.size(); ++k) {
        out << detail::format_double(spec.freqs[k]);
        for (const auto& ch : spec.power) out << "," << detail::format_double(ch[k]);
        out << "\n";
    }
}

}  // namespace skperlin
