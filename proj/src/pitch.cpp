#include "sdtk/pitch.hpp"

#include "sdtk/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdtk {

std::size_t FrameTrack::voiced_count() const {
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(), [](const auto& v) { return v.has_value(); }));
}

namespace {

void require_rate(int sample_rate) {
    if (sample_rate < 8000) throw ValidationError("sample rate must be at least 8000 Hz");
}

std::size_t frame_count(std::size_t num_samples, std::size_t hop) { return hop == 0 ? 0 : num_samples / hop; }

/// Start of the analysis window for frame t, clamped inside the signal.
std::size_t window_start(std::size_t t, std::size_t hop, std::size_t window, std::size_t num_samples) {
    const double centre = (static_cast<double>(t) + 0.5) * static_cast<double>(hop);
    const double start = std::round(centre - static_cast<double>(window) / 2.0);
    return static_cast<std::size_t>(std::clamp(start, 0.0, static_cast<double>(num_samples - window)));
}

}  // namespace

FrameTrack estimate_pitch_track(std::span<const double> samples, int sample_rate, const PitchOptions& options) {
    require_rate(sample_rate);
    FrameTrack track;
    track.hop = options.hop;
    const auto rate = static_cast<double>(sample_rate);
    const auto window = static_cast<std::size_t>(std::lround(options.window * rate));
    const auto hop = static_cast<std::size_t>(std::lround(options.hop * rate));
    if (samples.size() < window || window == 0) return track;

    const auto lag_min = static_cast<std::size_t>(std::floor(rate / options.max_f0));
    const auto lag_max = static_cast<std::size_t>(std::ceil(rate / options.min_f0));
    if (lag_min < 2 || lag_max + 2 >= window) throw ValidationError("pitch search range does not fit the window");

    const std::size_t frames = frame_count(samples.size(), hop);
    track.values.assign(frames, std::nullopt);
    std::vector<double> x(window), prefix(window + 1), r(lag_max + 2, 0.0);
    for (std::size_t t = 0; t < frames; ++t) {
        const std::size_t start = window_start(t, hop, window, samples.size());
        double mean = 0.0;
        for (std::size_t n = 0; n < window; ++n) mean += samples[start + n];
        mean /= static_cast<double>(window);
        prefix[0] = 0.0;
        for (std::size_t n = 0; n < window; ++n) {
            x[n] = samples[start + n] - mean;
            prefix[n + 1] = prefix[n] + x[n] * x[n];
        }
        if (!(prefix[window] > 0.0)) continue;

        double best = -1.0;
        for (std::size_t lag = lag_min - 1; lag <= lag_max + 1; ++lag) {
            const std::size_t len = window - lag;
            double cross = 0.0;
            for (std::size_t n = 0; n < len; ++n) cross += x[n] * x[n + lag];
            const double e0 = prefix[len];
            const double e1 = prefix[window] - prefix[lag];
            r[lag] = (e0 > 0.0 && e1 > 0.0) ? cross / std::sqrt(e0 * e1) : 0.0;
            if (lag >= lag_min && lag <= lag_max) best = std::max(best, r[lag]);
        }
        if (best < options.voicing_threshold) continue;

        // Smallest-lag interior peak close to the global maximum; avoids sub-harmonic picks.
        std::size_t pick = 0;
        for (std::size_t lag = lag_min; lag <= lag_max; ++lag) {
            if (r[lag] >= 0.9 * best && r[lag] >= r[lag - 1] && r[lag] >= r[lag + 1]) {
                pick = lag;
                break;
            }
        }
        if (pick == 0 || r[pick] < options.voicing_threshold) continue;
        const double denom = r[pick - 1] - 2.0 * r[pick] + r[pick + 1];
        double shift = denom < 0.0 ? 0.5 * (r[pick - 1] - r[pick + 1]) / denom : 0.0;
        shift = std::clamp(shift, -0.5, 0.5);
        const double f0 = rate / (static_cast<double>(pick) + shift);
        if (f0 >= options.min_f0 * 0.95 && f0 <= options.max_f0 * 1.05) track.values[t] = f0;
    }
    return track;
}

std::vector<double> lpc(std::span<const double> frame, std::size_t order) {
    std::vector<double> r(order + 1, 0.0);
    for (std::size_t k = 0; k <= order && k < frame.size(); ++k)
        for (std::size_t n = k; n < frame.size(); ++n) r[k] += frame[n] * frame[n - k];
    std::vector<double> a(order + 1, 0.0);
    a[0] = 1.0;
    if (!(r[0] > 0.0)) return a;
    double err = r[0];
    std::vector<double> prev(order + 1);
    for (std::size_t i = 1; i <= order; ++i) {
        double acc = r[i];
        for (std::size_t j = 1; j < i; ++j) acc += a[j] * r[i - j];
        const double k = -acc / err;
        prev = a;
        for (std::size_t j = 1; j < i; ++j) a[j] = prev[j] + k * prev[i - j];
        a[i] = k;
        err *= (1.0 - k * k);
        if (!(err > 0.0)) break;
    }
    return a;
}

std::vector<Formant> lpc_formants(std::span<const double> coefficients, int sample_rate, double max_bandwidth) {
    std::vector<Formant> out;
    if (coefficients.size() < 3) return out;
    const auto p = static_cast<Eigen::Index>(coefficients.size() - 1);
    // Companion matrix of z^p + a1 z^{p-1} + ... + ap.
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(p, p);
    for (Eigen::Index j = 0; j < p; ++j) companion(0, j) = -coefficients[static_cast<std::size_t>(j + 1)];
    for (Eigen::Index i = 1; i < p; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    if (solver.info() != Eigen::Success) return out;
    const auto rate = static_cast<double>(sample_rate);
    for (const auto& root : solver.eigenvalues()) {
        if (root.imag() <= 0.0) continue;
        const double magnitude = std::abs(root);
        if (!(magnitude > 0.0)) continue;
        const double freq = std::arg(root) * rate / (2.0 * std::numbers::pi);
        const double bw = -std::log(magnitude) * rate / std::numbers::pi;
        if (bw < max_bandwidth && freq > 0.0 && freq < rate / 2.0) out.push_back({freq, bw});
    }
    std::sort(out.begin(), out.end(), [](const Formant& a, const Formant& b) { return a.frequency < b.frequency; });
    return out;
}

FrameTrack estimate_f3_track(std::span<const double> samples, int sample_rate, const FrameTrack* voicing) {
    require_rate(sample_rate);
    FrameTrack own;
    if (!voicing) {
        own = estimate_pitch_track(samples, sample_rate);
        voicing = &own;
    }
    FrameTrack track;
    track.hop = voicing->hop;
    if (voicing->values.empty()) return track;

    const auto rate = static_cast<double>(sample_rate);
    const auto window = static_cast<std::size_t>(std::lround(0.025 * rate));
    const auto hop = static_cast<std::size_t>(std::lround(voicing->hop * rate));
    const auto order = static_cast<std::size_t>(std::lround(2.0 + rate / 1000.0));
    if (samples.size() < window) return track;

    track.values.assign(voicing->values.size(), std::nullopt);
    std::vector<double> hamming(window), frame(window);
    for (std::size_t n = 0; n < window; ++n)
        hamming[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(n) / static_cast<double>(window - 1));
    for (std::size_t t = 0; t < voicing->values.size(); ++t) {
        if (!voicing->values[t]) continue;
        const std::size_t start = window_start(t, hop, window, samples.size());
        for (std::size_t n = 0; n < window; ++n) {
            const double prev = start + n > 0 ? samples[start + n - 1] : 0.0;
            frame[n] = (samples[start + n] - 0.97 * prev) * hamming[n];
        }
        auto formants = lpc_formants(lpc(frame, order), sample_rate);
        if (formants.size() >= 3) track.values[t] = formants[2].frequency;
    }
    return track;
}

}  // namespace sdtk
