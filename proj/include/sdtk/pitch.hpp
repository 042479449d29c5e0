#pragma once

#include <optional>
#include <span>
#include <vector>

namespace sdtk {

/// Per-frame values on a 10 ms grid; frame t is centred at (t + 0.5) * hop seconds.
struct FrameTrack {
    double hop = 0.01;
    std::vector<std::optional<double>> values;

    std::size_t voiced_count() const;
};

struct PitchOptions {
    double window = 0.040;
    double hop = 0.010;
    double min_f0 = 60.0;
    double max_f0 = 400.0;
    /// Minimum normalized autocorrelation at the chosen lag for a voiced decision.
    double voicing_threshold = 0.45;
};

/// Normalized-autocorrelation pitch tracker. Unvoiced frames carry no value.
/// Returns an empty track for signals shorter than one window. Requires sample_rate >= 8000.
FrameTrack estimate_pitch_track(std::span<const double> samples, int sample_rate, const PitchOptions& options = {});

struct Formant {
    double frequency = 0.0;  // Hz
    double bandwidth = 0.0;  // Hz
};

/// Autocorrelation-method LPC via Levinson-Durbin. Returns a[0..order] with a[0] = 1, so that
/// A(z) = sum_k a[k] z^-k. All-zero input gives a[k] = 0 for k > 0.
std::vector<double> lpc(std::span<const double> frame, std::size_t order);

/// Resonances from the complex roots of A(z) with bandwidth below `max_bandwidth`, ascending.
std::vector<Formant> lpc_formants(std::span<const double> coefficients, int sample_rate, double max_bandwidth = 400.0);

/// Third formant per voiced frame: 25 ms pre-emphasized Hamming frames, LPC order
/// round(2 + sample_rate / 1000). `voicing` defaults to estimate_pitch_track(samples).
FrameTrack estimate_f3_track(std::span<const double> samples, int sample_rate, const FrameTrack* voicing = nullptr);

}  // namespace sdtk
