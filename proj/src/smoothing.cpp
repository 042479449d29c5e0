#include "sdtk/smoothing.hpp"

#include "sdtk/error.hpp"

#include <algorithm>
#include <cmath>

namespace sdtk {

void MedianFilterSpec::validate() const {
    if (window < 1 || window % 2 == 0)
        throw ValidationError("median filter window must be an odd positive integer, got " + std::to_string(window));
}

Millis hop_to_millis(double hop_seconds) {
    if (!(hop_seconds > 0.0)) throw ValidationError("hop must be positive");
    const double ms = hop_seconds * 1000.0;
    const Millis rounded = static_cast<Millis>(std::llround(ms));
    if (rounded < 1 || std::abs(ms - static_cast<double>(rounded)) > 1e-6)
        throw ValidationError("hop must be a whole number of milliseconds");
    return rounded;
}

FrameActivity rasterize(const Timeline& timeline, double hop_seconds, std::optional<std::size_t> num_frames,
                        const std::vector<std::string>* speakers) {
    FrameActivity fa;
    fa.recording_id = timeline.recording_id;
    fa.hop_ms = hop_to_millis(hop_seconds);
    fa.speakers = speakers ? *speakers : timeline.speakers();
    if (timeline.empty() && !num_frames && fa.speakers.empty()) return fa;

    Millis extent = 0;
    for (const auto& t : timeline.turns) extent = std::max(extent, t.offset_ms());
    const std::size_t frames =
        num_frames ? *num_frames : static_cast<std::size_t>((extent + fa.hop_ms - 1) / fa.hop_ms);
    fa.activity.assign(fa.speakers.size(), std::vector<std::uint8_t>(frames, 0));

    for (std::size_t s = 0; s < fa.speakers.size(); ++s) {
        auto& row = fa.activity[s];
        const IntervalSet turns = speaker_intervals(timeline, fa.speakers[s]);
        for (const auto& iv : turns.intervals()) {
            // Midpoints in half-millisecond units: 2 * (t + 0.5) * hop = (2t + 1) * hop.
            // Active iff 2*start <= (2t+1)*hop < 2*end.
            const Millis h = fa.hop_ms;
            const Millis lead = 2 * iv.start - h;
            const Millis first = lead <= 0 ? 0 : (lead + 2 * h - 1) / (2 * h);
            for (Millis t = first; t < static_cast<Millis>(frames); ++t) {
                if ((2 * t + 1) * h >= 2 * iv.end) break;
                row[static_cast<std::size_t>(t)] = 1;
            }
        }
    }
    return fa;
}

FrameActivity median_filter(const FrameActivity& fa, const MedianFilterSpec& spec) {
    spec.validate();
    if (spec.window == 1) return fa;
    FrameActivity out = fa;
    const auto half = static_cast<std::ptrdiff_t>(spec.window / 2);
    for (std::size_t s = 0; s < fa.activity.size(); ++s) {
        const auto& row = fa.activity[s];
        const auto n = static_cast<std::ptrdiff_t>(row.size());
        if (n == 0) continue;
        auto at = [&](std::ptrdiff_t i) { return row[static_cast<std::size_t>(std::clamp<std::ptrdiff_t>(i, 0, n - 1))]; };
        std::size_t ones = 0;
        for (std::ptrdiff_t i = -half; i <= half; ++i) ones += at(i);
        for (std::ptrdiff_t t = 0; t < n; ++t) {
            out.activity[s][static_cast<std::size_t>(t)] = ones > static_cast<std::size_t>(half) ? 1 : 0;
            ones -= at(t - half);
            ones += at(t + half + 1);
        }
    }
    return out;
}

Timeline derasterize(const FrameActivity& fa) {
    Timeline tl;
    tl.recording_id = fa.recording_id;
    for (std::size_t s = 0; s < fa.speakers.size(); ++s) {
        const auto& row = fa.activity[s];
        std::size_t t = 0;
        while (t < row.size()) {
            if (!row[t]) {
                ++t;
                continue;
            }
            std::size_t start = t;
            while (t < row.size() && row[t]) ++t;
            Turn turn;
            turn.recording_id = fa.recording_id;
            turn.onset = to_seconds(static_cast<Millis>(start) * fa.hop_ms);
            turn.duration = to_seconds(static_cast<Millis>(t - start) * fa.hop_ms);
            turn.speaker = fa.speakers[s];
            tl.turns.push_back(std::move(turn));
        }
    }
    tl.normalize();
    return tl;
}

std::size_t flip_count(const std::vector<std::uint8_t>& row) {
    std::size_t flips = 0;
    for (std::size_t t = 1; t < row.size(); ++t) flips += row[t] != row[t - 1];
    return flips;
}

Timeline smooth_timeline(const Timeline& timeline, std::size_t window, double hop_seconds) {
    MedianFilterSpec spec{window};
    spec.validate();
    return derasterize(median_filter(rasterize(timeline, hop_seconds), spec));
}

}  // namespace sdtk
