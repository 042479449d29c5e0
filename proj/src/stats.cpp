#include "sdtk/stats.hpp"

#include "sdtk/error.hpp"
#include "sdtk/pitch.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>

namespace sdtk {

TimelineFeatures timeline_features(const Timeline& timeline, double duration, StmMode mode) {
    if (!(duration > 0.0)) throw ValidationError("recording duration must be positive");
    TimelineFeatures f;
    f.sp = 100.0 * speech_union(timeline).total_seconds() / duration;
    f.ovp = 100.0 * overlap_regions(timeline).total_seconds() / duration;
    std::size_t events = 0;
    if (mode == StmMode::turns) {
        events = timeline.turns.size();
    } else {
        for (std::size_t i = 1; i < timeline.turns.size(); ++i)
            events += timeline.turns[i].speaker != timeline.turns[i - 1].speaker;
    }
    f.stm = static_cast<double>(events) / (duration / 60.0);
    return f;
}

namespace {

std::optional<double> median(std::vector<double> v) {
    if (v.empty()) return std::nullopt;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    double m = v[mid];
    if (v.size() % 2 == 0) {
        double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
        m = (m + lower) / 2.0;
    }
    return m;
}

/// Values of a 10 ms track whose frame midpoints fall inside `region`.
std::vector<double> pool(const FrameTrack& track, const IntervalSet& region) {
    std::vector<double> out;
    const Millis hop = to_millis(track.hop);
    for (std::size_t t = 0; t < track.values.size(); ++t) {
        if (!track.values[t]) continue;
        // Midpoint in half-milliseconds to stay on the integer grid.
        const Millis mid2 = (2 * static_cast<Millis>(t) + 1) * hop;
        if (region.contains(mid2 / 2)) out.push_back(*track.values[t]);
    }
    return out;
}

}  // namespace

AudioFeatures audio_features(const Audio& audio, const Timeline& timeline) {
    AudioFeatures out;
    const auto speakers = timeline.speakers();
    const IntervalSet speech = speech_union(timeline);

    if (speakers.size() == 2) {
        const FrameTrack pitch = estimate_pitch_track(audio.samples, audio.sample_rate);
        const FrameTrack f3 = estimate_f3_track(audio.samples, audio.sample_rate, &pitch);
        const IntervalSet overlap = overlap_regions(timeline);
        std::optional<double> f0_med[2], f3_med[2];
        for (std::size_t s = 0; s < 2; ++s) {
            const IntervalSet region = speaker_intervals(timeline, speakers[s]).subtract(overlap);
            f0_med[s] = median(pool(pitch, region));
            f3_med[s] = median(pool(f3, region));
            if (!f0_med[s]) out.warnings.push_back("speaker '" + speakers[s] + "' has no voiced frames; ADP absent");
            if (!f3_med[s]) out.warnings.push_back("speaker '" + speakers[s] + "' has no F3 estimates; ADF3 absent");
        }
        if (f0_med[0] && f0_med[1]) out.adp = std::abs(*f0_med[0] - *f0_med[1]);
        if (f3_med[0] && f3_med[1]) out.adf3 = std::abs(*f3_med[0] - *f3_med[1]);
    } else {
        out.warnings.push_back("ADP/ADF3 need exactly two speakers, found " + std::to_string(speakers.size()));
    }

    const auto frame = static_cast<std::size_t>(std::lround(audio.sample_rate * 0.01));
    double speech_energy = 0.0, noise_energy = 0.0;
    std::size_t speech_frames = 0, noise_frames = 0;
    for (std::size_t t = 0; frame > 0 && (t + 1) * frame <= audio.samples.size(); ++t) {
        double e = 0.0;
        for (std::size_t n = t * frame; n < (t + 1) * frame; ++n) e += audio.samples[n] * audio.samples[n];
        e /= static_cast<double>(frame);
        const Millis mid2 = (2 * static_cast<Millis>(t) + 1) * 10;
        if (speech.contains(mid2 / 2)) {
            speech_energy += e;
            ++speech_frames;
        } else {
            noise_energy += e;
            ++noise_frames;
        }
    }
    if (noise_frames == 0) {
        out.warnings.push_back("no non-speech frames; SNR absent");
    } else if (speech_frames == 0) {
        out.warnings.push_back("no speech frames; SNR absent");
    } else if (!(noise_energy > 0.0)) {
        out.warnings.push_back("non-speech region is digital silence; SNR absent");
    } else {
        const double ratio = (speech_energy / static_cast<double>(speech_frames)) /
                             (noise_energy / static_cast<double>(noise_frames));
        if (ratio > 0.0) out.snr = 10.0 * std::log10(ratio);
        else out.warnings.push_back("speech region is digital silence; SNR absent");
    }
    return out;
}

FeatureStat summarize_values(std::string feature, std::span<const double> values, CiMethod ci) {
    FeatureStat s;
    s.feature = std::move(feature);
    s.count = values.size();
    if (values.empty()) return s;
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    s.mean = mean;
    if (values.size() < 2) return s;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / (n - 1.0));
    double z = 1.96;
    if (ci == CiMethod::student_t) {
        boost::math::students_t dist(n - 1.0);
        z = boost::math::quantile(boost::math::complement(dist, 0.025));
    }
    s.half_width = z * sd / std::sqrt(n);
    return s;
}

std::vector<FeatureStat> summarize(std::span<const RecordingFeatures> features, CiMethod ci) {
    if (features.empty()) throw ValidationError("summarize needs at least one recording");
    std::vector<double> sp, ovp, adp, adf3, snr, stm;
    for (const auto& f : features) {
        sp.push_back(f.sp);
        ovp.push_back(f.ovp);
        if (f.adp) adp.push_back(*f.adp);
        if (f.adf3) adf3.push_back(*f.adf3);
        if (f.snr) snr.push_back(*f.snr);
        stm.push_back(f.stm);
    }
    return {summarize_values("sp", sp, ci),    summarize_values("ovp", ovp, ci), summarize_values("adp", adp, ci),
            summarize_values("adf3", adf3, ci), summarize_values("snr", snr, ci), summarize_values("stm", stm, ci)};
}

namespace {

std::string cell(std::optional<double> v, const char* fmt = "%.4f") {
    if (!v) return "";
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, *v);
    return buf;
}

}  // namespace

std::string features_csv(std::span<const RecordingFeatures> features) {
    std::string out = "recording_id,duration,sp,ovp,adp,adf3,snr,stm\n";
    for (const auto& f : features) {
        out += f.recording_id + ',' + cell(f.duration, "%.3f") + ',' + cell(f.sp) + ',' + cell(f.ovp) + ',' +
               cell(f.adp) + ',' + cell(f.adf3) + ',' + cell(f.snr) + ',' + cell(f.stm) + '\n';
    }
    return out;
}

std::string summary_csv(std::span<const FeatureStat> summary) {
    std::string out = "feature,mean,ci95_halfwidth,count\n";
    for (const auto& s : summary) {
        out += s.feature + ',' + cell(s.mean) + ',' + (s.mean ? cell(s.half_width) : std::string()) + ',' +
               std::to_string(s.count) + '\n';
    }
    return out;
}

}  // namespace sdtk
