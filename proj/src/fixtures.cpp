#include "sdtk/fixtures.hpp"

#include "sdtk/error.hpp"
#include "sdtk/random.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace sdtk {

namespace {

std::vector<double> random_unit(Rng& rng, std::size_t dim) {
    std::vector<double> v(dim);
    double norm = 0.0;
    while (norm < 1e-6) {
        norm = 0.0;
        for (auto& x : v) {
            x = rng.normal();
            norm += x * x;
        }
        norm = std::sqrt(norm);
    }
    for (auto& x : v) x /= norm;
    return v;
}

/// Random unit vector orthogonal to the unit vector `c`.
std::vector<double> random_orthogonal(Rng& rng, const std::vector<double>& c) {
    while (true) {
        auto v = random_unit(rng, c.size());
        const double dot = std::inner_product(v.begin(), v.end(), c.begin(), 0.0);
        double norm = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            v[i] -= dot * c[i];
            norm += v[i] * v[i];
        }
        norm = std::sqrt(norm);
        if (norm > 1e-6) {
            for (auto& x : v) x /= norm;
            return v;
        }
    }
}

/// Unit vector at angle `angle` from unit `c`, in a random direction.
std::vector<double> rotate_away(Rng& rng, const std::vector<double>& c, double angle) {
    const auto u = random_orthogonal(rng, c);
    std::vector<double> v(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) v[i] = std::cos(angle) * c[i] + std::sin(angle) * u[i];
    return v;
}

std::string speaker_label(std::size_t k) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "spk%02zu", k);
    return buf;
}

/// Jitter weights with mean 1.
std::vector<double> jitter(Rng& rng, std::size_t n, double spread) {
    std::vector<double> w(n);
    for (auto& x : w) x = 1.0 + rng.uniform(-spread, spread);
    const double mean = n ? std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(n) : 1.0;
    for (auto& x : w) x /= mean;
    return w;
}

}  // namespace

EmbeddingFixture gen_embeddings(const EmbeddingFixtureSpec& spec) {
    if (!(spec.within_cosine > spec.across_cosine))
        throw ValidationError("within-cluster cosine target must exceed the across-cluster target");
    if (spec.within_cosine > 1.0 || spec.across_cosine < -1.0) throw ValidationError("cosine targets out of range");
    if (spec.dim < 2) throw ValidationError("fixture embeddings need dim >= 2");
    if (spec.n_segments < 2) throw ValidationError("fixture needs at least two segments");
    if (!(spec.segment_duration > 0.0)) throw ValidationError("segment duration must be positive");

    // Members lie within `spread` radians of their centroid, so within-cluster angles are at most
    // 2 * spread and across-cluster angles at least separation - 2 * spread.
    const double spread = 0.45 * std::acos(std::clamp(spec.within_cosine, -1.0, 1.0));
    const double separation = std::acos(std::clamp(spec.across_cosine, -1.0, 1.0)) + 2.0 * spread + 0.05;
    if (separation > std::numbers::pi) throw ValidationError("cosine targets are infeasible for two clusters");

    Rng rng(spec.seed);
    const auto c0 = random_unit(rng, spec.dim);
    const auto c1 = rotate_away(rng, c0, separation);

    EmbeddingFixture fx;
    const std::size_t n = spec.n_segments;
    // Conversational runs of 1-6 segments; the first run leaves room for the other speaker.
    std::size_t speaker = 0;
    while (fx.labels.size() < n) {
        std::size_t run = 1 + rng.index(6);
        if (fx.labels.empty()) run = std::min(run, n - 1);
        for (std::size_t r = 0; r < run && fx.labels.size() < n; ++r) fx.labels.push_back(speaker);
        speaker ^= 1u;
    }

    fx.set.recording_id = spec.recording_id;
    fx.set.dim = spec.dim;
    fx.reference.recording_id = spec.recording_id;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& c = fx.labels[i] == 0 ? c0 : c1;
        Segment seg;
        seg.onset = static_cast<double>(i) * spec.segment_duration;
        seg.offset = static_cast<double>(i + 1) * spec.segment_duration;
        seg.vector = rotate_away(rng, c, spread * rng.uniform());
        fx.set.segments.push_back(std::move(seg));
        fx.reference.turns.push_back(
            {spec.recording_id, static_cast<double>(i) * spec.segment_duration, spec.segment_duration,
             speaker_label(fx.labels[i])});
    }
    fx.reference.normalize();
    return fx;
}

Timeline gen_timeline(const TimelineFixtureSpec& spec) {
    const double d = spec.duration;
    if (!(d > 0.0)) throw ValidationError("duration must be positive");
    if (!(spec.sp > 0.0 && spec.sp <= 100.0)) throw ValidationError("speech percentage must be in (0, 100]");
    if (!(spec.ovp >= 0.0 && spec.ovp < spec.sp)) throw ValidationError("overlap percentage must be in [0, sp)");
    if (!(spec.stm >= 0.0)) throw ValidationError("turns per minute must be non-negative");

    const double speech = spec.sp / 100.0 * d;
    const double overlap = spec.ovp / 100.0 * d;
    const auto changes = static_cast<std::size_t>(std::lround(spec.stm * d / 60.0));
    if (overlap > 0.0 && changes == 0) throw ValidationError("overlap needs at least one speaker change");
    const std::size_t turns = changes + 1;

    // Every other transition overlaps; the rest, plus the lead-in and tail, hold the silence.
    std::vector<bool> overlapped(changes, false);
    std::size_t overlap_slots = 0;
    if (overlap > 0.0)
        for (std::size_t j = 0; j < changes; j += 2) {
            overlapped[j] = true;
            ++overlap_slots;
        }
    const std::size_t gap_slots = changes - overlap_slots + 2;
    const double silence = d - speech;

    Rng rng(spec.seed);
    for (double spread : {0.3, 0.0}) {
        auto len_w = jitter(rng, turns, spread);
        auto ovl_w = jitter(rng, overlap_slots, spread);
        auto gap_w = jitter(rng, gap_slots, spread);
        const double total_len = speech + overlap;
        std::vector<double> len(turns), ovl(changes, 0.0), gap(changes, 0.0);
        for (std::size_t i = 0; i < turns; ++i) len[i] = total_len / static_cast<double>(turns) * len_w[i];
        std::size_t oi = 0, gi = 0;
        const double lead = silence / static_cast<double>(gap_slots) * gap_w[gi++];
        for (std::size_t j = 0; j < changes; ++j) {
            if (overlapped[j]) ovl[j] = overlap / static_cast<double>(overlap_slots) * ovl_w[oi++];
            else gap[j] = silence / static_cast<double>(gap_slots) * gap_w[gi++];
        }
        bool ok = true;
        for (std::size_t i = 0; i < turns; ++i) {
            const double left = i > 0 ? ovl[i - 1] : 0.0;
            const double right = i < changes ? ovl[i] : 0.0;
            if (!(len[i] > left + right + 1e-3)) ok = false;
        }
        if (!ok) continue;

        Timeline tl;
        tl.recording_id = spec.recording_id;
        double cursor = lead;
        for (std::size_t i = 0; i < turns; ++i) {
            const Millis on = to_millis(cursor);
            const Millis off = to_millis(cursor + len[i]);
            tl.turns.push_back({spec.recording_id, to_seconds(on), to_seconds(off - on), i % 2 == 0 ? "A" : "B"});
            if (i < changes) cursor += len[i] - ovl[i] + gap[i];
        }
        tl.normalize();
        return tl;
    }
    throw ValidationError("overlap target too large for the requested turn rate");
}

Audio gen_audio(const AudioFixtureSpec& spec) {
    if (spec.sample_rate < 8000) throw ValidationError("sample rate must be at least 8000 Hz");
    Audio audio;
    audio.sample_rate = spec.sample_rate;
    const auto rate = static_cast<double>(spec.sample_rate);
    const auto total = static_cast<std::size_t>(std::lround(spec.duration * rate));
    audio.samples.assign(total, 0.0);
    std::vector<bool> is_speech(total, false);

    for (const auto& region : spec.regions) {
        const auto begin = static_cast<std::size_t>(std::clamp(std::lround(region.start * rate), 0L, static_cast<long>(total)));
        const auto end = static_cast<std::size_t>(std::clamp(std::lround(region.end * rate), 0L, static_cast<long>(total)));
        if (end <= begin || !(region.f0 > 0.0)) continue;
        // Flat harmonics up to 4 kHz, then a raised-cosine roll-off reaching zero at 90% of Nyquist.
        const auto harmonics = static_cast<std::size_t>(std::floor(0.45 * rate / region.f0));
        const double top = 0.45 * rate;
        const double knee = std::min(4000.0, 0.5 * top);
        std::vector<double> gain(harmonics + 1, 0.0);
        for (std::size_t h = 1; h <= harmonics; ++h) {
            const double f = region.f0 * static_cast<double>(h);
            gain[h] = f <= knee ? 1.0 : 0.5 * (1.0 + std::cos(std::numbers::pi * (f - knee) / (top - knee)));
        }
        std::vector<double> seg(end - begin, 0.0);
        for (std::size_t n = 0; n < seg.size(); ++n) {
            const double t = static_cast<double>(begin + n) / rate;
            double s = 0.0;
            for (std::size_t h = 1; h <= harmonics; ++h)
                s += gain[h] * std::cos(2.0 * std::numbers::pi * region.f0 * static_cast<double>(h) * t);
            seg[n] = s;
        }
        for (const auto& res : spec.resonances) {
            const double r = std::exp(-std::numbers::pi * res.bandwidth / rate);
            const double a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * res.frequency / rate);
            const double a2 = -r * r;
            double y1 = 0.0, y2 = 0.0;
            for (auto& x : seg) {
                const double y = x + a1 * y1 + a2 * y2;
                y2 = y1;
                y1 = y;
                x = y;
            }
        }
        for (std::size_t n = 0; n < seg.size(); ++n) {
            audio.samples[begin + n] = seg[n];
            is_speech[begin + n] = true;
        }
    }

    double power = 0.0;
    std::size_t count = 0;
    for (std::size_t n = 0; n < total; ++n)
        if (is_speech[n]) {
            power += audio.samples[n] * audio.samples[n];
            ++count;
        }
    power = count ? power / static_cast<double>(count) : 0.0;
    const double target_power = spec.amplitude * spec.amplitude / 2.0;
    const double gain = power > 0.0 ? std::sqrt(target_power / power) : 0.0;
    for (auto& s : audio.samples) s *= gain;

    if (spec.snr_db && count > 0) {
        const double noise_sd = std::sqrt(target_power / std::pow(10.0, *spec.snr_db / 10.0));
        Rng rng(spec.seed);
        for (auto& s : audio.samples) s += noise_sd * rng.normal();
    }
    return audio;
}

std::vector<VoicedRegion> regions_from_timeline(const Timeline& timeline, double f0_first, double f0_second) {
    const auto speakers = timeline.speakers();
    const IntervalSet overlap = overlap_regions(timeline);
    std::vector<VoicedRegion> out;
    for (std::size_t s = 0; s < speakers.size() && s < 2; ++s) {
        const double f0 = s == 0 ? f0_first : f0_second;
        const IntervalSet solo = speaker_intervals(timeline, speakers[s]).subtract(overlap);
        for (const auto& iv : solo.intervals())
            out.push_back({to_seconds(iv.start), to_seconds(iv.end), f0});
    }
    for (const auto& iv : overlap.intervals()) out.push_back({to_seconds(iv.start), to_seconds(iv.end), f0_first});
    std::sort(out.begin(), out.end(), [](const VoicedRegion& a, const VoicedRegion& b) { return a.start < b.start; });
    return out;
}

}  // namespace sdtk
