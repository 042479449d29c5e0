#pragma once

#include "sdtk/embeddings.hpp"
#include "sdtk/pitch.hpp"
#include "sdtk/rttm.hpp"
#include "sdtk/wav.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdtk {

struct EmbeddingFixtureSpec {
    std::uint64_t seed = 0;
    std::string recording_id = "fixture";
    std::size_t n_segments = 40;
    std::size_t dim = 16;
    /// Every within-cluster pair has cosine >= within_cosine.
    double within_cosine = 0.9;
    /// Every across-cluster pair has cosine <= across_cosine.
    double across_cosine = 0.1;
    double segment_duration = 1.5;
};

struct EmbeddingFixture {
    EmbeddingSet set;
    std::vector<std::size_t> labels;  // ground truth, canonical order
    Timeline reference;               // one turn per segment, labels "spk00"/"spk01"
};

/// Two-speaker embedding set with guaranteed cosine separation. Throws ValidationError when the
/// targets cannot be met (within <= across, or the angular budget exceeds pi).
EmbeddingFixture gen_embeddings(const EmbeddingFixtureSpec& spec);

struct TimelineFixtureSpec {
    std::uint64_t seed = 0;
    std::string recording_id = "conversation";
    double duration = 300.0;
    double sp = 88.14;
    double ovp = 4.08;
    double stm = 16.0;
};

/// Two-speaker alternating conversation hitting the SP/OVP/STM targets (change-point STM).
Timeline gen_timeline(const TimelineFixtureSpec& spec);

struct VoicedRegion {
    double start = 0.0;
    double end = 0.0;
    double f0 = 120.0;
};

struct AudioFixtureSpec {
    std::uint64_t seed = 0;
    int sample_rate = 16000;
    double duration = 10.0;
    std::vector<VoicedRegion> regions;
    /// Two-pole resonators applied in cascade to the harmonic source (flat to 4 kHz, cosine roll-off
    /// to zero at 0.45 * sample_rate).
    std::vector<Formant> resonances;
    /// Peak-equivalent amplitude: the speech RMS is amplitude / sqrt(2).
    double amplitude = 0.5;
    /// White noise over the whole signal at speech_power / 10^(snr/10). No noise when empty.
    std::optional<double> snr_db;
};

Audio gen_audio(const AudioFixtureSpec& spec);

/// Voiced regions that follow the turns of a two-speaker timeline. Overlapped stretches use the
/// first speaker's f0.
std::vector<VoicedRegion> regions_from_timeline(const Timeline& timeline, double f0_first, double f0_second);

}  // namespace sdtk
