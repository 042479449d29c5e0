#pragma once

#include "sdtk/rttm.hpp"
#include "sdtk/wav.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sdtk {

enum class StmMode {
    change_points,  // speaker changes between consecutive onset-sorted turns
    turns,          // every turn counts
};

struct TimelineFeatures {
    double sp = 0.0;   // percent of duration
    double ovp = 0.0;  // percent of duration
    double stm = 0.0;  // per minute
};

/// Speech percentage, overlap percentage and speaker turns per minute over `duration` seconds.
TimelineFeatures timeline_features(const Timeline& timeline, double duration, StmMode mode = StmMode::change_points);

struct AudioFeatures {
    std::optional<double> adp;
    std::optional<double> adf3;
    std::optional<double> snr;
    std::vector<std::string> warnings;
};

/// Pitch and F3 medians per speaker over non-overlapped turn regions (exactly two speakers
/// required), and the speech/non-speech frame energy ratio in dB.
AudioFeatures audio_features(const Audio& audio, const Timeline& timeline);

struct RecordingFeatures {
    std::string recording_id;
    double duration = 0.0;
    double sp = 0.0;
    double ovp = 0.0;
    std::optional<double> adp;
    std::optional<double> adf3;
    std::optional<double> snr;
    double stm = 0.0;
};

enum class CiMethod { normal, student_t };

struct FeatureStat {
    std::string feature;
    std::optional<double> mean;
    double half_width = 0.0;
    std::size_t count = 0;
};

/// One entry per feature in the order sp, ovp, adp, adf3, snr, stm. Absent values are skipped.
std::vector<FeatureStat> summarize(std::span<const RecordingFeatures> features, CiMethod ci = CiMethod::normal);

/// Mean and 95% half-width of a sample; half-width 0 for a single value.
FeatureStat summarize_values(std::string feature, std::span<const double> values, CiMethod ci = CiMethod::normal);

std::string features_csv(std::span<const RecordingFeatures> features);
std::string summary_csv(std::span<const FeatureStat> summary);

}  // namespace sdtk
