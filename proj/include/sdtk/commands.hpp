#pragma once

#include "sdtk/der.hpp"
#include "sdtk/embeddings.hpp"
#include "sdtk/pipeline.hpp"
#include "sdtk/rttm.hpp"
#include "sdtk/stats.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sdtk {

/// Work behind the CLI subcommands, on in-memory inputs. Results are keyed or ordered by
/// recording id regardless of `jobs`.

struct SmoothingOptions {
    std::size_t window = 11;
    double hop = 0.01;
};

/// Clusters every recording and optionally median-filters the resulting timelines.
TimelineMap run_cluster(const EmbeddingMap& embeddings, const ClusterConfig& cfg,
                        const std::optional<SmoothingOptions>& smoothing = std::nullopt, std::size_t jobs = 1);

TimelineMap run_smooth(const TimelineMap& timelines, const SmoothingOptions& smoothing, std::size_t jobs = 1);

/// Throws ValidationError naming recordings either hypothesis lacks.
std::vector<DeltaRow> run_compare(const TimelineMap& refs, const TimelineMap& hyp_a, const TimelineMap& hyp_b,
                                  const ScoringConfig& cfg, const std::set<std::string>& exclude,
                                  std::size_t jobs = 1);

struct StatsOptions {
    /// Directory with <recording_id>.wav files; audio features are absent without it.
    std::optional<std::string> audio_dir;
    StmMode stm_mode = StmMode::change_points;
};

struct StatsResult {
    std::vector<RecordingFeatures> features;
    std::vector<std::string> warnings;
};

/// Recording duration is the WAV length when audio is available, else the timeline extent.
StatsResult run_stats(const TimelineMap& timelines, const StatsOptions& options, std::size_t jobs = 1);

}  // namespace sdtk
