#pragma once

#include "sdtk/rttm.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sdtk {

/// Per-speaker binary activity on a fixed frame grid.
struct FrameActivity {
    std::string recording_id;
    Millis hop_ms = 10;
    std::vector<std::string> speakers;
    /// activity[s][t] in {0, 1}; every row has num_frames() entries.
    std::vector<std::vector<std::uint8_t>> activity;

    std::size_t num_frames() const { return activity.empty() ? 0 : activity.front().size(); }
    double hop() const { return to_seconds(hop_ms); }

    friend bool operator==(const FrameActivity&, const FrameActivity&) = default;
};

struct MedianFilterSpec {
    std::size_t window = 11;

    void validate() const;
};

/// Converts a hop in seconds to whole milliseconds. Throws ValidationError when the hop is not
/// positive or not a whole number of milliseconds.
Millis hop_to_millis(double hop_seconds);

/// Frame t is active for a speaker iff the midpoint (t + 0.5) * hop lies inside one of the
/// speaker's turns. The grid spans the last turn offset unless `num_frames` is given; `speakers`
/// overrides the row order and may name speakers without turns.
FrameActivity rasterize(const Timeline& timeline, double hop_seconds,
                        std::optional<std::size_t> num_frames = std::nullopt,
                        const std::vector<std::string>* speakers = nullptr);

/// Sliding-window median per speaker row with edge replication. Window 1 is the identity.
FrameActivity median_filter(const FrameActivity& fa, const MedianFilterSpec& spec);

/// Maximal runs of active frames become turns.
Timeline derasterize(const FrameActivity& fa);

/// Number of 0/1 transitions in a row.
std::size_t flip_count(const std::vector<std::uint8_t>& row);

/// rasterize -> median_filter -> derasterize.
Timeline smooth_timeline(const Timeline& timeline, std::size_t window, double hop_seconds);

}  // namespace sdtk
