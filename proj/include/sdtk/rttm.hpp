#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace sdtk {

/// Time in integer milliseconds. All interval algebra runs on this grid.
using Millis = std::int64_t;

Millis to_millis(double seconds);
inline double to_seconds(Millis ms) { return static_cast<double>(ms) / 1000.0; }

/// One speaker-attributed interval of a recording (an RTTM SPEAKER row).
struct Turn {
    std::string recording_id;
    double onset = 0.0;     // seconds
    double duration = 0.0;  // seconds
    std::string speaker;

    double offset() const { return onset + duration; }
    Millis onset_ms() const { return to_millis(onset); }
    Millis offset_ms() const { return to_millis(onset + duration); }

    friend bool operator==(const Turn&, const Turn&) = default;
};

/// Turns of a single recording, sorted by (onset, speaker).
struct Timeline {
    std::string recording_id;
    std::vector<Turn> turns;

    /// Sorts turns and checks every turn invariant. Throws ValidationError.
    void normalize();
    bool empty() const { return turns.empty(); }
    /// Sorted distinct speaker labels.
    std::vector<std::string> speakers() const;
    /// Offset of the latest-ending turn, 0 for an empty timeline.
    double extent() const;

    friend bool operator==(const Timeline&, const Timeline&) = default;
};

using TimelineMap = std::map<std::string, Timeline>;

/// Half-open [start, end) millisecond interval.
struct Interval {
    Millis start = 0;
    Millis end = 0;

    Millis length() const { return end - start; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Disjoint, non-adjacent, sorted intervals.
class IntervalSet {
public:
    IntervalSet() = default;

    /// Builds a set from arbitrary (possibly overlapping) intervals; empty ones are dropped
    /// and touching ones merged.
    static IntervalSet from_unsorted(std::vector<Interval> intervals);

    const std::vector<Interval>& intervals() const { return intervals_; }
    bool empty() const { return intervals_.empty(); }
    std::size_t size() const { return intervals_.size(); }
    Millis total_ms() const;
    double total_seconds() const { return to_seconds(total_ms()); }
    bool contains(Millis t) const;

    IntervalSet intersect(const IntervalSet& other) const;
    IntervalSet subtract(const IntervalSet& other) const;

    friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

private:
    std::vector<Interval> intervals_;
};

/// Parses RTTM text. Non-SPEAKER lines and blank lines are skipped.
/// Throws ParseError with the line number on malformed SPEAKER lines.
TimelineMap parse_rttm(std::string_view text);
TimelineMap read_rttm_file(const std::string& path);
/// Reads a single RTTM file, or every *.rttm file in a directory.
TimelineMap read_rttm_path(const std::string& path);

std::string serialize_rttm(const std::vector<Timeline>& timelines);
std::string serialize_rttm(const TimelineMap& timelines);

IntervalSet speech_union(const Timeline& timeline);
/// Regions where at least two distinct speakers are active.
IntervalSet overlap_regions(const Timeline& timeline);
/// Union of the turns of one speaker.
IntervalSet speaker_intervals(const Timeline& timeline, std::string_view speaker);

}  // namespace sdtk
