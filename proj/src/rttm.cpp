#include "sdtk/rttm.hpp"

#include "sdtk/error.hpp"
#include "text_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace sdtk {

Millis to_millis(double seconds) { return static_cast<Millis>(std::llround(seconds * 1000.0)); }

void Timeline::normalize() {
    for (const auto& t : turns) {
        if (t.recording_id != recording_id)
            throw ValidationError("turn recording id '" + t.recording_id + "' differs from timeline '" +
                                  recording_id + "'");
        if (!(t.duration > 0.0)) throw ValidationError("turn duration must be positive");
        if (!(t.onset >= 0.0)) throw ValidationError("turn onset must be non-negative");
        if (t.speaker.empty()) throw ValidationError("turn speaker label is empty");
    }
    std::stable_sort(turns.begin(), turns.end(), [](const Turn& a, const Turn& b) {
        if (a.onset != b.onset) return a.onset < b.onset;
        return a.speaker < b.speaker;
    });
}

std::vector<std::string> Timeline::speakers() const {
    std::set<std::string> s;
    for (const auto& t : turns) s.insert(t.speaker);
    return {s.begin(), s.end()};
}

double Timeline::extent() const {
    double e = 0.0;
    for (const auto& t : turns) e = std::max(e, t.offset());
    return e;
}

IntervalSet IntervalSet::from_unsorted(std::vector<Interval> intervals) {
    std::erase_if(intervals, [](const Interval& iv) { return iv.end <= iv.start; });
    std::sort(intervals.begin(), intervals.end(),
              [](const Interval& a, const Interval& b) { return a.start < b.start; });
    IntervalSet out;
    for (const auto& iv : intervals) {
        if (!out.intervals_.empty() && iv.start <= out.intervals_.back().end) {
            out.intervals_.back().end = std::max(out.intervals_.back().end, iv.end);
        } else {
            out.intervals_.push_back(iv);
        }
    }
    return out;
}

Millis IntervalSet::total_ms() const {
    Millis total = 0;
    for (const auto& iv : intervals_) total += iv.length();
    return total;
}

bool IntervalSet::contains(Millis t) const {
    auto it = std::upper_bound(intervals_.begin(), intervals_.end(), t,
                               [](Millis v, const Interval& iv) { return v < iv.start; });
    if (it == intervals_.begin()) return false;
    --it;
    return t < it->end;
}

IntervalSet IntervalSet::intersect(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    const auto& a = intervals_;
    const auto& b = other.intervals_;
    while (i < a.size() && j < b.size()) {
        Millis lo = std::max(a[i].start, b[j].start);
        Millis hi = std::min(a[i].end, b[j].end);
        if (lo < hi) out.push_back({lo, hi});
        if (a[i].end < b[j].end) ++i; else ++j;
    }
    return from_unsorted(std::move(out));
}

IntervalSet IntervalSet::subtract(const IntervalSet& other) const {
    std::vector<Interval> out;
    std::size_t j = 0;
    const auto& b = other.intervals_;
    for (const auto& iv : intervals_) {
        Millis cur = iv.start;
        while (j < b.size() && b[j].end <= cur) ++j;
        std::size_t k = j;
        while (k < b.size() && b[k].start < iv.end) {
            if (b[k].start > cur) out.push_back({cur, b[k].start});
            cur = std::max(cur, b[k].end);
            ++k;
        }
        if (cur < iv.end) out.push_back({cur, iv.end});
    }
    return from_unsorted(std::move(out));
}

TimelineMap parse_rttm(std::string_view text) {
    TimelineMap out;
    std::size_t line_no = 0;
    for (std::string_view line : detail::split_lines(text)) {
        ++line_no;
        auto fields = detail::split_whitespace(line);
        if (fields.empty() || fields[0] != "SPEAKER") continue;
        if (fields.size() != 10)
            throw ParseError(line_no, "expected 10 fields, found " + std::to_string(fields.size()));
        Turn turn;
        turn.recording_id = std::string(fields[1]);
        auto onset = detail::parse_double(fields[3]);
        auto duration = detail::parse_double(fields[4]);
        if (!onset) throw ParseError(line_no, "non-numeric onset '" + std::string(fields[3]) + "'");
        if (!duration) throw ParseError(line_no, "non-numeric duration '" + std::string(fields[4]) + "'");
        if (!(*duration > 0.0)) throw ParseError(line_no, "duration must be positive");
        if (!(*onset >= 0.0)) throw ParseError(line_no, "onset must be non-negative");
        turn.onset = *onset;
        turn.duration = *duration;
        turn.speaker = std::string(fields[7]);
        auto& tl = out[turn.recording_id];
        tl.recording_id = turn.recording_id;
        tl.turns.push_back(std::move(turn));
    }
    for (auto& [id, tl] : out) tl.normalize();
    return out;
}

TimelineMap read_rttm_file(const std::string& path) {
    try {
        return parse_rttm(detail::read_file(path));
    } catch (const ParseError& e) {
        throw ParseError(e.line(), path + ": " + e.what());
    }
}

TimelineMap read_rttm_path(const std::string& path) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(path)) return read_rttm_file(path);
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file() && entry.path().extension() == ".rttm") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    TimelineMap out;
    for (const auto& f : files) {
        for (auto& [id, tl] : read_rttm_file(f.string())) {
            auto& dst = out[id];
            dst.recording_id = id;
            dst.turns.insert(dst.turns.end(), tl.turns.begin(), tl.turns.end());
        }
    }
    for (auto& [id, tl] : out) tl.normalize();
    return out;
}

std::string serialize_rttm(const std::vector<Timeline>& timelines) {
    std::string out;
    char buf[64];
    for (const auto& tl : timelines) {
        for (const auto& t : tl.turns) {
            out += "SPEAKER ";
            out += t.recording_id;
            std::snprintf(buf, sizeof buf, " 1 %.3f %.3f <NA> <NA> ", t.onset, t.duration);
            out += buf;
            out += t.speaker;
            out += " <NA> <NA>\n";
        }
    }
    return out;
}

std::string serialize_rttm(const TimelineMap& timelines) {
    std::vector<Timeline> v;
    v.reserve(timelines.size());
    for (const auto& [id, tl] : timelines) v.push_back(tl);
    return serialize_rttm(v);
}

IntervalSet speaker_intervals(const Timeline& timeline, std::string_view speaker) {
    std::vector<Interval> ivs;
    for (const auto& t : timeline.turns)
        if (t.speaker == speaker) ivs.push_back({t.onset_ms(), t.offset_ms()});
    return IntervalSet::from_unsorted(std::move(ivs));
}

IntervalSet speech_union(const Timeline& timeline) {
    std::vector<Interval> ivs;
    ivs.reserve(timeline.turns.size());
    for (const auto& t : timeline.turns) ivs.push_back({t.onset_ms(), t.offset_ms()});
    return IntervalSet::from_unsorted(std::move(ivs));
}

IntervalSet overlap_regions(const Timeline& timeline) {
    // Sweep over per-speaker unions so a speaker overlapping itself never counts twice.
    std::vector<std::pair<Millis, int>> events;
    for (const auto& spk : timeline.speakers()) {
        const IntervalSet own = speaker_intervals(timeline, spk);
        for (const auto& iv : own.intervals()) {
            events.emplace_back(iv.start, +1);
            events.emplace_back(iv.end, -1);
        }
    }
    std::sort(events.begin(), events.end());
    std::vector<Interval> out;
    int active = 0;
    std::size_t i = 0;
    while (i < events.size()) {
        Millis t = events[i].first;
        int before = active;
        while (i < events.size() && events[i].first == t) active += events[i++].second;
        if (before < 2 && active >= 2) out.push_back({t, t});
        else if (before >= 2 && active < 2) out.back().end = t;
    }
    return IntervalSet::from_unsorted(std::move(out));
}

}  // namespace sdtk
