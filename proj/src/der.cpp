#include "sdtk/der.hpp"

#include "sdtk/error.hpp"
#include "sdtk/parallel.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>

namespace sdtk {

void ScoringConfig::validate() const {
    if (!(collar >= 0.0)) throw ValidationError("collar must be non-negative");
}

double DerBreakdown::der() const {
    if (ref_speech > 0) return static_cast<double>(errors()) / static_cast<double>(ref_speech);
    return errors() == 0 ? 0.0 : std::numeric_limits<double>::infinity();
}

namespace {

// Hungarian algorithm (potentials form) minimizing cost for rows <= cols.
std::vector<int> min_cost_assignment(const std::vector<std::vector<Millis>>& cost, std::size_t cols) {
    const std::size_t rows = cost.size();
    constexpr Millis inf = std::numeric_limits<Millis>::max() / 4;
    std::vector<Millis> u(rows + 1, 0), v(cols + 1, 0);
    std::vector<std::size_t> p(cols + 1, 0), way(cols + 1, 0);
    for (std::size_t i = 1; i <= rows; ++i) {
        p[0] = i;
        std::size_t j0 = 0;
        std::vector<Millis> minv(cols + 1, inf);
        std::vector<bool> used(cols + 1, false);
        do {
            used[j0] = true;
            const std::size_t i0 = p[j0];
            Millis delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= cols; ++j) {
                if (used[j]) continue;
                const Millis cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= cols; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    std::vector<int> match(rows, -1);
    for (std::size_t j = 1; j <= cols; ++j)
        if (p[j] != 0) match[p[j] - 1] = static_cast<int>(j - 1);
    return match;
}

struct SpeakerTracks {
    std::vector<std::string> names;
    std::vector<IntervalSet> tracks;
};

SpeakerTracks tracks_of(const Timeline& tl) {
    SpeakerTracks out;
    out.names = tl.speakers();
    for (const auto& name : out.names) out.tracks.push_back(speaker_intervals(tl, name));
    return out;
}

SpeakerMap map_tracks(const SpeakerTracks& ref, const SpeakerTracks& hyp, const IntervalSet* scored) {
    std::vector<std::vector<Millis>> overlap(hyp.names.size(), std::vector<Millis>(ref.names.size(), 0));
    for (std::size_t h = 0; h < hyp.names.size(); ++h) {
        IntervalSet ht = scored ? hyp.tracks[h].intersect(*scored) : hyp.tracks[h];
        for (std::size_t r = 0; r < ref.names.size(); ++r) overlap[h][r] = ht.intersect(ref.tracks[r]).total_ms();
    }
    SpeakerMap out;
    auto match = optimal_assignment(overlap);
    for (std::size_t h = 0; h < match.size(); ++h)
        if (match[h] >= 0 && overlap[h][static_cast<std::size_t>(match[h])] > 0)
            out[hyp.names[h]] = ref.names[static_cast<std::size_t>(match[h])];
    return out;
}

}  // namespace

std::vector<int> optimal_assignment(const std::vector<std::vector<Millis>>& weights) {
    const std::size_t rows = weights.size();
    if (rows == 0) return {};
    const std::size_t cols = weights.front().size();
    if (cols == 0) return std::vector<int>(rows, -1);
    Millis top = 0;
    for (const auto& row : weights) {
        if (row.size() != cols) throw ValidationError("optimal_assignment: ragged weight matrix");
        for (Millis w : row) {
            if (w < 0) throw ValidationError("optimal_assignment: weights must be non-negative");
            top = std::max(top, w);
        }
    }
    if (rows <= cols) {
        std::vector<std::vector<Millis>> cost(rows, std::vector<Millis>(cols));
        for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t c = 0; c < cols; ++c) cost[r][c] = top - weights[r][c];
        return min_cost_assignment(cost, cols);
    }
    std::vector<std::vector<Millis>> cost(cols, std::vector<Millis>(rows));
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) cost[c][r] = top - weights[r][c];
    auto col_match = min_cost_assignment(cost, rows);
    std::vector<int> match(rows, -1);
    for (std::size_t c = 0; c < cols; ++c)
        if (col_match[c] >= 0) match[static_cast<std::size_t>(col_match[c])] = static_cast<int>(c);
    return match;
}

SpeakerMap optimal_speaker_map(const Timeline& ref, const Timeline& hyp) {
    return map_tracks(tracks_of(ref), tracks_of(hyp), nullptr);
}

DerBreakdown score_file(const Timeline& ref, const Timeline& hyp, const ScoringConfig& cfg) {
    cfg.validate();
    if (!hyp.empty() && !ref.recording_id.empty() && ref.recording_id != hyp.recording_id)
        throw ValidationError("recording id mismatch: reference '" + ref.recording_id + "' vs hypothesis '" +
                              hyp.recording_id + "'");
    DerBreakdown out;
    out.recording_id = ref.recording_id;
    const SpeakerTracks rt = tracks_of(ref);
    const SpeakerTracks ht = tracks_of(hyp);

    Millis end = 0;
    for (const auto& t : ref.turns) end = std::max(end, t.offset_ms());
    for (const auto& t : hyp.turns) end = std::max(end, t.offset_ms());

    std::vector<Interval> excluded_raw;
    const Millis collar = to_millis(cfg.collar);
    if (collar > 0) {
        for (const auto& t : ref.turns) {
            excluded_raw.push_back({t.onset_ms() - collar, t.onset_ms() + collar});
            excluded_raw.push_back({t.offset_ms() - collar, t.offset_ms() + collar});
        }
    }
    if (!cfg.score_overlap) {
        const IntervalSet overlap = overlap_regions(ref);
        excluded_raw.insert(excluded_raw.end(), overlap.intervals().begin(), overlap.intervals().end());
    }
    const IntervalSet scored = IntervalSet::from_unsorted({{0, end}}).subtract(IntervalSet::from_unsorted(excluded_raw));

    const SpeakerMap map = map_tracks(rt, ht, &scored);
    std::vector<int> hyp_to_ref(ht.names.size(), -1);
    for (std::size_t h = 0; h < ht.names.size(); ++h) {
        auto it = map.find(ht.names[h]);
        if (it == map.end()) continue;
        auto pos = std::lower_bound(rt.names.begin(), rt.names.end(), it->second);
        hyp_to_ref[h] = static_cast<int>(pos - rt.names.begin());
    }

    std::vector<Millis> cuts;
    for (const auto* tracks : {&rt.tracks, &ht.tracks})
        for (const auto& track : *tracks)
            for (const auto& iv : track.intervals()) {
                cuts.push_back(iv.start);
                cuts.push_back(iv.end);
            }
    for (const auto& iv : scored.intervals()) {
        cuts.push_back(iv.start);
        cuts.push_back(iv.end);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    std::vector<bool> ref_active(rt.names.size());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const Millis t0 = cuts[c];
        const Millis len = cuts[c + 1] - t0;
        if (!scored.contains(t0)) continue;
        std::size_t r = 0, h = 0, correct = 0;
        for (std::size_t i = 0; i < rt.tracks.size(); ++i) {
            ref_active[i] = rt.tracks[i].contains(t0);
            r += ref_active[i];
        }
        for (std::size_t i = 0; i < ht.tracks.size(); ++i) {
            if (!ht.tracks[i].contains(t0)) continue;
            ++h;
            if (hyp_to_ref[i] >= 0 && ref_active[static_cast<std::size_t>(hyp_to_ref[i])]) ++correct;
        }
        out.ref_speech += static_cast<Millis>(r) * len;
        if (r > h) out.missed += static_cast<Millis>(r - h) * len;
        if (h > r) out.false_alarm += static_cast<Millis>(h - r) * len;
        out.confusion += static_cast<Millis>(std::min(r, h) - correct) * len;
    }
    return out;
}

CorpusScore score_corpus(const TimelineMap& refs, const TimelineMap& hyps, const ScoringConfig& cfg,
                         std::size_t jobs) {
    cfg.validate();
    if (refs.empty()) throw ValidationError("no reference recordings to score");
    CorpusScore out;
    std::vector<const Timeline*> ref_list;
    std::vector<const Timeline*> hyp_list;
    const Timeline empty_hyp;
    for (const auto& [id, ref] : refs) {
        ref_list.push_back(&ref);
        auto it = hyps.find(id);
        if (it == hyps.end()) {
            out.warnings.push_back("no hypothesis for recording '" + id + "'; scoring it as fully missed");
            hyp_list.push_back(&empty_hyp);
        } else {
            hyp_list.push_back(&it->second);
        }
    }
    for (const auto& [id, hyp] : hyps)
        if (!refs.count(id)) out.warnings.push_back("hypothesis recording '" + id + "' has no reference; ignored");

    out.files.resize(ref_list.size());
    parallel_for(ref_list.size(), jobs, [&](std::size_t i) {
        out.files[i] = score_file(*ref_list[i], *hyp_list[i], cfg);
        out.files[i].recording_id = ref_list[i]->recording_id;
    });
    out.total.recording_id = "TOTAL";
    for (const auto& f : out.files) {
        out.total.ref_speech += f.ref_speech;
        out.total.missed += f.missed;
        out.total.false_alarm += f.false_alarm;
        out.total.confusion += f.confusion;
    }
    return out;
}

std::vector<DeltaRow> delta_report(const std::vector<DerBreakdown>& a, const std::vector<DerBreakdown>& b,
                                   const std::set<std::string>& exclude) {
    std::map<std::string, double> b_der;
    for (const auto& f : b) b_der[f.recording_id] = f.der();
    std::set<std::string> a_ids;
    for (const auto& f : a) a_ids.insert(f.recording_id);
    std::string only_a, only_b;
    for (const auto& id : a_ids)
        if (!b_der.count(id)) only_a += (only_a.empty() ? "" : " ") + id;
    for (const auto& [id, d] : b_der)
        if (!a_ids.count(id)) only_b += (only_b.empty() ? "" : " ") + id;
    if (!only_a.empty() || !only_b.empty())
        throw ValidationError("recording sets differ; only in A: [" + only_a + "], only in B: [" + only_b + "]");

    std::vector<DeltaRow> rows;
    for (const auto& f : a) {
        if (exclude.count(f.recording_id)) continue;
        DeltaRow row{f.recording_id, f.der(), b_der.at(f.recording_id), 0.0};
        row.delta = row.der_a - row.der_b;
        rows.push_back(row);
    }
    std::stable_sort(rows.begin(), rows.end(), [](const DeltaRow& x, const DeltaRow& y) { return x.delta > y.delta; });
    return rows;
}

namespace {

std::string format_row(const DerBreakdown& d) {
    char buf[256];
    std::snprintf(buf, sizeof buf, ",%.3f,%.3f,%.3f,%.3f,%.6f\n", to_seconds(d.ref_speech), to_seconds(d.missed),
                  to_seconds(d.false_alarm), to_seconds(d.confusion), d.der());
    return d.recording_id + buf;
}

}  // namespace

std::string der_report_csv(const CorpusScore& score, bool per_file) {
    std::string out = "recording_id,ref_speech,missed,false_alarm,confusion,der\n";
    if (per_file)
        for (const auto& f : score.files) out += format_row(f);
    out += format_row(score.total);
    return out;
}

std::string delta_report_csv(const std::vector<DeltaRow>& rows) {
    std::string out = "recording_id,der_a,der_b,delta\n";
    char buf[128];
    for (const auto& r : rows) {
        std::snprintf(buf, sizeof buf, ",%.6f,%.6f,%.6f\n", r.der_a, r.der_b, r.delta);
        out += r.recording_id + buf;
    }
    return out;
}

}  // namespace sdtk
