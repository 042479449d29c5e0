#pragma once

#include "sdtk/rttm.hpp"

#include <map>
#include <set>
#include <string>
#include <vector>

namespace sdtk {

struct ScoringConfig {
    /// Seconds excluded on both sides of every reference turn boundary.
    double collar = 0.0;
    /// When false, regions with two or more active reference speakers are not scored.
    bool score_overlap = true;

    void validate() const;
};

/// Error components in milliseconds of speaker time (overlap counted with multiplicity).
struct DerBreakdown {
    std::string recording_id;
    Millis ref_speech = 0;
    Millis missed = 0;
    Millis false_alarm = 0;
    Millis confusion = 0;

    Millis errors() const { return missed + false_alarm + confusion; }
    /// (missed + false_alarm + confusion) / ref_speech; 0 when nothing is wrong and there is no
    /// reference speech, +inf when there are errors but no reference speech.
    double der() const;

    friend bool operator==(const DerBreakdown&, const DerBreakdown&) = default;
};

/// Hypothesis speaker -> reference speaker.
using SpeakerMap = std::map<std::string, std::string>;

/// Maximum-weight one-to-one assignment of rows to columns. weights[r][c] >= 0.
/// Returns the column per row or -1 when the row is unassigned.
std::vector<int> optimal_assignment(const std::vector<std::vector<Millis>>& weights);

/// Maps hypothesis speakers to reference speakers maximizing total overlapped time. Pairs with
/// no overlap are left unmapped.
SpeakerMap optimal_speaker_map(const Timeline& ref, const Timeline& hyp);

DerBreakdown score_file(const Timeline& ref, const Timeline& hyp, const ScoringConfig& cfg = {});

struct CorpusScore {
    std::vector<DerBreakdown> files;  // sorted by recording id
    DerBreakdown total;               // recording_id "TOTAL"
    std::vector<std::string> warnings;
};

/// Scores every reference recording. A recording without a hypothesis scores as fully missed
/// and produces a warning. `jobs` bounds the number of worker threads.
CorpusScore score_corpus(const TimelineMap& refs, const TimelineMap& hyps, const ScoringConfig& cfg = {},
                         std::size_t jobs = 1);

struct DeltaRow {
    std::string recording_id;
    double der_a = 0.0;
    double der_b = 0.0;
    double delta = 0.0;
};

/// delta = der_a - der_b, sorted descending by delta (stable with respect to `a`'s order).
/// Throws ValidationError when the two sets cover different recordings.
std::vector<DeltaRow> delta_report(const std::vector<DerBreakdown>& a, const std::vector<DerBreakdown>& b,
                                   const std::set<std::string>& exclude = {});

/// "recording_id,ref_speech,missed,false_alarm,confusion,der" rows plus a TOTAL row.
std::string der_report_csv(const CorpusScore& score, bool per_file = true);
/// "recording_id,der_a,der_b,delta".
std::string delta_report_csv(const std::vector<DeltaRow>& rows);

}  // namespace sdtk
