#include "sdtk/commands.hpp"

#include "sdtk/error.hpp"
#include "sdtk/parallel.hpp"
#include "sdtk/smoothing.hpp"
#include "sdtk/wav.hpp"

#include <algorithm>
#include <filesystem>

namespace sdtk {

namespace {

template <typename Map>
std::vector<const typename Map::mapped_type*> values_of(const Map& m) {
    std::vector<const typename Map::mapped_type*> out;
    out.reserve(m.size());
    for (const auto& [id, v] : m) out.push_back(&v);
    return out;
}

}  // namespace

TimelineMap run_cluster(const EmbeddingMap& embeddings, const ClusterConfig& cfg,
                        const std::optional<SmoothingOptions>& smoothing, std::size_t jobs) {
    cfg.validate();
    const auto sets = values_of(embeddings);
    std::vector<Timeline> results(sets.size());
    parallel_for(sets.size(), jobs, [&](std::size_t i) {
        const EmbeddingSet& set = *sets[i];
        try {
            Timeline tl = assignment_to_timeline(set, cluster_embeddings(set, cfg));
            if (smoothing) tl = smooth_timeline(tl, smoothing->window, smoothing->hop);
            results[i] = std::move(tl);
        } catch (const ValidationError& e) {
            throw ValidationError(set.recording_id + ": " + e.what());
        }
    });
    TimelineMap out;
    for (std::size_t i = 0; i < sets.size(); ++i) {
        results[i].recording_id = sets[i]->recording_id;
        out[sets[i]->recording_id] = std::move(results[i]);
    }
    return out;
}

TimelineMap run_smooth(const TimelineMap& timelines, const SmoothingOptions& smoothing, std::size_t jobs) {
    MedianFilterSpec{smoothing.window}.validate();
    const auto list = values_of(timelines);
    std::vector<Timeline> results(list.size());
    parallel_for(list.size(), jobs,
                 [&](std::size_t i) { results[i] = smooth_timeline(*list[i], smoothing.window, smoothing.hop); });
    TimelineMap out;
    for (std::size_t i = 0; i < list.size(); ++i) {
        results[i].recording_id = list[i]->recording_id;
        out[list[i]->recording_id] = std::move(results[i]);
    }
    return out;
}

std::vector<DeltaRow> run_compare(const TimelineMap& refs, const TimelineMap& hyp_a, const TimelineMap& hyp_b,
                                  const ScoringConfig& cfg, const std::set<std::string>& exclude, std::size_t jobs) {
    std::string missing;
    for (const auto& [id, ref] : refs) {
        if (!hyp_a.count(id)) missing += " A:" + id;
        if (!hyp_b.count(id)) missing += " B:" + id;
    }
    if (!missing.empty()) throw ValidationError("hypotheses do not cover the reference set; missing" + missing);
    const CorpusScore a = score_corpus(refs, hyp_a, cfg, jobs);
    const CorpusScore b = score_corpus(refs, hyp_b, cfg, jobs);
    return delta_report(a.files, b.files, exclude);
}

StatsResult run_stats(const TimelineMap& timelines, const StatsOptions& options, std::size_t jobs) {
    if (timelines.empty()) throw ValidationError("no RTTM recordings to analyze");
    const auto list = values_of(timelines);
    StatsResult out;
    out.features.resize(list.size());
    std::vector<std::vector<std::string>> warnings(list.size());
    parallel_for(list.size(), jobs, [&](std::size_t i) {
        const Timeline& tl = *list[i];
        RecordingFeatures& f = out.features[i];
        f.recording_id = tl.recording_id;
        std::optional<Audio> audio;
        if (options.audio_dir) {
            const auto path = std::filesystem::path(*options.audio_dir) / (tl.recording_id + ".wav");
            if (std::filesystem::exists(path)) {
                try {
                    audio = read_wav(path.string());
                } catch (const Error& e) {
                    warnings[i].push_back(tl.recording_id + ": unreadable audio (" + e.what() + ")");
                }
            } else {
                warnings[i].push_back(tl.recording_id + ": no audio file " + path.string());
            }
        }
        f.duration = std::max(audio ? audio->duration() : 0.0, tl.extent());
        if (!(f.duration > 0.0)) {
            warnings[i].push_back(tl.recording_id + ": zero duration; skipped");
            return;
        }
        const TimelineFeatures tf = timeline_features(tl, f.duration, options.stm_mode);
        f.sp = tf.sp;
        f.ovp = tf.ovp;
        f.stm = tf.stm;
        if (audio) {
            AudioFeatures af = audio_features(*audio, tl);
            f.adp = af.adp;
            f.adf3 = af.adf3;
            f.snr = af.snr;
            for (auto& w : af.warnings) warnings[i].push_back(tl.recording_id + ": " + w);
        }
    });
    for (auto& w : warnings)
        for (auto& line : w) out.warnings.push_back(std::move(line));
    std::erase_if(out.features, [](const RecordingFeatures& f) { return !(f.duration > 0.0); });
    return out;
}

}  // namespace sdtk
