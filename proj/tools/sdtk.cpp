// Command-line front end: cluster, smooth, score, compare, stats (and a hidden fixtures generator).

#include "sdtk/commands.hpp"
#include "sdtk/error.hpp"
#include "sdtk/fixtures.hpp"
#include "sdtk/smoothing.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

void emit(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw sdtk::Error("cannot write '" + path + "'");
    out << data;
}

void warn(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

sdtk::TimelineMap read_timelines(const std::string& path, const char* role) {
    if (!std::filesystem::exists(path)) throw sdtk::Error(std::string(role) + " '" + path + "' does not exist");
    return sdtk::read_rttm_path(path);
}

struct Common {
    std::uint64_t seed = 0;
    std::size_t jobs = 1;
};

void add_common(CLI::App* sub, Common& common) {
    sub->set_config("--config", "", "Key-value file mirroring the flags; flags on the command line win");
    sub->add_option("--seed", common.seed, "Random seed")->capture_default_str();
    sub->add_option("--jobs", common.jobs, "Recordings processed in parallel")->check(CLI::PositiveNumber)
        ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Speaker diarization back end: clustering, smoothing, DER scoring and corpus statistics"};
    app.require_subcommand(1);

    // cluster
    Common cluster_common;
    std::string emb_path, cluster_out, method_name = "ahc", sym_name = "max", linkage_name = "average";
    std::size_t k = 0, min_keep = 2, target_k = 0, num_speakers = 2, max_speakers = 8, restarts = 10, window = 0;
    double p = 0.0, tau = 0.0, threshold = 0.0, hop = 0.01;
    bool estimate = false, no_bridge = false;
    std::vector<std::string> kernel_names;
    std::vector<double> kernel_weights;
    auto* cluster = app.add_subcommand("cluster", "Cluster segment embeddings into a hypothesis RTTM");
    add_common(cluster, cluster_common);
    cluster->add_option("-i,--embeddings", emb_path, "Embeddings CSV")->required();
    cluster->add_option("-o,--output", cluster_out, "Output RTTM (stdout when omitted)");
    cluster->add_option("--method", method_name, "ahc, kmeans, sc-fixed, sc-adapt, sc-pna or sc-mk")
        ->check(CLI::IsMember({"ahc", "kmeans", "sc-fixed", "sc-adapt", "sc-pna", "sc-mk"}))
        ->capture_default_str();
    auto* k_opt = cluster->add_option("--k", k, "Neighbours per node (sc-fixed 10, sc-mk 15)");
    auto* p_opt = cluster->add_option("--p", p, "Retained neighbour fraction for sc-adapt (0.01)");
    auto* tau_opt = cluster->add_option("--tau", tau, "Retained same-speaker fraction for sc-pna (0.20)");
    cluster->add_option("--min-keep", min_keep, "Neighbour floor for sc-adapt and sc-pna")->capture_default_str();
    cluster->add_option("--symmetrize", sym_name, "max (union) or min (mutual)")
        ->check(CLI::IsMember({"max", "min"}))->capture_default_str();
    cluster->add_option("--kernels", kernel_names, "sc-mk kernels (default: all six)")->delimiter(',');
    cluster->add_option("--kernel-weights", kernel_weights, "sc-mk kernel weights (default: uniform)")->delimiter(',');
    cluster->add_option("--linkage", linkage_name, "AHC linkage")
        ->check(CLI::IsMember({"average", "complete", "single"}))->capture_default_str();
    auto* threshold_opt = cluster->add_option("--threshold", threshold, "AHC cosine-distance stop threshold");
    auto* target_opt = cluster->add_option("--target-k", target_k, "AHC target cluster count");
    cluster->add_option("--num-speakers", num_speakers, "Fixed speaker count")->check(CLI::PositiveNumber)
        ->capture_default_str();
    cluster->add_flag("--estimate-speakers", estimate, "Estimate the speaker count (eigengap / AHC threshold)");
    cluster->add_option("--max-speakers", max_speakers, "Upper bound for the eigengap estimate")->capture_default_str();
    cluster->add_option("--restarts", restarts, "k-means restarts")->check(CLI::PositiveNumber)->capture_default_str();
    cluster->add_flag("--no-bridge", no_bridge, "Do not reconnect over-fragmented pruned graphs");
    auto* window_opt = cluster->add_option("--window", window, "Median-filter the output with this odd window");
    cluster->add_option("--hop", hop, "Frame hop in seconds for smoothing")->capture_default_str();

    // smooth
    Common smooth_common;
    std::string smooth_in, smooth_out;
    std::size_t smooth_window = 11;
    double smooth_hop = 0.01;
    auto* smooth = app.add_subcommand("smooth", "Median-filter an RTTM on a frame grid");
    add_common(smooth, smooth_common);
    smooth->add_option("-i,--input", smooth_in, "Input RTTM file or directory")->required();
    smooth->add_option("-o,--output", smooth_out, "Output RTTM (stdout when omitted)");
    smooth->add_option("--window", smooth_window, "Odd window length in frames")->capture_default_str();
    smooth->add_option("--hop", smooth_hop, "Frame hop in seconds")->capture_default_str();

    // score
    Common score_common;
    std::string ref_path, hyp_path;
    double collar = 0.0;
    bool no_overlap = false, per_file = true;
    auto* score = app.add_subcommand("score", "DER report (CSV on stdout)");
    add_common(score, score_common);
    score->add_option("--ref", ref_path, "Reference RTTM file or directory")->required();
    score->add_option("--hyp", hyp_path, "Hypothesis RTTM file or directory")->required();
    score->add_option("--collar", collar, "Collar in seconds around reference boundaries")->capture_default_str();
    score->add_flag("--no-overlap", no_overlap, "Exclude overlapped reference regions from scoring");
    score->add_flag("--per-file,!--no-per-file", per_file, "Emit per-file rows before TOTAL");

    // compare
    Common compare_common;
    std::string cmp_ref, cmp_a, cmp_b;
    std::vector<std::string> exclude;
    double cmp_collar = 0.0;
    bool cmp_no_overlap = false;
    auto* compare = app.add_subcommand("compare", "Per-file DER difference between two systems (CSV on stdout)");
    add_common(compare, compare_common);
    compare->add_option("--ref", cmp_ref, "Reference RTTM file or directory")->required();
    compare->add_option("--hyp-a", cmp_a, "System A hypothesis")->required();
    compare->add_option("--hyp-b", cmp_b, "System B hypothesis")->required();
    compare->add_option("--exclude", exclude, "Recording ids left out of the table")->delimiter(',');
    compare->add_option("--collar", cmp_collar, "Collar in seconds")->capture_default_str();
    compare->add_flag("--no-overlap", cmp_no_overlap, "Exclude overlapped reference regions");

    // stats
    Common stats_common;
    std::string stats_rttm, audio_dir, features_out, summary_out, stm_mode = "changes", ci_name = "normal";
    auto* stats = app.add_subcommand("stats", "Per-recording SP/OVP/ADP/ADF3/SNR/STM and corpus summary");
    add_common(stats, stats_common);
    stats->add_option("--rttm", stats_rttm, "RTTM file or directory")->required();
    stats->add_option("--audio-dir", audio_dir, "Directory of <recording_id>.wav files");
    stats->add_option("-o,--output", features_out, "Features CSV (stdout when omitted)");
    stats->add_option("--summary", summary_out, "Summary CSV (appended to stdout after a blank line when omitted)");
    stats->add_option("--stm-mode", stm_mode, "changes (speaker change points) or turns")
        ->check(CLI::IsMember({"changes", "turns"}))->capture_default_str();
    stats->add_option("--ci", ci_name, "normal (1.96 SE) or t (Student t quantile)")
        ->check(CLI::IsMember({"normal", "t"}))->capture_default_str();

    // fixtures (hidden)
    Common fx_common;
    std::string fx_kind = "embeddings", fx_out, fx_ref_out, fx_rttm, fx_id;
    std::size_t fx_n = 40, fx_dim = 16;
    double fx_within = 0.9, fx_across = 0.1, fx_duration = 300.0, fx_sp = 88.14, fx_ovp = 4.08, fx_stm = 16.0;
    std::vector<double> fx_f0{120.0, 210.0}, fx_formants{500.0, 1500.0, 2500.0};
    double fx_snr = 20.0;
    auto* fixtures = app.add_subcommand("fixtures", "Regenerate synthetic test assets");
    fixtures->group("");
    add_common(fixtures, fx_common);
    fixtures->add_option("--kind", fx_kind)->check(CLI::IsMember({"embeddings", "timeline", "audio"}));
    fixtures->add_option("-o,--output", fx_out)->required();
    fixtures->add_option("--ref-output", fx_ref_out);
    fixtures->add_option("--rttm", fx_rttm);
    fixtures->add_option("--recording-id", fx_id);
    fixtures->add_option("--n", fx_n);
    fixtures->add_option("--dim", fx_dim);
    fixtures->add_option("--within", fx_within);
    fixtures->add_option("--across", fx_across);
    fixtures->add_option("--duration", fx_duration);
    fixtures->add_option("--sp", fx_sp);
    fixtures->add_option("--ovp", fx_ovp);
    fixtures->add_option("--stm", fx_stm);
    fixtures->add_option("--f0", fx_f0)->delimiter(',');
    fixtures->add_option("--formants", fx_formants)->delimiter(',');
    fixtures->add_option("--snr", fx_snr);

    CLI11_PARSE(app, argc, argv);

    try {
        if (cluster->parsed()) {
            sdtk::ClusterConfig cfg;
            cfg.method = *sdtk::method_from_string(method_name);
            if (k_opt->count()) cfg.k = k;
            if (p_opt->count()) cfg.p = p;
            if (tau_opt->count()) cfg.tau = tau;
            if (threshold_opt->count()) cfg.threshold = threshold;
            if (target_opt->count()) cfg.target_k = target_k;
            cfg.min_keep = min_keep;
            cfg.symmetrize = sym_name == "min" ? sdtk::Symmetrize::min : sdtk::Symmetrize::max;
            if (!kernel_names.empty()) {
                cfg.kernels.clear();
                for (const auto& name : kernel_names) {
                    auto id = sdtk::kernel_from_string(name);
                    if (!id) throw sdtk::ValidationError("unknown kernel '" + name + "'");
                    cfg.kernels.push_back(*id);
                }
            }
            cfg.kernel_weights = kernel_weights;
            cfg.linkage = *sdtk::linkage_from_string(linkage_name);
            cfg.num_speakers = estimate ? std::nullopt : std::optional<std::size_t>(num_speakers);
            cfg.max_speakers = max_speakers;
            cfg.restarts = restarts;
            cfg.seed = cluster_common.seed;
            cfg.bridge = !no_bridge;
            std::optional<sdtk::SmoothingOptions> smoothing;
            if (window_opt->count()) {
                if (window % 2 == 0) {
                    std::cerr << "error: --window must be odd\n";
                    return 2;
                }
                smoothing = sdtk::SmoothingOptions{window, hop};
            }
            auto result = sdtk::run_cluster(sdtk::read_embeddings_file(emb_path), cfg, smoothing, cluster_common.jobs);
            emit(cluster_out, sdtk::serialize_rttm(result));
        } else if (smooth->parsed()) {
            if (smooth_window % 2 == 0) {
                std::cerr << "error: --window must be odd\n";
                return 2;
            }
            auto result = sdtk::run_smooth(read_timelines(smooth_in, "input"), {smooth_window, smooth_hop},
                                           smooth_common.jobs);
            emit(smooth_out, sdtk::serialize_rttm(result));
        } else if (score->parsed()) {
            auto refs = read_timelines(ref_path, "reference");
            auto hyps = read_timelines(hyp_path, "hypothesis");
            auto result = sdtk::score_corpus(refs, hyps, {collar, !no_overlap}, score_common.jobs);
            warn(result.warnings);
            emit("", sdtk::der_report_csv(result, per_file));
        } else if (compare->parsed()) {
            auto rows = sdtk::run_compare(read_timelines(cmp_ref, "reference"), read_timelines(cmp_a, "hypothesis A"),
                                          read_timelines(cmp_b, "hypothesis B"), {cmp_collar, !cmp_no_overlap},
                                          {exclude.begin(), exclude.end()}, compare_common.jobs);
            emit("", sdtk::delta_report_csv(rows));
        } else if (stats->parsed()) {
            sdtk::StatsOptions options;
            if (!audio_dir.empty()) options.audio_dir = audio_dir;
            options.stm_mode = stm_mode == "turns" ? sdtk::StmMode::turns : sdtk::StmMode::change_points;
            auto result = sdtk::run_stats(read_timelines(stats_rttm, "RTTM input"), options, stats_common.jobs);
            warn(result.warnings);
            auto summary = sdtk::summarize(result.features,
                                           ci_name == "t" ? sdtk::CiMethod::student_t : sdtk::CiMethod::normal);
            const std::string features_text = sdtk::features_csv(result.features);
            const std::string summary_text = sdtk::summary_csv(summary);
            if (summary_out.empty() && (features_out.empty() || features_out == "-")) {
                emit("", features_text + "\n" + summary_text);
            } else {
                emit(features_out, features_text);
                emit(summary_out, summary_text);
            }
        } else if (fixtures->parsed()) {
            if (fx_kind == "embeddings") {
                sdtk::EmbeddingFixtureSpec spec;
                spec.seed = fx_common.seed;
                spec.n_segments = fx_n;
                spec.dim = fx_dim;
                spec.within_cosine = fx_within;
                spec.across_cosine = fx_across;
                if (!fx_id.empty()) spec.recording_id = fx_id;
                auto fx = sdtk::gen_embeddings(spec);
                emit(fx_out, sdtk::serialize_embeddings({{fx.set.recording_id, fx.set}}));
                if (!fx_ref_out.empty()) emit(fx_ref_out, sdtk::serialize_rttm(std::vector{fx.reference}));
            } else if (fx_kind == "timeline") {
                sdtk::TimelineFixtureSpec spec;
                spec.seed = fx_common.seed;
                spec.duration = fx_duration;
                spec.sp = fx_sp;
                spec.ovp = fx_ovp;
                spec.stm = fx_stm;
                if (!fx_id.empty()) spec.recording_id = fx_id;
                emit(fx_out, sdtk::serialize_rttm(std::vector{sdtk::gen_timeline(spec)}));
            } else {
                if (fx_rttm.empty()) throw sdtk::ValidationError("--kind audio needs --rttm");
                if (fx_f0.size() != 2) throw sdtk::ValidationError("--f0 takes two values");
                auto timelines = sdtk::read_rttm_file(fx_rttm);
                if (timelines.size() != 1) throw sdtk::ValidationError("--rttm must hold exactly one recording");
                const auto& tl = timelines.begin()->second;
                sdtk::AudioFixtureSpec spec;
                spec.seed = fx_common.seed;
                spec.duration = std::max(fx_duration, tl.extent());
                spec.regions = sdtk::regions_from_timeline(tl, fx_f0[0], fx_f0[1]);
                for (double f : fx_formants) spec.resonances.push_back({f, 80.0});
                spec.snr_db = fx_snr;
                sdtk::write_wav(fx_out, sdtk::gen_audio(spec));
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
