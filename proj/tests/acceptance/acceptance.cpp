#include "oracles.hpp"
#include "sdtk/commands.hpp"
#include "sdtk/der.hpp"
#include "sdtk/fixtures.hpp"
#include "sdtk/pruning.hpp"
#include "sdtk/smoothing.hpp"
#include "sdtk/spectral.hpp"
#include "sdtk/stats.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace sdtk;

namespace {

struct Check {
    bool ok = true;
    std::ostringstream detail;

    void expect(bool cond, const std::string& what) {
        if (!cond && ok) detail << what;
        ok = ok && cond;
    }
};

using Criterion = std::function<void(Check&)>;

void der_oracle(Check& c) {
    Rng rng(20240101);
    Millis worst = 0;
    for (int trial = 0; trial < 200; ++trial) {
        auto ref = oracle::random_timeline(rng, "f", 10, 4);
        auto hyp = oracle::random_timeline(rng, "f", 10, 4);
        auto d = score_file(ref, hyp);
        auto b = oracle::brute_force_der(ref, hyp);
        for (auto diff : {d.ref_speech - b.ref_speech, d.missed - b.missed, d.false_alarm - b.false_alarm,
                          d.confusion - b.confusion})
            worst = std::max<Millis>(worst, std::llabs(diff));

        auto map = optimal_speaker_map(ref, hyp);
        auto rs = ref.speakers(), hs = hyp.speakers();
        std::vector<std::vector<long long>> w(hs.size(), std::vector<long long>(rs.size()));
        for (std::size_t h = 0; h < hs.size(); ++h)
            for (std::size_t r = 0; r < rs.size(); ++r)
                w[h][r] = speaker_intervals(hyp, hs[h]).intersect(speaker_intervals(ref, rs[r])).total_ms();
        long long mapped = 0;
        std::set<std::string> targets;
        for (auto& [h, r] : map) {
            mapped += speaker_intervals(hyp, h).intersect(speaker_intervals(ref, r)).total_ms();
            c.expect(targets.insert(r).second, "mapping not one-to-one");
        }
        c.expect(mapped == oracle::best_assignment_weight(w), "speaker map below exhaustive optimum");
    }
    for (int trial = 0; trial < 500; ++trial) {
        const std::size_t rows = 1 + rng.index(5), cols = 1 + rng.index(5);
        std::vector<std::vector<Millis>> w(rows, std::vector<Millis>(cols));
        for (auto& row : w)
            for (auto& x : row) x = static_cast<Millis>(rng.index(10000));
        auto a = optimal_assignment(w);
        long long total = 0;
        for (std::size_t i = 0; i < rows; ++i)
            if (a[i] >= 0) total += w[i][static_cast<std::size_t>(a[i])];
        c.expect(total == oracle::best_assignment_weight(w), "assignment below exhaustive optimum");
    }
    c.expect(worst <= 2, "component error " + std::to_string(worst) + " ms");
    c.detail << "max component error " << worst << " ms over 200 pairs";
}

void clustering_recovery(Check& c) {
    int runs = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EmbeddingFixtureSpec spec;
        spec.seed = seed;
        spec.recording_id = "fx" + std::to_string(seed);
        auto fx = gen_embeddings(spec);
        EmbeddingMap emb{{spec.recording_id, fx.set}};
        TimelineMap ref = parse_rttm(serialize_rttm(std::vector<Timeline>{fx.reference}));
        for (auto m : kAllMethods) {
            ClusterConfig cfg;
            cfg.method = m;
            if (m == Method::ahc) cfg.target_k = 2;
            cfg.seed = seed;
            auto a = cluster_embeddings(fx.set, cfg);
            c.expect(oracle::best_permutation_accuracy(fx.labels, a.labels) == 1.0,
                     std::string(to_string(m)) + " misclustered seed " + std::to_string(seed));
            auto hyp = parse_rttm(serialize_rttm(run_cluster(parse_embeddings(serialize_embeddings(emb)), cfg)));
            auto score = score_corpus(ref, hyp);
            c.expect(score.total.errors() == 0 && score.total.der() == 0.0,
                     std::string(to_string(m)) + " nonzero DER seed " + std::to_string(seed));
            ++runs;
        }
    }
    c.detail << runs << " method/seed runs at 100% accuracy and DER 0";
}

std::vector<double> off_diagonal_row(const Eigen::MatrixXd& a, Eigen::Index i) {
    std::vector<double> row;
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        if (j != i) row.push_back(a(i, j));
    return row;
}

void pruning_oracles(Check& c) {
    Rng rng(77);
    int compared = 0;
    for (int trial = 0; trial < 50; ++trial) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.index(11));
        auto m = oracle::random_affinity(rng, n);
        AffinityMatrix a(m);
        const std::size_t k = 1 + rng.index(static_cast<std::size_t>(n));
        const double p = rng.uniform(0.01, 1.0), tau = rng.uniform(0.05, 1.0);
        const std::size_t min_keep = 1 + rng.index(3);
        std::vector<std::size_t> fixed(static_cast<std::size_t>(n), k), topp, pna;
        for (Eigen::Index i = 0; i < n; ++i) {
            topp.push_back(std::max(static_cast<std::size_t>(std::ceil(p * double(n - 1) - 1e-9)), min_keep));
            auto row = off_diagonal_row(m, i);
            const std::size_t high = oracle::exhaustive_high_group(row);
            c.expect(two_means_1d(row).high_count == high, "two-group split differs from exhaustive search");
            pna.push_back(std::max(static_cast<std::size_t>(std::ceil(tau * double(high) - 1e-9)), min_keep));
        }
        for (bool use_max : {true, false}) {
            auto sym = use_max ? Symmetrize::max : Symmetrize::min;
            c.expect(prune_fixed_k(a, k, sym).values() == oracle::naive_prune(m, fixed, use_max), "fixed-k mismatch");
            c.expect(prune_top_p(a, p, min_keep, sym).values() == oracle::naive_prune(m, topp, use_max), "top-p mismatch");
            c.expect(prune_pna(a, tau, min_keep, sym).values() == oracle::naive_prune(m, pna, use_max), "pNA mismatch");
            compared += 3;
        }
    }
    c.detail << compared << " pruned matrices identical to the naive references";
}

void spectral_correctness(Check& c) {
    Rng rng(5150);
    for (int blocks = 2; blocks <= 4; ++blocks) {
        std::vector<std::size_t> truth;
        for (int b = 0; b < blocks; ++b) truth.insert(truth.end(), 3 + static_cast<std::size_t>(b), static_cast<std::size_t>(b));
        const auto n = static_cast<Eigen::Index>(truth.size());
        Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j)
                if (truth[static_cast<std::size_t>(i)] == truth[static_cast<std::size_t>(j)]) m(i, j) = m(j, i) = rng.uniform(0.3, 1.0);
        AffinityMatrix a(m);
        auto l = normalized_laplacian(a);
        auto ev = symmetric_spectrum(l).values;
        std::vector<double> values(ev.data(), ev.data() + ev.size());
        int zeros = 0;
        for (double v : values) zeros += std::abs(v) <= 1e-8;
        c.expect(zeros == blocks, "zero eigenvalue multiplicity " + std::to_string(zeros) + " for " + std::to_string(blocks) + " blocks");
        auto jac = oracle::jacobi_eigenvalues(l);
        for (std::size_t i = 0; i < jac.size(); ++i) c.expect(std::abs(jac[i] - values[i]) <= 1e-8, "eigenvalues differ from Jacobi");
        c.expect(estimate_num_speakers(values, std::min<std::size_t>(8, values.size() - 1)) == static_cast<std::size_t>(blocks), "eigengap estimate wrong");
        SpectralConfig fixed;
        fixed.num_speakers = static_cast<std::size_t>(blocks);
        c.expect(spectral_cluster(a, fixed).labels == truth, "blocks not recovered with fixed K");
        SpectralConfig est;
        est.num_speakers.reset();
        c.expect(spectral_cluster(a, est).labels == truth, "blocks not recovered with estimated K");
    }
    double worst = 0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.index(60));
        auto l = normalized_laplacian(AffinityMatrix(oracle::random_affinity(rng, n)));
        auto sp = symmetric_spectrum(l);
        for (Eigen::Index i = 0; i < n; ++i) {
            const double r = (l * sp.vectors.col(i) - sp.values(i) * sp.vectors.col(i)).norm();
            worst = std::max(worst, r / double(n));
        }
    }
    c.expect(worst <= 1e-6, "eigenpair residual too large");
    c.detail << "block spectra exact, max residual/n " << worst;
}

void median_filter_windows(Check& c) {
    // Alternating speech/silence with blips and gaps of 1..14 frames, each inside 40 frames of context.
    std::vector<std::uint8_t> row;
    std::vector<std::pair<std::size_t, std::size_t>> events;
    for (std::size_t len = 1; len <= 14; ++len) {
        for (std::uint8_t base : {std::uint8_t{1}, std::uint8_t{0}}) {
            row.insert(row.end(), 40, base);
            events.push_back({row.size(), len});
            row.insert(row.end(), len, static_cast<std::uint8_t>(1 - base));
            row.insert(row.end(), 40, base);
        }
    }
    FrameActivity fa{"frag", 10, {"a"}, {row}};
    auto w11 = median_filter(fa, {11}).activity[0];
    auto w29 = median_filter(fa, {29}).activity[0];
    std::size_t removed_by_29 = 0, kept_by_11 = 0, removed_only_by_29 = 0;
    for (auto [start, len] : events) {
        const std::uint8_t base = row[start - 1];
        bool gone29 = true, kept11 = true;
        for (std::size_t t = start; t < start + len; ++t) {
            gone29 = gone29 && w29[t] == base;
            kept11 = kept11 && w11[t] != base;
        }
        removed_by_29 += gone29;
        kept_by_11 += kept11;
        removed_only_by_29 += gone29 && kept11;
        c.expect(kept11 == (len >= 6), "window 11 behaviour wrong for length " + std::to_string(len));
    }
    c.expect(removed_by_29 == events.size(), "window 29 left a short fluctuation");
    c.expect(removed_only_by_29 == 18, "expected 18 fluctuations (6..14 frames) kept by 11 and removed by 29");
    c.expect(flip_count(w11) <= flip_count(row) && flip_count(w29) <= flip_count(w11), "flip count increased");
    c.expect(median_filter(fa, {1}) == fa, "window 1 is not the identity");
    Rng rng(9);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::uint8_t> r(200);
        for (auto& x : r) x = rng.uniform() < 0.5;
        FrameActivity f{"r", 10, {"a"}, {r}};
        for (std::size_t w : {11u, 29u})
            c.expect(flip_count(median_filter(f, {w}).activity[0]) <= flip_count(r), "flip count increased on random row");
        c.expect(median_filter(f, {1}) == f, "window 1 is not the identity");
    }
    c.detail << "flips " << flip_count(row) << " -> " << flip_count(w11) << " (w11) -> " << flip_count(w29)
             << " (w29); " << removed_only_by_29 << " fluctuations removed only by 29";
}

void stats_round_trip(Check& c) {
    TimelineFixtureSpec ts;
    auto tl = gen_timeline(ts);
    auto f = timeline_features(tl, ts.duration);
    auto rel = [](double got, double want) { return std::abs(got - want) / want; };
    c.expect(rel(f.sp, 88.14) <= 0.10 && rel(f.ovp, 4.08) <= 0.10 && rel(f.stm, 16.0) <= 0.10, "timeline targets missed");

    Timeline two{"a", {}};
    two.turns = {{"a", 0.5, 4.0, "A"}, {"a", 5.0, 4.5, "B"}};
    two.normalize();
    AudioFixtureSpec as;
    as.regions = regions_from_timeline(two, 120, 210);
    as.resonances = {{500, 80}, {1500, 80}, {2500, 80}};
    as.snr_db = 30;
    auto adp = audio_features(gen_audio(as), two).adp;
    c.expect(adp && std::abs(*adp - 90) <= 4, "ADP outside 90 +/- 4");

    Timeline gaps{"b", {}};
    gaps.turns = {{"b", 1.0, 3.0, "A"}, {"b", 5.0, 3.0, "B"}};
    gaps.normalize();
    AudioFixtureSpec ns;
    ns.regions = regions_from_timeline(gaps, 120, 210);
    ns.resonances = as.resonances;
    ns.snr_db = 20;
    auto snr = audio_features(gen_audio(ns), gaps).snr;
    c.expect(snr && std::abs(*snr - 20) <= 1.5, "SNR outside 20 +/- 1.5 dB");

    std::vector<double> v{0, 10};
    const double hw = summarize_values("x", v).half_width;
    c.expect(std::abs(hw - 9.80) <= 0.01, "half-width not 9.80");
    char buf[200];
    std::snprintf(buf, sizeof buf, "sp %.2f ovp %.2f stm %.2f adp %.2f snr %.2f hw %.3f", f.sp, f.ovp, f.stm,
                  adp.value_or(-1), snr.value_or(-1), hw);
    c.detail << buf;
}

void format_fidelity(Check& c) {
    Rng rng(1000);
    std::vector<Timeline> tls;
    for (int r = 0; r < 10; ++r) {
        Timeline tl{"rec" + std::to_string(r), {}};
        for (int i = 0; i < 100; ++i) {
            const Millis on = static_cast<Millis>(rng.index(3600000));
            const Millis dur = 1 + static_cast<Millis>(rng.index(20000));
            tl.turns.push_back({tl.recording_id, to_seconds(on), to_seconds(dur), "spk" + std::to_string(rng.index(5))});
        }
        tl.normalize();
        tls.push_back(tl);
    }
    const std::string text = serialize_rttm(tls);
    c.expect(std::count(text.begin(), text.end(), '\n') == 1000, "expected 1000 lines");
    auto parsed = parse_rttm(text);
    c.expect(serialize_rttm(parsed) == text, "RTTM re-serialization differs");
    for (const auto& tl : tls) {
        const auto& back = parsed.at(tl.recording_id);
        c.expect(back.turns.size() == tl.turns.size(), "turn count changed");
        for (std::size_t i = 0; i < tl.turns.size() && i < back.turns.size(); ++i)
            c.expect(back.turns[i].onset_ms() == tl.turns[i].onset_ms() && back.turns[i].offset_ms() == tl.turns[i].offset_ms() &&
                         back.turns[i].speaker == tl.turns[i].speaker,
                     "turn changed at 1 ms resolution");
    }

    EmbeddingMap emb;
    std::size_t values = 0;
    for (int r = 0; r < 3; ++r) {
        EmbeddingSet s{"e" + std::to_string(r), 32, {}};
        for (int i = 0; i < 50; ++i) {
            std::vector<double> v(32);
            for (auto& x : v) {
                std::uint64_t bits = rng.next();
                std::memcpy(&x, &bits, sizeof x);
                if (!std::isfinite(x) || x == 0.0) x = rng.normal();
            }
            s.segments.push_back({i * 1.5 + rng.uniform(), i * 1.5 + 1.0 + rng.uniform(), v});
            values += v.size();
        }
        emb[s.recording_id] = s;
    }
    auto back = parse_embeddings(serialize_embeddings(emb));
    for (auto& [id, s] : emb) {
        const auto& b = back.at(id);
        for (std::size_t i = 0; i < s.size(); ++i)
            c.expect(std::memcmp(b.segments[i].vector.data(), s.segments[i].vector.data(), 32 * sizeof(double)) == 0 &&
                         b.segments[i].onset == s.segments[i].onset && b.segments[i].offset == s.segments[i].offset,
                     "embedding value changed");
    }
    c.detail << "1000 RTTM lines and " << values << " embedding values round-tripped";
}

std::string grid_outputs(std::size_t jobs) {
    EmbeddingMap emb;
    TimelineMap refs;
    for (std::uint64_t seed = 0; seed < 3; ++seed) {
        EmbeddingFixtureSpec spec;
        spec.seed = 100 + seed;
        spec.recording_id = "grid" + std::to_string(seed);
        spec.within_cosine = 0.6;
        spec.across_cosine = 0.3;
        auto fx = gen_embeddings(spec);
        emb[spec.recording_id] = fx.set;
        refs[spec.recording_id] = fx.reference;
    }
    std::string out;
    for (auto m : kAllMethods) {
        for (std::size_t window : {11u, 29u}) {
            ClusterConfig cfg;
            cfg.method = m;
            if (m == Method::ahc) cfg.target_k = 2;
            cfg.seed = 12345;
            auto hyp = run_cluster(emb, cfg, SmoothingOptions{window, 0.01}, jobs);
            out += serialize_rttm(hyp);
            out += der_report_csv(score_corpus(refs, hyp, {}, jobs));
        }
    }
    return out;
}

void determinism(Check& c) {
    const auto a = grid_outputs(1);
    const auto b = grid_outputs(1);
    const auto d = grid_outputs(4);
    c.expect(a == b, "repeated runs differ");
    c.expect(a == d, "thread count changes output");
    c.detail << "12 configurations, " << a.size() << " bytes identical across 3 runs";
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, Criterion>> criteria{
        {"1 DER oracle equivalence", der_oracle},
        {"2 clustering recovery", clustering_recovery},
        {"3 pruning oracles", pruning_oracles},
        {"4 spectral correctness", spectral_correctness},
        {"5 median filter windows", median_filter_windows},
        {"6 stats round trip", stats_round_trip},
        {"7 format fidelity", format_fidelity},
        {"8 determinism", determinism},
    };
    const std::vector<double> budgets{30, 60, 0, 0, 0, 0, 0, 0};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Check c;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].second(c);
        } catch (const std::exception& e) {
            c.expect(false, std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (budgets[i] > 0) c.expect(secs < budgets[i], "over time budget");
        failures += !c.ok;
        std::printf("%s  %-28s %7.2fs  %s\n", c.ok ? "PASS" : "FAIL", criteria[i].first.c_str(), secs, c.detail.str().c_str());
    }
    std::printf("%d/%zu criteria passed\n", int(criteria.size()) - failures, criteria.size());
    return failures == 0 ? 0 : 1;
}
