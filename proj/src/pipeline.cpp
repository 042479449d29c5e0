#include "sdtk/pipeline.hpp"

#include "sdtk/error.hpp"
#include "sdtk/spectral.hpp"

#include <cstdio>

namespace sdtk {

std::string_view to_string(Method m) {
    switch (m) {
        case Method::ahc: return "ahc";
        case Method::kmeans: return "kmeans";
        case Method::sc_fixed: return "sc-fixed";
        case Method::sc_adapt: return "sc-adapt";
        case Method::sc_pna: return "sc-pna";
        case Method::sc_mk: return "sc-mk";
    }
    return "?";
}

std::optional<Method> method_from_string(std::string_view name) {
    for (Method m : kAllMethods)
        if (to_string(m) == name) return m;
    return std::nullopt;
}

void ClusterConfig::validate() const {
    const bool uses_k = method == Method::sc_fixed || method == Method::sc_mk;
    if (k && !uses_k) throw ValidationError("k applies only to sc-fixed and sc-mk");
    if (p && method != Method::sc_adapt) throw ValidationError("p applies only to sc-adapt");
    if (tau && method != Method::sc_pna) throw ValidationError("tau applies only to sc-pna");
    if ((threshold || target_k) && method != Method::ahc)
        throw ValidationError("threshold and target_k apply only to ahc");
    if (threshold && target_k) throw ValidationError("ahc takes either a threshold or a target_k, not both");
    if (k && *k < 1) throw ValidationError("k must be positive");
    if (p && !(*p > 0.0 && *p <= 1.0)) throw ValidationError("p must be in (0, 1]");
    if (tau && !(*tau > 0.0 && *tau <= 1.0)) throw ValidationError("tau must be in (0, 1]");
    if (min_keep < 1) throw ValidationError("min_keep must be positive");
    if (num_speakers && *num_speakers < 1) throw ValidationError("num_speakers must be positive");
    if (restarts < 1) throw ValidationError("restarts must be positive");
    if (method == Method::sc_mk) {
        if (kernels.empty()) throw ValidationError("sc-mk needs at least one kernel");
        if (!kernel_weights.empty() && kernel_weights.size() != kernels.size())
            throw ValidationError("sc-mk kernel weight count differs from kernel count");
    }
    if (method == Method::kmeans && !num_speakers) throw ValidationError("kmeans needs num_speakers");
    if (method == Method::ahc && !threshold && !target_k && !num_speakers)
        throw ValidationError("ahc needs a threshold when the speaker count is not fixed");
}

AffinityMatrix method_affinity(const EmbeddingSet& normalized, const ClusterConfig& cfg) {
    if (cfg.method != Method::sc_mk) return cosine_affinity(normalized);
    std::vector<AffinityMatrix> kernels;
    kernels.reserve(cfg.kernels.size());
    for (KernelId id : cfg.kernels) kernels.push_back(kernel_affinity(normalized, id));
    return fuse_kernels(kernels, cfg.kernel_weights);
}

PruningSpec method_pruning(const ClusterConfig& cfg) {
    PruningSpec spec;
    spec.min_keep = cfg.min_keep;
    spec.symmetrize = cfg.symmetrize;
    switch (cfg.method) {
        case Method::sc_fixed:
            spec.strategy = PruningStrategy::fixed_k;
            spec.k = cfg.k.value_or(10);
            break;
        case Method::sc_mk:
            spec.strategy = PruningStrategy::fixed_k;
            spec.k = cfg.k.value_or(15);
            break;
        case Method::sc_adapt:
            spec.strategy = PruningStrategy::top_p;
            spec.p = cfg.p.value_or(0.01);
            break;
        case Method::sc_pna:
            spec.strategy = PruningStrategy::pna;
            spec.tau = cfg.tau.value_or(0.20);
            break;
        default: throw ValidationError("method '" + std::string(to_string(cfg.method)) + "' does not prune a graph");
    }
    return spec;
}

ClusterAssignment cluster_embeddings(const EmbeddingSet& set, const ClusterConfig& cfg) {
    cfg.validate();
    set.validate();
    const EmbeddingSet normalized = unit_normalize(set);
    const std::size_t n = normalized.size();
    if (cfg.num_speakers && n < *cfg.num_speakers && !(cfg.method == Method::ahc && (cfg.threshold || cfg.target_k)))
        throw ValidationError(set.recording_id + ": " + std::to_string(n) + " segment(s) cannot form " +
                              std::to_string(*cfg.num_speakers) + " clusters");

    switch (cfg.method) {
        case Method::ahc: {
            AhcConfig ahc;
            ahc.linkage = cfg.linkage;
            if (cfg.threshold) ahc.threshold = cfg.threshold;
            else ahc.target_k = cfg.target_k ? cfg.target_k : cfg.num_speakers;
            return ahc_cluster(normalized, ahc);
        }
        case Method::kmeans: return kmeans_cluster(normalized, *cfg.num_speakers, cfg.restarts, cfg.seed);
        default: break;
    }

    if (n < 2) return {{0}, 1};
    const AffinityMatrix affinity = method_affinity(normalized, cfg);
    AffinityMatrix graph = prune(affinity, method_pruning(cfg));
    if (cfg.bridge) graph = bridge_components(graph, affinity, cfg.num_speakers.value_or(1));
    SpectralConfig spectral;
    spectral.num_speakers = cfg.num_speakers;
    spectral.max_speakers = std::max(cfg.max_speakers, cfg.num_speakers.value_or(1));
    spectral.kmeans_restarts = cfg.restarts;
    spectral.seed = cfg.seed;
    return spectral_cluster(graph, spectral);
}

std::string cluster_label(std::size_t k) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "spk%02zu", k);
    return buf;
}

Timeline assignment_to_timeline(const EmbeddingSet& set, const ClusterAssignment& assignment) {
    if (assignment.labels.size() != set.size()) throw ValidationError("assignment length differs from segment count");
    Timeline tl;
    tl.recording_id = set.recording_id;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& seg = set.segments[i];
        tl.turns.push_back({set.recording_id, seg.onset, seg.offset - seg.onset, cluster_label(assignment.labels[i])});
    }
    tl.normalize();
    return tl;
}

}  // namespace sdtk
