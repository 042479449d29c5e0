#include "sdtk/clustering.hpp"

#include "sdtk/error.hpp"
#include "sdtk/kmeans.hpp"

#include <algorithm>
#include <limits>

namespace sdtk {

std::optional<Linkage> linkage_from_string(std::string_view name) {
    if (name == "average") return Linkage::average;
    if (name == "complete") return Linkage::complete;
    if (name == "single") return Linkage::single;
    return std::nullopt;
}

std::string_view to_string(Linkage linkage) {
    switch (linkage) {
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
        case Linkage::single: return "single";
    }
    return "?";
}

void AhcConfig::validate() const {
    if (target_k.has_value() == threshold.has_value())
        throw ValidationError("AHC needs exactly one stop criterion (target_k or threshold)");
    if (target_k && *target_k < 1) throw ValidationError("AHC target_k must be positive");
}

ClusterAssignment ahc_cluster(const EmbeddingSet& set, const AhcConfig& cfg) {
    cfg.validate();
    const std::size_t n = set.size();
    if (n == 0) return {};
    if (cfg.target_k && *cfg.target_k > n)
        throw ValidationError("AHC target_k exceeds the number of segments");

    Eigen::MatrixXd x = set.matrix();
    Eigen::MatrixXd dist = Eigen::MatrixXd::Ones(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)) -
                           x * x.transpose();

    // Clusters are keyed by their smallest member index; merged clusters keep the smaller key.
    std::vector<std::size_t> size(n, 1);
    std::vector<bool> active(n, true);
    std::vector<std::size_t> owner(n);
    for (std::size_t i = 0; i < n; ++i) owner[i] = i;
    std::size_t clusters = n;

    auto d = [&](std::size_t i, std::size_t j) -> double& {
        return dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    };

    while (clusters > 1) {
        if (cfg.target_k && clusters <= *cfg.target_k) break;
        std::size_t bi = 0, bj = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (active[j] && d(i, j) < best) {
                    best = d(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }
        if (cfg.threshold && best > *cfg.threshold) break;

        // Lance-Williams update of the merged cluster bi against every other cluster.
        for (std::size_t m = 0; m < n; ++m) {
            if (!active[m] || m == bi || m == bj) continue;
            double merged = 0.0;
            switch (cfg.linkage) {
                case Linkage::average:
                    merged = (static_cast<double>(size[bi]) * d(bi, m) + static_cast<double>(size[bj]) * d(bj, m)) /
                             static_cast<double>(size[bi] + size[bj]);
                    break;
                case Linkage::complete: merged = std::max(d(bi, m), d(bj, m)); break;
                case Linkage::single: merged = std::min(d(bi, m), d(bj, m)); break;
            }
            d(bi, m) = merged;
            d(m, bi) = merged;
        }
        size[bi] += size[bj];
        active[bj] = false;
        for (auto& o : owner)
            if (o == bj) o = bi;
        --clusters;
    }
    return canonical_relabel(owner);
}

ClusterAssignment kmeans_cluster(const EmbeddingSet& set, std::size_t k, std::size_t restarts, std::uint64_t seed) {
    if (set.size() < k)
        throw ValidationError("k-means needs at least k segments (n=" + std::to_string(set.size()) +
                              ", k=" + std::to_string(k) + ")");
    return kmeans(set.matrix(), {.k = k, .restarts = restarts, .seed = seed}).assignment;
}

}  // namespace sdtk
