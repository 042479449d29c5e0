#pragma once

#include "sdtk/affinity.hpp"
#include "sdtk/assignment.hpp"
#include "sdtk/clustering.hpp"
#include "sdtk/embeddings.hpp"
#include "sdtk/pruning.hpp"
#include "sdtk/rttm.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sdtk {

enum class Method { ahc, kmeans, sc_fixed, sc_adapt, sc_pna, sc_mk };

inline constexpr std::array<Method, 6> kAllMethods = {Method::ahc,      Method::kmeans, Method::sc_fixed,
                                                      Method::sc_adapt, Method::sc_pna, Method::sc_mk};

std::string_view to_string(Method m);
std::optional<Method> method_from_string(std::string_view name);

/// One row of the clustering grid. Unset optionals take the method defaults:
/// sc-fixed k = 10, sc-adapt p = 0.01, sc-pna tau = 0.20, sc-mk k = 15 over all six kernels.
struct ClusterConfig {
    Method method = Method::sc_fixed;
    std::optional<std::size_t> k;
    std::optional<double> p;
    std::optional<double> tau;
    std::size_t min_keep = 2;
    Symmetrize symmetrize = Symmetrize::max;
    std::vector<KernelId> kernels{kAllKernels.begin(), kAllKernels.end()};
    std::vector<double> kernel_weights;
    Linkage linkage = Linkage::average;
    std::optional<double> threshold;
    std::optional<std::size_t> target_k;
    /// Empty means estimate (spectral methods) or use the AHC threshold.
    std::optional<std::size_t> num_speakers = 2;
    std::size_t max_speakers = 8;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    /// Reconnect over-fragmented pruned graphs before spectral clustering.
    bool bridge = true;

    /// Throws ValidationError on inconsistent method parameters.
    void validate() const;
};

/// Affinity used by a spectral method before pruning.
AffinityMatrix method_affinity(const EmbeddingSet& normalized, const ClusterConfig& cfg);
/// Pruning step of a spectral method.
PruningSpec method_pruning(const ClusterConfig& cfg);

/// Unit-normalizes the embeddings and runs the configured method.
ClusterAssignment cluster_embeddings(const EmbeddingSet& set, const ClusterConfig& cfg);

/// Speaker label for cluster k: "spk00", "spk01", ...
std::string cluster_label(std::size_t k);

/// One turn per segment, labelled by cluster, with the segment's own timing.
Timeline assignment_to_timeline(const EmbeddingSet& set, const ClusterAssignment& assignment);

}  // namespace sdtk
