#pragma once

#include "sdtk/assignment.hpp"
#include "sdtk/embeddings.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace sdtk {

enum class Linkage { average, complete, single };

std::optional<Linkage> linkage_from_string(std::string_view name);
std::string_view to_string(Linkage linkage);

/// Exactly one of target_k / threshold must be set.
struct AhcConfig {
    Linkage linkage = Linkage::average;
    std::optional<std::size_t> target_k;
    /// Cosine distance (1 - s); merging stops once the closest pair is farther than this.
    std::optional<double> threshold;

    void validate() const;
};

/// Agglomerative clustering on cosine distance over unit-normalized embeddings.
/// Equal linkage distances merge the pair with the lexicographically smallest
/// (smallest member index, smallest member index).
ClusterAssignment ahc_cluster(const EmbeddingSet& set, const AhcConfig& cfg);

/// Lloyd k-means on unit-normalized embeddings; same seeding and restart rules as spectral k-means.
ClusterAssignment kmeans_cluster(const EmbeddingSet& set, std::size_t k, std::size_t restarts, std::uint64_t seed);

}  // namespace sdtk
