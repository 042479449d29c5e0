#pragma once

#include "sdtk/affinity.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sdtk {

/// How a per-row pruned (directed) graph is made symmetric again.
enum class Symmetrize {
    max,  // union graph
    min,  // mutual graph
};

enum class PruningStrategy { fixed_k, top_p, pna };

struct PruningSpec {
    PruningStrategy strategy = PruningStrategy::fixed_k;
    std::size_t k = 10;
    double p = 0.01;
    double tau = 0.20;
    std::size_t min_keep = 2;
    Symmetrize symmetrize = Symmetrize::max;

    /// Throws ValidationError on out-of-range parameters.
    void validate() const;
};

/// Result of splitting a row of scores into a low and a high group.
struct TwoGroupSplit {
    /// Scores strictly above this value form the high group.
    double threshold = 0.0;
    std::size_t high_count = 0;
    double low_mean = 0.0;
    double high_mean = 0.0;
};

/// Optimal two-cluster 1-D k-means: the threshold split with minimal within-group sum of
/// squares. A constant input puts everything in the high group.
TwoGroupSplit two_means_1d(std::span<const double> scores);

/// Indices of the `count` largest entries of row i (diagonal excluded), ties toward lower index.
std::vector<Eigen::Index> top_neighbors(const AffinityMatrix& a, Eigen::Index row, std::size_t count);

AffinityMatrix prune_fixed_k(const AffinityMatrix& a, std::size_t k, Symmetrize sym = Symmetrize::max);
AffinityMatrix prune_top_p(const AffinityMatrix& a, double p, std::size_t min_keep = 2,
                           Symmetrize sym = Symmetrize::max);
AffinityMatrix prune_pna(const AffinityMatrix& a, double tau, std::size_t min_keep = 2,
                         Symmetrize sym = Symmetrize::max);
AffinityMatrix prune(const AffinityMatrix& a, const PruningSpec& spec);

/// Number of neighbours prune_pna keeps for a row of off-diagonal scores:
/// max(ceil(tau * |high group|), min_keep), capped at the row length.
std::size_t pna_keep_count(std::span<const double> scores, double tau, std::size_t min_keep);

/// Number of neighbours prune_top_p keeps per row for an n-node graph.
std::size_t top_p_keep_count(std::size_t n, double p, std::size_t min_keep);

/// Re-adds the strongest original edge between graph components, strongest first, until at most
/// `max_components` connected components remain. Returns the pruned matrix unchanged when it is
/// already connected enough.
AffinityMatrix bridge_components(const AffinityMatrix& pruned, const AffinityMatrix& original,
                                 std::size_t max_components);

/// Connected component index per node (positive entries are edges), numbered by first node.
std::vector<std::size_t> connected_components(const AffinityMatrix& a);

}  // namespace sdtk
