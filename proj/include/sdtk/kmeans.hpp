#pragma once

#include "sdtk/assignment.hpp"

#include <Eigen/Dense>

#include <cstdint>

namespace sdtk {

struct KMeansOptions {
    std::size_t k = 2;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
    std::size_t max_iterations = 300;
};

struct KMeansResult {
    ClusterAssignment assignment;
    double inertia = 0.0;
    /// Raw (not relabelled) cluster index per row.
    std::vector<std::size_t> raw_labels;
    Eigen::MatrixXd centers;
};

/// Lloyd's algorithm on the rows of `points` with greedy farthest-point seeding. Restart r picks
/// its first center from a generator seeded with (seed, r); the lowest-inertia restart wins, ties
/// to the earlier restart.
KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options);

}  // namespace sdtk
