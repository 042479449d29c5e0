#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sdtk {

/// Cluster index per segment. Every index in [0, k) is used at least once.
struct ClusterAssignment {
    std::vector<std::size_t> labels;
    std::size_t k = 0;

    friend bool operator==(const ClusterAssignment&, const ClusterAssignment&) = default;
};

/// Renumbers clusters in order of first occurrence and drops unused ids.
ClusterAssignment canonical_relabel(std::span<const std::size_t> labels);

}  // namespace sdtk
