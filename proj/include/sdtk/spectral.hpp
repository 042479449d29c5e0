#pragma once

#include "sdtk/affinity.hpp"
#include "sdtk/assignment.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <span>

namespace sdtk {

struct SpectralConfig {
    /// Fixed cluster count; when empty the eigengap estimate is used.
    std::optional<std::size_t> num_speakers = 2;
    std::size_t max_speakers = 8;
    std::size_t kmeans_restarts = 10;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Eigenpairs in ascending eigenvalue order; column i of `vectors` belongs to `values(i)`.
struct Spectrum {
    Eigen::VectorXd values;
    Eigen::MatrixXd vectors;
};

/// L_sym = I - D^{-1/2} A D^{-1/2}. Throws ValidationError naming the first isolated node.
Eigen::MatrixXd normalized_laplacian(const AffinityMatrix& a);

/// Full symmetric eigendecomposition, ascending.
Spectrum symmetric_spectrum(const Eigen::MatrixXd& symmetric);

/// argmax_k (lambda_{k+1} - lambda_k) over k in [1, max_speakers], ties to the smaller k.
std::size_t estimate_num_speakers(std::span<const double> eigenvalues, std::size_t max_speakers);

/// Row-normalized spectral embedding from the K smallest eigenvectors, then k-means.
ClusterAssignment spectral_cluster(const AffinityMatrix& a, const SpectralConfig& cfg);

}  // namespace sdtk
