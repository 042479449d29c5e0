#include "sdtk/spectral.hpp"

#include "sdtk/error.hpp"
#include "sdtk/kmeans.hpp"

#include <algorithm>
#include <cmath>

namespace sdtk {

void SpectralConfig::validate() const {
    if (num_speakers && *num_speakers < 1) throw ValidationError("num_speakers must be positive");
    if (max_speakers < 1) throw ValidationError("max_speakers must be positive");
    if (num_speakers && *num_speakers > max_speakers)
        throw ValidationError("num_speakers exceeds max_speakers");
    if (kmeans_restarts < 1) throw ValidationError("kmeans_restarts must be positive");
}

Eigen::MatrixXd normalized_laplacian(const AffinityMatrix& a) {
    const Eigen::Index n = a.n();
    Eigen::VectorXd degree = a.values().rowwise().sum();
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(degree(i) > 0.0)) throw ValidationError("isolated node " + std::to_string(i) + " has zero degree");
    Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXd l = -(inv_sqrt.asDiagonal() * a.values() * inv_sqrt.asDiagonal());
    l.diagonal().array() += 1.0;
    // Exact symmetry for the eigensolver.
    return (l + l.transpose()) / 2.0;
}

Spectrum symmetric_spectrum(const Eigen::MatrixXd& symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success) throw Error("symmetric eigendecomposition failed to converge");
    return {solver.eigenvalues(), solver.eigenvectors()};
}

std::size_t estimate_num_speakers(std::span<const double> eigenvalues, std::size_t max_speakers) {
    if (max_speakers < 1) throw ValidationError("max_speakers must be positive");
    if (eigenvalues.size() < max_speakers + 1)
        throw ValidationError("eigengap estimate needs at least max_speakers + 1 eigenvalues");
    std::size_t best = 1;
    double best_gap = eigenvalues[1] - eigenvalues[0];
    for (std::size_t k = 2; k <= max_speakers; ++k) {
        double gap = eigenvalues[k] - eigenvalues[k - 1];
        if (gap > best_gap) {
            best_gap = gap;
            best = k;
        }
    }
    return best;
}

ClusterAssignment spectral_cluster(const AffinityMatrix& a, const SpectralConfig& cfg) {
    cfg.validate();
    const auto n = static_cast<std::size_t>(a.n());
    if (cfg.num_speakers && n < *cfg.num_speakers)
        throw ValidationError("spectral clustering needs at least K segments (n=" + std::to_string(n) +
                              ", K=" + std::to_string(*cfg.num_speakers) + ")");
    if (n == 1) return {{0}, 1};

    Spectrum spectrum = symmetric_spectrum(normalized_laplacian(a));
    std::size_t k = 0;
    if (cfg.num_speakers) {
        k = *cfg.num_speakers;
    } else {
        const std::size_t max_k = std::min(cfg.max_speakers, n - 1);
        std::span<const double> values(spectrum.values.data(), static_cast<std::size_t>(spectrum.values.size()));
        k = estimate_num_speakers(values, max_k);
    }
    if (k == 1) return {std::vector<std::size_t>(n, 0), 1};

    Eigen::MatrixXd embedding = spectrum.vectors.leftCols(static_cast<Eigen::Index>(k));
    std::vector<Eigen::Index> live;
    for (Eigen::Index i = 0; i < embedding.rows(); ++i) {
        double norm = embedding.row(i).norm();
        if (norm > 1e-12) {
            embedding.row(i) /= norm;
            live.push_back(i);
        }
    }

    std::vector<std::size_t> labels(n, 0);
    if (live.size() >= k) {
        Eigen::MatrixXd points(static_cast<Eigen::Index>(live.size()), embedding.cols());
        for (std::size_t r = 0; r < live.size(); ++r) points.row(static_cast<Eigen::Index>(r)) = embedding.row(live[r]);
        KMeansResult km = kmeans(points, {.k = k, .restarts = cfg.kmeans_restarts, .seed = cfg.seed});
        for (std::size_t r = 0; r < live.size(); ++r) labels[static_cast<std::size_t>(live[r])] = km.raw_labels[r];
    }
    return canonical_relabel(labels);
}

}  // namespace sdtk
