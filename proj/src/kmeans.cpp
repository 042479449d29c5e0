#include "sdtk/kmeans.hpp"

#include "sdtk/error.hpp"

#include <cassert>
#include <limits>
#include <random>

namespace sdtk {

ClusterAssignment canonical_relabel(std::span<const std::size_t> labels) {
    ClusterAssignment out;
    out.labels.reserve(labels.size());
    std::vector<std::size_t> remap;
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    for (std::size_t l : labels) {
        if (l >= remap.size()) remap.resize(l + 1, unset);
        if (remap[l] == unset) remap[l] = out.k++;
        out.labels.push_back(remap[l]);
    }
    return out;
}

namespace {

struct Run {
    std::vector<std::size_t> labels;
    Eigen::MatrixXd centers;
    double inertia = 0.0;
};

Eigen::MatrixXd farthest_point_seeds(const Eigen::MatrixXd& x, std::size_t k, std::size_t first) {
    const Eigen::Index n = x.rows();
    Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), x.cols());
    centers.row(0) = x.row(static_cast<Eigen::Index>(first));
    Eigen::VectorXd nearest = (x.rowwise() - centers.row(0)).rowwise().squaredNorm();
    for (std::size_t c = 1; c < k; ++c) {
        Eigen::Index pick = 0;
        for (Eigen::Index i = 1; i < n; ++i)
            if (nearest(i) > nearest(pick)) pick = i;
        centers.row(static_cast<Eigen::Index>(c)) = x.row(pick);
        nearest = nearest.cwiseMin((x.rowwise() - x.row(pick)).rowwise().squaredNorm());
    }
    return centers;
}

double assign(const Eigen::MatrixXd& x, const Eigen::MatrixXd& centers, std::vector<std::size_t>& labels,
              Eigen::VectorXd& dist) {
    double inertia = 0.0;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (Eigen::Index c = 0; c < centers.rows(); ++c) {
            double d = (x.row(i) - centers.row(c)).squaredNorm();
            if (d < best_d) {
                best_d = d;
                best = static_cast<std::size_t>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = best;
        dist(i) = best_d;
        inertia += best_d;
    }
    return inertia;
}

Run lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers, std::size_t max_iterations) {
    const Eigen::Index n = x.rows();
    const Eigen::Index k = centers.rows();
    Run run;
    run.labels.assign(static_cast<std::size_t>(n), 0);
    Eigen::VectorXd dist(n);
    double inertia = assign(x, centers, run.labels, dist);
    for (std::size_t iter = 0; iter < max_iterations; ++iter) {
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(run.labels[static_cast<std::size_t>(i)])) += x.row(i);
            ++counts[run.labels[static_cast<std::size_t>(i)]];
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) {
                centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
            } else {
                // Empty cluster: move it onto the point worst served by its current center.
                Eigen::Index far = 0;
                for (Eigen::Index i = 1; i < n; ++i)
                    if (dist(i) > dist(far)) far = i;
                centers.row(c) = x.row(far);
                dist(far) = 0.0;
            }
        }
        std::vector<std::size_t> previous = run.labels;
        double next = assign(x, centers, run.labels, dist);
        assert(next <= inertia + 1e-9 * (1.0 + inertia));
        inertia = next;
        if (run.labels == previous) break;
    }
    run.centers = std::move(centers);
    run.inertia = inertia;
    return run;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, const KMeansOptions& options) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (options.k < 1) throw ValidationError("k-means needs k >= 1");
    if (n < options.k)
        throw ValidationError("k-means needs at least k points (n=" + std::to_string(n) +
                              ", k=" + std::to_string(options.k) + ")");
    const std::size_t restarts = std::max<std::size_t>(options.restarts, 1);
    Run best;
    bool have = false;
    for (std::size_t r = 0; r < restarts; ++r) {
        std::seed_seq seq{static_cast<std::uint32_t>(options.seed), static_cast<std::uint32_t>(options.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        const std::size_t first = static_cast<std::size_t>(rng() % n);
        Run run = lloyd(points, farthest_point_seeds(points, options.k, first), options.max_iterations);
        if (!have || run.inertia < best.inertia) {
            best = std::move(run);
            have = true;
        }
    }
    KMeansResult out;
    out.assignment = canonical_relabel(best.labels);
    out.raw_labels = std::move(best.labels);
    out.centers = std::move(best.centers);
    out.inertia = best.inertia;
    return out;
}

}  // namespace sdtk
