#include "sdtk/affinity.hpp"

#include "sdtk/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace sdtk {

AffinityMatrix::AffinityMatrix(Eigen::MatrixXd values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw ValidationError("affinity matrix must be square");
    const Eigen::Index n = values_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (values_(i, i) != 0.0) throw ValidationError("affinity diagonal must be zero");
        for (Eigen::Index j = 0; j < n; ++j) {
            double v = values_(i, j);
            if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("affinity entries must lie in [0, 1]");
            if (std::abs(v - values_(j, i)) > 1e-12) throw ValidationError("affinity matrix must be symmetric");
        }
    }
}

std::string_view to_string(KernelId k) {
    switch (k) {
        case KernelId::poly1: return "poly1";
        case KernelId::poly2: return "poly2";
        case KernelId::poly3: return "poly3";
        case KernelId::poly4: return "poly4";
        case KernelId::arccos0: return "arccos0";
        case KernelId::arccos1: return "arccos1";
    }
    return "?";
}

std::optional<KernelId> kernel_from_string(std::string_view name) {
    for (KernelId k : kAllKernels)
        if (to_string(k) == name) return k;
    return std::nullopt;
}

double kernel_value(KernelId kernel, double s) {
    s = std::clamp(s, -1.0, 1.0);
    const double half = (1.0 + s) / 2.0;
    switch (kernel) {
        case KernelId::poly1: return half;
        case KernelId::poly2: return half * half;
        case KernelId::poly3: return half * half * half;
        case KernelId::poly4: return (half * half) * (half * half);
        case KernelId::arccos0: {
            const double theta = std::acos(s);
            return 1.0 - theta / std::numbers::pi;
        }
        case KernelId::arccos1: {
            const double theta = std::acos(s);
            double v = (std::sin(theta) + (std::numbers::pi - theta) * std::cos(theta)) / std::numbers::pi;
            return std::clamp(v, 0.0, 1.0);
        }
    }
    return 0.0;
}

namespace {

Eigen::MatrixXd gram(const EmbeddingSet& set) {
    if (set.size() < 2) throw ValidationError(set.recording_id + ": at least two segments are needed for an affinity");
    Eigen::MatrixXd x = set.matrix();
    return x * x.transpose();
}

AffinityMatrix from_similarity(const Eigen::MatrixXd& s, KernelId kernel) {
    const Eigen::Index n = s.rows();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            // s(i, j) and s(j, i) may differ in the last bit; use one of them for both entries.
            double v = kernel_value(kernel, s(i, j));
            a(i, j) = v;
            a(j, i) = v;
        }
    return AffinityMatrix(std::move(a));
}

}  // namespace

AffinityMatrix cosine_affinity(const EmbeddingSet& set) { return from_similarity(gram(set), KernelId::poly1); }

AffinityMatrix kernel_affinity(const EmbeddingSet& set, KernelId kernel) { return from_similarity(gram(set), kernel); }

AffinityMatrix fuse_kernels(std::span<const AffinityMatrix> matrices, std::span<const double> weights) {
    if (matrices.empty()) throw ValidationError("fuse_kernels needs at least one matrix");
    if (!weights.empty() && weights.size() != matrices.size())
        throw ValidationError("fuse_kernels: weight count differs from matrix count");
    const Eigen::Index n = matrices.front().n();
    double weight_sum = 0.0;
    for (std::size_t m = 0; m < matrices.size(); ++m) {
        if (matrices[m].n() != n) throw ValidationError("fuse_kernels: matrix shape mismatch");
        double w = weights.empty() ? 1.0 : weights[m];
        if (!(w >= 0.0)) throw ValidationError("fuse_kernels: weights must be non-negative");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0)) throw ValidationError("fuse_kernels: weights sum to zero");

    Eigen::MatrixXd fused = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t m = 0; m < matrices.size(); ++m) {
        const auto& v = matrices[m].values();
        double lo = 1.0, hi = 0.0;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                lo = std::min(lo, v(i, j));
                hi = std::max(hi, v(i, j));
            }
        const double w = (weights.empty() ? 1.0 : weights[m]) / weight_sum;
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = i + 1; j < n; ++j) {
                double scaled = hi > lo ? (v(i, j) - lo) / (hi - lo) : 0.5;
                fused(i, j) += w * scaled;
            }
    }
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j) {
            double v = std::clamp(fused(i, j), 0.0, 1.0);
            fused(i, j) = v;
            fused(j, i) = v;
        }
    return AffinityMatrix(std::move(fused));
}

}  // namespace sdtk
