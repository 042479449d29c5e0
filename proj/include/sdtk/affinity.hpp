#pragma once

#include "sdtk/embeddings.hpp"

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sdtk {

/// Symmetric n x n similarity matrix with zero diagonal and entries in [0, 1].
class AffinityMatrix {
public:
    /// Validates the invariants. Throws ValidationError.
    explicit AffinityMatrix(Eigen::MatrixXd values);

    Eigen::Index n() const { return values_.rows(); }
    const Eigen::MatrixXd& values() const { return values_; }
    double operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }

private:
    Eigen::MatrixXd values_;
};

enum class KernelId { poly1, poly2, poly3, poly4, arccos0, arccos1 };

inline constexpr std::array<KernelId, 6> kAllKernels = {KernelId::poly1,   KernelId::poly2,
                                                        KernelId::poly3,   KernelId::poly4,
                                                        KernelId::arccos0, KernelId::arccos1};

std::string_view to_string(KernelId k);
std::optional<KernelId> kernel_from_string(std::string_view name);

/// Kernel value as a function of the cosine similarity s of two unit vectors.
double kernel_value(KernelId kernel, double s);

/// a[i][j] = (1 + <v_i, v_j>) / 2, zero diagonal. Expects unit-normalized input, n >= 2.
AffinityMatrix cosine_affinity(const EmbeddingSet& set);
AffinityMatrix kernel_affinity(const EmbeddingSet& set, KernelId kernel);

/// Min-max rescales each matrix over its off-diagonal entries, then takes the weighted mean.
/// Empty weights means uniform weighting.
AffinityMatrix fuse_kernels(std::span<const AffinityMatrix> matrices, std::span<const double> weights = {});

}  // namespace sdtk
