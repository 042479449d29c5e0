#include "sdtk/pruning.hpp"

#include "sdtk/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <tuple>

namespace sdtk {

void PruningSpec::validate() const {
    switch (strategy) {
        case PruningStrategy::fixed_k:
            if (k < 1) throw ValidationError("fixed-k pruning needs k >= 1");
            break;
        case PruningStrategy::top_p:
            if (!(p > 0.0 && p <= 1.0)) throw ValidationError("top-p pruning needs 0 < p <= 1");
            break;
        case PruningStrategy::pna:
            if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("pNA pruning needs 0 < tau <= 1");
            break;
    }
    if (min_keep < 1) throw ValidationError("min_keep must be at least 1");
}

TwoGroupSplit two_means_1d(std::span<const double> scores) {
    if (scores.empty()) return {};
    std::vector<double> v(scores.begin(), scores.end());
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    std::vector<double> prefix(n + 1, 0.0), prefix_sq(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        prefix[i + 1] = prefix[i] + v[i];
        prefix_sq[i + 1] = prefix_sq[i] + v[i] * v[i];
    }
    auto sse = [&](std::size_t lo, std::size_t hi) {
        const double cnt = static_cast<double>(hi - lo);
        const double s = prefix[hi] - prefix[lo];
        return std::max(0.0, (prefix_sq[hi] - prefix_sq[lo]) - s * s / cnt);
    };

    TwoGroupSplit best;
    best.threshold = v.front() - 1.0;
    best.high_count = n;
    best.high_mean = prefix[n] / static_cast<double>(n);
    best.low_mean = best.high_mean;
    double best_cost = 0.0;
    bool found = false;
    // Candidate splits sit between distinct consecutive values; equal scores never separate.
    for (std::size_t cut = 1; cut < n; ++cut) {
        if (!(v[cut - 1] < v[cut])) continue;
        double cost = sse(0, cut) + sse(cut, n);
        if (!found || cost < best_cost) {
            found = true;
            best_cost = cost;
            best.threshold = v[cut - 1];
            best.high_count = n - cut;
            best.low_mean = prefix[cut] / static_cast<double>(cut);
            best.high_mean = (prefix[n] - prefix[cut]) / static_cast<double>(n - cut);
        }
    }
    return best;
}

std::vector<Eigen::Index> top_neighbors(const AffinityMatrix& a, Eigen::Index row, std::size_t count) {
    std::vector<Eigen::Index> cols;
    cols.reserve(static_cast<std::size_t>(a.n()));
    for (Eigen::Index j = 0; j < a.n(); ++j)
        if (j != row) cols.push_back(j);
    count = std::min(count, cols.size());
    std::partial_sort(cols.begin(), cols.begin() + static_cast<std::ptrdiff_t>(count), cols.end(),
                      [&](Eigen::Index x, Eigen::Index y) {
                          if (a(row, x) != a(row, y)) return a(row, x) > a(row, y);
                          return x < y;
                      });
    cols.resize(count);
    return cols;
}

namespace {

void require_graph(const AffinityMatrix& a) {
    if (a.n() < 2) throw ValidationError("pruning needs at least two nodes");
}

template <typename KeepCount>
AffinityMatrix prune_rows(const AffinityMatrix& a, KeepCount keep_count, Symmetrize sym) {
    require_graph(a);
    const Eigen::Index n = a.n();
    Eigen::MatrixXd directed = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j : top_neighbors(a, i, keep_count(i))) directed(i, j) = a(i, j);
    Eigen::MatrixXd out(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            out(i, j) = sym == Symmetrize::max ? std::max(directed(i, j), directed(j, i))
                                               : std::min(directed(i, j), directed(j, i));
    return AffinityMatrix(std::move(out));
}

}  // namespace

AffinityMatrix prune_fixed_k(const AffinityMatrix& a, std::size_t k, Symmetrize sym) {
    if (k < 1) throw ValidationError("fixed-k pruning needs k >= 1");
    return prune_rows(a, [k](Eigen::Index) { return k; }, sym);
}

std::size_t top_p_keep_count(std::size_t n, double p, std::size_t min_keep) {
    const double raw = p * static_cast<double>(n - 1);
    // p * (n - 1) that is an integer up to rounding must not round up to the next one.
    auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
    return std::min(std::max(count, min_keep), n - 1);
}

AffinityMatrix prune_top_p(const AffinityMatrix& a, double p, std::size_t min_keep, Symmetrize sym) {
    if (!(p > 0.0 && p <= 1.0)) throw ValidationError("top-p pruning needs 0 < p <= 1");
    require_graph(a);
    const std::size_t keep = top_p_keep_count(static_cast<std::size_t>(a.n()), p, min_keep);
    return prune_rows(a, [keep](Eigen::Index) { return keep; }, sym);
}

std::size_t pna_keep_count(std::span<const double> scores, double tau, std::size_t min_keep) {
    const std::size_t same_speaker = two_means_1d(scores).high_count;
    auto count = static_cast<std::size_t>(std::ceil(tau * static_cast<double>(same_speaker) - 1e-9));
    return std::min(std::max(count, min_keep), scores.size());
}

AffinityMatrix prune_pna(const AffinityMatrix& a, double tau, std::size_t min_keep, Symmetrize sym) {
    if (!(tau > 0.0 && tau <= 1.0)) throw ValidationError("pNA pruning needs 0 < tau <= 1");
    require_graph(a);
    const Eigen::Index n = a.n();
    std::vector<double> row;
    auto keep = [&](Eigen::Index i) {
        row.clear();
        for (Eigen::Index j = 0; j < n; ++j)
            if (j != i) row.push_back(a(i, j));
        return pna_keep_count(row, tau, min_keep);
    };
    return prune_rows(a, keep, sym);
}

AffinityMatrix prune(const AffinityMatrix& a, const PruningSpec& spec) {
    spec.validate();
    switch (spec.strategy) {
        case PruningStrategy::fixed_k: return prune_fixed_k(a, spec.k, spec.symmetrize);
        case PruningStrategy::top_p: return prune_top_p(a, spec.p, spec.min_keep, spec.symmetrize);
        case PruningStrategy::pna: return prune_pna(a, spec.tau, spec.min_keep, spec.symmetrize);
    }
    return a;
}

std::vector<std::size_t> connected_components(const AffinityMatrix& a) {
    const auto n = static_cast<std::size_t>(a.n());
    constexpr std::size_t unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> comp(n, unset);
    std::size_t next = 0;
    std::vector<std::size_t> stack;
    for (std::size_t s = 0; s < n; ++s) {
        if (comp[s] != unset) continue;
        comp[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            std::size_t u = stack.back();
            stack.pop_back();
            for (std::size_t v = 0; v < n; ++v) {
                if (comp[v] == unset && a(static_cast<Eigen::Index>(u), static_cast<Eigen::Index>(v)) > 0.0) {
                    comp[v] = next;
                    stack.push_back(v);
                }
            }
        }
        ++next;
    }
    return comp;
}

AffinityMatrix bridge_components(const AffinityMatrix& pruned, const AffinityMatrix& original,
                                 std::size_t max_components) {
    if (pruned.n() != original.n()) throw ValidationError("bridge_components: shape mismatch");
    max_components = std::max<std::size_t>(max_components, 1);
    auto comp = connected_components(pruned);
    std::size_t count = comp.empty() ? 0 : *std::max_element(comp.begin(), comp.end()) + 1;
    if (count <= max_components) return pruned;

    // Kruskal over components: strongest cross-component edges first, ties to lower (i, j).
    std::vector<std::tuple<double, Eigen::Index, Eigen::Index>> edges;
    const Eigen::Index n = original.n();
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            if (comp[static_cast<std::size_t>(i)] != comp[static_cast<std::size_t>(j)] && original(i, j) > 0.0)
                edges.emplace_back(original(i, j), i, j);
    std::sort(edges.begin(), edges.end(), [](const auto& x, const auto& y) {
        if (std::get<0>(x) != std::get<0>(y)) return std::get<0>(x) > std::get<0>(y);
        return std::tie(std::get<1>(x), std::get<2>(x)) < std::tie(std::get<1>(y), std::get<2>(y));
    });

    std::vector<std::size_t> parent(count);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    Eigen::MatrixXd out = pruned.values();
    for (const auto& [w, i, j] : edges) {
        if (count <= max_components) break;
        std::size_t ci = find(comp[static_cast<std::size_t>(i)]);
        std::size_t cj = find(comp[static_cast<std::size_t>(j)]);
        if (ci == cj) continue;
        parent[std::max(ci, cj)] = std::min(ci, cj);
        out(i, j) = w;
        out(j, i) = w;
        --count;
    }
    return AffinityMatrix(std::move(out));
}

}  // namespace sdtk
