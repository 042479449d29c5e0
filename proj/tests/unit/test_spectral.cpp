#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sdtk/error.hpp"
#include "sdtk/fixtures.hpp"
#include "sdtk/kmeans.hpp"
#include "sdtk/spectral.hpp"

using namespace sdtk;

namespace {

AffinityMatrix blocks(const std::vector<int>& sizes, Rng* rng = nullptr) {
    int n = 0;
    for (int s : sizes) n += s;
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
    int start = 0;
    for (int s : sizes) {
        for (int i = start; i < start + s; ++i)
            for (int j = i + 1; j < start + s; ++j) m(i, j) = m(j, i) = rng ? rng->uniform(0.5, 1.0) : 1.0;
        start += s;
    }
    return AffinityMatrix(m);
}

}  // namespace

TEST_CASE("two-node laplacian") {
    Eigen::MatrixXd m(2, 2);
    m << 0, 0.37, 0.37, 0;
    auto l = normalized_laplacian(AffinityMatrix(m));
    Eigen::MatrixXd expect(2, 2);
    expect << 1, -1, -1, 1;
    CHECK(l.isApprox(expect, 1e-12));
    auto sp = symmetric_spectrum(l);
    CHECK(std::abs(sp.values(0)) <= 1e-12);
    CHECK(sp.values(1) == doctest::Approx(2.0));
}

TEST_CASE("isolated node is rejected by index") {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3, 3);
    m(0, 1) = m(1, 0) = 0.5;
    try {
        normalized_laplacian(AffinityMatrix(m));
        FAIL("expected error");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("2") != std::string::npos);
    }
}

TEST_CASE("laplacian matches the entrywise formula and the Jacobi oracle") {
    Rng rng(1);
    for (int trial = 0; trial < 10; ++trial) {
        auto m = oracle::random_affinity(rng, 6);
        auto l = normalized_laplacian(AffinityMatrix(m));
        CHECK(l.isApprox(oracle::laplacian_entrywise(m), 1e-12));
        auto ours = symmetric_spectrum(l).values;
        auto ref = oracle::jacobi_eigenvalues(l);
        for (std::size_t i = 0; i < 6; ++i) {
            CHECK(std::abs(ours(static_cast<Eigen::Index>(i)) - ref[i]) <= 1e-9);
            CHECK(ref[i] >= -1e-8);
            CHECK(ref[i] <= 2 + 1e-8);
        }
    }
}

TEST_CASE("block-diagonal zero eigenvalue multiplicity") {
    Rng rng(2);
    for (int c = 2; c <= 4; ++c) {
        std::vector<int> sizes;
        for (int b = 0; b < c; ++b) sizes.push_back(3 + b);
        auto a = blocks(sizes, &rng);
        auto ev = oracle::jacobi_eigenvalues(normalized_laplacian(a));
        for (int i = 0; i < c; ++i) CHECK(std::abs(ev[static_cast<std::size_t>(i)]) <= 1e-8);
        CHECK(ev[static_cast<std::size_t>(c)] > 1e-3);
        CHECK(estimate_num_speakers(ev, std::min<std::size_t>(8, ev.size() - 1)) == static_cast<std::size_t>(c));
    }
}

TEST_CASE("eigengap estimate") {
    std::vector<double> a{0, 0, 0.8, 0.9};
    CHECK(estimate_num_speakers(a, 3) == 2);
    std::vector<double> b{0, 1, 1, 1};
    CHECK(estimate_num_speakers(b, 3) == 1);
    CHECK_THROWS_AS(estimate_num_speakers(b, 4), ValidationError);
}

TEST_CASE("spectral recovers exact blocks") {
    SpectralConfig cfg;
    cfg.num_speakers = 2;
    auto r = spectral_cluster(blocks({3, 4}), cfg);
    CHECK(r.labels == std::vector<std::size_t>{0, 0, 0, 1, 1, 1, 1});
    CHECK(r.k == 2);
    Eigen::MatrixXd two(2, 2);
    two << 0, 0.3, 0.3, 0;
    CHECK(spectral_cluster(AffinityMatrix(two), cfg).labels == std::vector<std::size_t>{0, 1});
}

TEST_CASE("spectral estimates block count when unset") {
    Rng rng(3);
    for (int c = 2; c <= 4; ++c) {
        std::vector<int> sizes(static_cast<std::size_t>(c), 4);
        SpectralConfig cfg;
        cfg.num_speakers.reset();
        auto r = spectral_cluster(blocks(sizes, &rng), cfg);
        CHECK(r.k == static_cast<std::size_t>(c));
        for (std::size_t i = 0; i < r.labels.size(); ++i) CHECK(r.labels[i] == i / 4);
    }
}

TEST_CASE("spectral rejects too few points") {
    Eigen::MatrixXd two(2, 2);
    two << 0, 0.3, 0.3, 0;
    SpectralConfig cfg;
    cfg.num_speakers = 3;
    CHECK_THROWS_AS(spectral_cluster(AffinityMatrix(two), cfg), ValidationError);
}

TEST_CASE("spectral recovers fixture clusters") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        EmbeddingFixtureSpec spec;
        spec.seed = seed;
        auto fx = gen_embeddings(spec);
        auto a = cosine_affinity(fx.set);
        SpectralConfig cfg;
        auto r = spectral_cluster(a, cfg);
        CHECK(oracle::best_permutation_accuracy(fx.labels, r.labels) == 1.0);
    }
}

TEST_CASE("eigenpair residuals") {
    Rng rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.index(40));
        auto l = normalized_laplacian(AffinityMatrix(oracle::random_affinity(rng, n)));
        auto sp = symmetric_spectrum(l);
        for (Eigen::Index i = 0; i < n; ++i) {
            Eigen::VectorXd v = sp.vectors.col(i);
            CHECK((l * v - sp.values(i) * v).norm() <= 1e-6 * double(n));
            if (i > 0) CHECK(sp.values(i - 1) <= sp.values(i));
        }
    }
}

TEST_CASE("permutation equivariance and determinism") {
    Rng rng(5);
    EmbeddingFixtureSpec spec;
    spec.seed = 9;
    auto fx = gen_embeddings(spec);
    auto a = cosine_affinity(fx.set).values();
    const Eigen::Index n = a.rows();
    std::vector<Eigen::Index> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t i = perm.size() - 1; i > 0; --i) std::swap(perm[i], perm[rng.index(i + 1)]);
    Eigen::MatrixXd b(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) b(i, j) = a(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(j)]);
    SpectralConfig cfg;
    auto ra = spectral_cluster(AffinityMatrix(a), cfg);
    auto rb = spectral_cluster(AffinityMatrix(b), cfg);
    std::vector<std::size_t> back(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < back.size(); ++i) back[i] = ra.labels[static_cast<std::size_t>(perm[i])];
    CHECK(oracle::same_partition(back, rb.labels));
    CHECK(spectral_cluster(AffinityMatrix(a), cfg) == ra);
}

TEST_CASE("kmeans basics") {
    Eigen::MatrixXd pts(6, 2);
    pts << 0, 0, 0.1, 0, 0, 0.1, 5, 5, 5.1, 5, 5, 5.1;
    KMeansOptions opt;
    opt.k = 2;
    auto r = kmeans(pts, opt);
    CHECK(r.assignment.labels == std::vector<std::size_t>{0, 0, 0, 1, 1, 1});
    opt.k = 6;
    CHECK(kmeans(pts, opt).inertia == doctest::Approx(0.0));
    opt.k = 1;
    CHECK(kmeans(pts, opt).assignment.labels == std::vector<std::size_t>(6, 0));
}

TEST_CASE("canonical relabel") {
    std::vector<std::size_t> l{3, 3, 1, 7, 1};
    auto r = canonical_relabel(l);
    CHECK(r.labels == std::vector<std::size_t>{0, 0, 1, 2, 1});
    CHECK(r.k == 3);
}
