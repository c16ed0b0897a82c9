#include <doctest.h>

#include <cmath>
#include <random>

#include "regime/clustering.hpp"
#include "regime/validation.hpp"

using namespace regime;

namespace {

using Vec = std::vector<double>;

std::vector<Vec> gaussian_sample(std::mt19937_64& rng, int count, std::size_t dim,
                                 double mean, double sd) {
    std::normal_distribution<double> nd(mean, sd);
    std::vector<Vec> out;
    for (int i = 0; i < count; ++i) {
        Vec v(dim);
        for (auto& x : v) x = nd(rng);
        out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

TEST_CASE("gaussian_kernel values") {
    Vec x = {0.3, -0.4};
    CHECK(gaussian_kernel(x, x, 0.7) == doctest::Approx(1.0));
    CHECK(gaussian_kernel(Vec{0.0}, Vec{1.0}, 1.0) == doctest::Approx(std::exp(-0.5)));
    // Monotone decreasing in the separation.
    double prev = 1.0;
    for (double gap = 0.5; gap < 20.0; gap += 0.5) {
        const double v = gaussian_kernel(Vec{0.0}, Vec{gap}, 1.0);
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-10);
    CHECK_THROWS_AS(gaussian_kernel(Vec{0.0}, Vec{0.0, 1.0}, 1.0), InvalidInput);
}

TEST_CASE("mmd_biased closed form and symmetry") {
    KernelConfig kcfg{1.0};
    std::vector<Vec> x = {{0.0}};
    std::vector<Vec> y = {{1.0}};
    CHECK(mmd_biased(x, y, kcfg) ==
          doctest::Approx(std::sqrt(2.0 - 2.0 * std::exp(-0.5))).epsilon(1e-12));
    CHECK(mmd_biased(x, x, kcfg) == doctest::Approx(0.0));

    std::mt19937_64 rng(1);
    auto a = gaussian_sample(rng, 8, 2, 0.0, 1.0);
    auto b = gaussian_sample(rng, 5, 2, 0.5, 1.0);
    CHECK(mmd_biased(a, b, kcfg) == doctest::Approx(mmd_biased(b, a, kcfg)));
}

TEST_CASE("mmd_biased is an empirical pseudometric") {
    KernelConfig kcfg{0.8};
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        auto a = gaussian_sample(rng, 4, 1, 0.0, 1.0);
        auto b = gaussian_sample(rng, 6, 1, 0.3, 1.2);
        auto c = gaussian_sample(rng, 5, 1, -0.4, 0.7);
        const double ab = mmd_biased(a, b, kcfg);
        const double bc = mmd_biased(b, c, kcfg);
        const double ac = mmd_biased(a, c, kcfg);
        CHECK(ab == mmd_biased(b, a, kcfg));
        CHECK(ac <= ab + bc + 1e-9);
        CHECK(mmd_biased(a, a, kcfg) <= 1e-7);
    }
}

TEST_CASE("within-cluster similarity orders homogeneity") {
    MmdSamplingConfig cfg;
    cfg.n_pairs = 300;
    cfg.seed = 7;
    KernelConfig kcfg{0.1};

    std::vector<Vec> identical(10, Vec(20, 0.01));
    auto same = within_cluster_similarity(identical, cfg, kcfg);
    CHECK(same.score == doctest::Approx(0.0));
    CHECK(same.histogram.size() == 300);

    std::mt19937_64 rng(3);
    auto tight = gaussian_sample(rng, 20, 20, 0.0, 0.01);
    auto mixed = gaussian_sample(rng, 10, 20, 0.0, 0.01);
    auto far_part = gaussian_sample(rng, 10, 20, 0.1, 0.01);  // 10 sd apart
    mixed.insert(mixed.end(), far_part.begin(), far_part.end());
    const double tight_score = within_cluster_similarity(tight, cfg, kcfg).score;
    const double mixed_score = within_cluster_similarity(mixed, cfg, kcfg).score;
    CHECK(tight_score < mixed_score);
}

TEST_CASE("between-cluster mmd exceeds within for separated generators") {
    MmdSamplingConfig cfg;
    cfg.n_pairs = 400;
    cfg.seed = 11;
    KernelConfig kcfg{0.1};
    std::mt19937_64 rng(5);
    auto c1 = gaussian_sample(rng, 15, 25, 0.0, 0.01);
    auto c2 = gaussian_sample(rng, 15, 25, 0.2, 0.01);
    const double between = between_cluster_mmd(c1, c2, cfg, kcfg).score;
    const double w1 = within_cluster_similarity(c1, cfg, kcfg).score;
    const double w2 = within_cluster_similarity(c2, cfg, kcfg).score;
    CHECK(between > w1);
    CHECK(between > w2);
}

TEST_CASE("sorting the representation never increases pair MMDs") {
    MmdSamplingConfig ordered;
    ordered.n_pairs = 200;
    ordered.seed = 13;
    MmdSamplingConfig unordered = ordered;
    unordered.ordered = false;
    KernelConfig kcfg{0.1};

    // Same atoms in shuffled order: sorted representation aligns coordinates.
    std::mt19937_64 rng(17);
    std::normal_distribution<double> nd(0.0, 0.05);
    Vec base(15);
    for (auto& x : base) x = nd(rng);
    std::vector<Vec> cluster;
    for (int i = 0; i < 12; ++i) {
        Vec v = base;
        std::shuffle(v.begin(), v.end(), rng);
        cluster.push_back(v);
    }
    auto with_sort = within_cluster_similarity(cluster, ordered, kcfg);
    auto without = within_cluster_similarity(cluster, unordered, kcfg);
    CHECK(with_sort.score <= without.score);
    CHECK(with_sort.score == doctest::Approx(0.0));
}

TEST_CASE("similarity scores are deterministic given seed") {
    std::mt19937_64 rng(19);
    auto cluster = gaussian_sample(rng, 10, 10, 0.0, 0.02);
    MmdSamplingConfig cfg;
    cfg.n_pairs = 150;
    cfg.seed = 23;
    KernelConfig kcfg{0.1};
    auto a = within_cluster_similarity(cluster, cfg, kcfg);
    auto b = within_cluster_similarity(cluster, cfg, kcfg);
    CHECK(a.score == b.score);
    CHECK(a.histogram == b.histogram);
}

TEST_CASE("davies_bouldin examples") {
    std::vector<Vec> pts = {{0.0}, {1.0}};
    std::vector<int> assign = {0, 1};
    std::vector<Vec> centroids = {{0.0}, {1.0}};
    CHECK(davies_bouldin(pts, assign, centroids, euclidean) == doctest::Approx(0.0));

    // Symmetric clusters with mean member distance 0.5 and centroid gap 2.
    std::vector<Vec> sym = {{-1.5}, {-0.5}, {0.5}, {1.5}};
    std::vector<int> sym_assign = {0, 0, 1, 1};
    std::vector<Vec> sym_centroids = {{-1.0}, {1.0}};
    CHECK(davies_bouldin(sym, sym_assign, sym_centroids, euclidean) == doctest::Approx(0.5));

    // Scale invariance.
    std::vector<Vec> scaled;
    for (const auto& p : sym) scaled.push_back({3.0 * p[0]});
    std::vector<Vec> scaled_centroids = {{-3.0}, {3.0}};
    CHECK(davies_bouldin(scaled, sym_assign, scaled_centroids, euclidean) ==
          doctest::Approx(0.5));

    std::vector<Vec> degenerate_centroids = {{0.0}, {0.0}};
    CHECK_THROWS_AS(davies_bouldin(sym, sym_assign, degenerate_centroids, euclidean),
                    NumericalFailure);
}

TEST_CASE("dunn examples") {
    std::vector<Vec> pts = {{0.0}, {1.0}, {10.0}, {11.0}};
    std::vector<int> assign = {0, 0, 1, 1};
    CHECK(dunn(pts, assign, 2, euclidean) == doctest::Approx(9.0));

    // Moving the clusters' nearest points together reduces the index.
    std::vector<Vec> closer = {{0.0}, {5.0}, {10.0}, {11.0}};
    CHECK(dunn(closer, assign, 2, euclidean) < 9.0);

    std::vector<Vec> scaled = {{0.0}, {2.0}, {20.0}, {22.0}};
    CHECK(dunn(scaled, assign, 2, euclidean) == doctest::Approx(9.0));

    std::vector<Vec> singletons = {{0.0}, {1.0}};
    CHECK_THROWS_AS(dunn(singletons, std::vector<int>{0, 1}, 2, euclidean),
                    NumericalFailure);
}

TEST_CASE("silhouette on blobs and duplicated clusters") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> nd(0.0, 0.1);
    std::vector<Vec> pts;
    std::vector<int> assign;
    for (int i = 0; i < 40; ++i) {
        pts.push_back({nd(rng)});
        assign.push_back(0);
    }
    for (int i = 0; i < 40; ++i) {
        pts.push_back({10.0 + nd(rng)});
        assign.push_back(1);
    }
    auto good = silhouette_alpha(pts, assign, 2, euclidean, 1.0, 1);
    CHECK(good.score > 0.9);

    // One blob split randomly in two: silhouettes collapse.
    std::vector<int> random_split;
    for (std::size_t i = 0; i < 80; ++i) random_split.push_back(static_cast<int>(rng() % 2));
    auto bad = silhouette_alpha(pts, random_split, 2, euclidean, 1.0, 1);
    CHECK(bad.score < 0.2);

    // Subsampling consistency: alpha = 0.5 close to the exhaustive average.
    std::vector<Vec> pts200;
    std::vector<int> assign200;
    std::normal_distribution<double> wide(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        pts200.push_back({wide(rng)});
        assign200.push_back(0);
    }
    for (int i = 0; i < 100; ++i) {
        pts200.push_back({4.0 + wide(rng)});
        assign200.push_back(1);
    }
    const double full = silhouette_alpha(pts200, assign200, 2, euclidean, 1.0, 2).score;
    const double half = silhouette_alpha(pts200, assign200, 2, euclidean, 0.5, 2).score;
    CHECK(std::abs(full - half) < 0.05);
}

TEST_CASE("index sanity on 10-sigma blobs") {
    std::mt19937_64 rng(37);
    std::normal_distribution<double> nd(0.0, 1.0);
    std::vector<Vec> pts;
    std::vector<int> assign;
    std::vector<Vec> centroids = {{0.0}, {100.0}};
    for (int i = 0; i < 50; ++i) {
        pts.push_back({nd(rng)});
        assign.push_back(0);
    }
    for (int i = 0; i < 50; ++i) {
        pts.push_back({100.0 + nd(rng)});
        assign.push_back(1);
    }
    CHECK(davies_bouldin(pts, assign, centroids, euclidean) < 0.2);
    CHECK(dunn(pts, assign, 2, euclidean) > 5.0);
    CHECK(silhouette_alpha(pts, assign, 2, euclidean, 1.0, 3).score > 0.9);
}
