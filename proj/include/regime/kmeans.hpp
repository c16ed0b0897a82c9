#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "regime/errors.hpp"

namespace regime {

struct KMeansConfig {
    int k = 2;
    double tolerance = 1e-6;
    int max_iterations = 300;
    std::uint64_t seed = 0;
    enum class Init { UniformSample, FarthestFirst };
    Init init = Init::UniformSample;
    // Independent restarts; the run with the lowest final total-cluster
    // variation wins. Restart r uses a seed derived from (seed, r).
    int restarts = 5;

    void validate(std::size_t n_points) const {
        if (k < 1) throw InvalidInput("KMeansConfig: k must be >= 1");
        if (static_cast<std::size_t>(k) > n_points)
            throw InvalidInput("KMeansConfig: k larger than number of points");
        if (!(tolerance > 0.0)) throw InvalidInput("KMeansConfig: tolerance must be > 0");
        if (max_iterations < 1) throw InvalidInput("KMeansConfig: max_iterations must be >= 1");
        if (restarts < 1) throw InvalidInput("KMeansConfig: restarts must be >= 1");
    }
};

template <class Point>
struct KMeansResult {
    std::vector<int> assignments;  // per-point cluster index in [0, k)
    std::vector<Point> centroids;
    std::vector<double> loss_trace;  // centroid-movement loss per iteration
    std::vector<double> tcv_trace;   // total-cluster variation per iteration
    int iterations = 0;
    bool converged = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

template <class Point, class Metric>
std::vector<Point> init_centroids(const std::vector<Point>& points, int k,
                                  KMeansConfig::Init init, std::uint64_t seed, Metric metric) {
    std::mt19937_64 rng(seed);
    const std::size_t n = points.size();
    std::vector<std::size_t> chosen;
    if (init == KMeansConfig::Init::UniformSample) {
        // k distinct indexes, uniform without replacement.
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        for (int c = 0; c < k; ++c) {
            std::uniform_int_distribution<std::size_t> pick(c, n - 1);
            std::swap(idx[static_cast<std::size_t>(c)], idx[pick(rng)]);
            chosen.push_back(idx[static_cast<std::size_t>(c)]);
        }
    } else {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        chosen.push_back(pick(rng));
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        while (static_cast<int>(chosen.size()) < k) {
            for (std::size_t i = 0; i < n; ++i)
                dist[i] = std::min(dist[i], metric(points[i], points[chosen.back()]));
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (dist[i] > dist[far]) far = i;
            chosen.push_back(far);
        }
    }
    std::vector<Point> centroids;
    for (std::size_t i : chosen) centroids.push_back(points[i]);
    return centroids;
}

}  // namespace detail

// Within-cluster variation: sum of squared member-to-centroid distances.
template <class Point, class Metric>
double within_cluster_variation(const std::vector<Point>& points,
                                const std::vector<int>& assignments, int cluster,
                                const Point& centroid, Metric metric) {
    double total = 0.0;
    bool any = false;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (assignments[i] != cluster) continue;
        const double d = metric(points[i], centroid);
        total += d * d;
        any = true;
    }
    if (!any) throw InvalidInput("within_cluster_variation: empty cluster");
    return total;
}

template <class Point, class Metric>
double total_cluster_variation(const std::vector<Point>& points,
                               const std::vector<int>& assignments,
                               const std::vector<Point>& centroids, Metric metric) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double d = metric(points[i], centroids[static_cast<std::size_t>(assignments[i])]);
        total += d * d;
    }
    return total;
}

// Generic Lloyd iteration over an arbitrary point type. `metric` is the
// distance, `aggregate(points, assignments, cluster)` builds a new centroid
// from the members of `cluster`. Stops when the centroid-movement loss
// sum_i metric(old_i, new_i) drops below tolerance.
template <class Point, class Metric, class Aggregate>
KMeansResult<Point> kmeans_single(const std::vector<Point>& points, const KMeansConfig& cfg,
                                  std::uint64_t seed, Metric metric, Aggregate aggregate) {
    const std::size_t n = points.size();
    const int k = cfg.k;
    KMeansResult<Point> res;
    res.centroids = detail::init_centroids(points, k, cfg.init, seed, metric);
    res.assignments.assign(n, 0);

    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
        // Assignment step; ties break toward the lowest centroid index.
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = metric(points[i], res.centroids[0]);
            for (int c = 1; c < k; ++c) {
                const double d = metric(points[i], res.centroids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            res.assignments[i] = best;
        }

        // Empty-cluster repair: the point farthest from its centroid becomes
        // the empty cluster's sole member.
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (int a : res.assignments) ++counts[static_cast<std::size_t>(a)];
        for (int c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t a = static_cast<std::size_t>(res.assignments[i]);
                if (counts[a] <= 1) continue;  // never empty a donor cluster
                const double d = metric(points[i], res.centroids[a]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            if (far_d < 0.0) throw NumericalFailure("kmeans: cannot repair empty cluster");
            --counts[static_cast<std::size_t>(res.assignments[far])];
            res.assignments[far] = c;
            counts[static_cast<std::size_t>(c)] = 1;
        }

        std::vector<Point> updated(static_cast<std::size_t>(k));
        for (int c = 0; c < k; ++c)
            updated[static_cast<std::size_t>(c)] = aggregate(points, res.assignments, c);

        double loss = 0.0;
        for (int c = 0; c < k; ++c)
            loss += metric(res.centroids[static_cast<std::size_t>(c)],
                           updated[static_cast<std::size_t>(c)]);
        res.centroids = std::move(updated);
        res.loss_trace.push_back(loss);
        res.tcv_trace.push_back(
            total_cluster_variation(points, res.assignments, res.centroids, metric));
        res.iterations = iter + 1;
        if (loss < cfg.tolerance) {
            res.converged = true;
            break;
        }
    }
    return res;
}

template <class Point, class Metric, class Aggregate>
KMeansResult<Point> kmeans_generic(const std::vector<Point>& points, const KMeansConfig& cfg,
                                   Metric metric, Aggregate aggregate) {
    if (points.empty()) throw InvalidInput("kmeans: no points");
    cfg.validate(points.size());
    KMeansResult<Point> best;
    double best_tcv = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        const std::uint64_t seed =
            detail::splitmix64(cfg.seed + 0x51ed2701b0a8f2e5ULL * static_cast<std::uint64_t>(r));
        KMeansResult<Point> run = kmeans_single(points, cfg, seed, metric, aggregate);
        const double tcv = run.tcv_trace.back();
        if (tcv < best_tcv) {
            best_tcv = tcv;
            best = std::move(run);
        }
    }
    return best;
}

}  // namespace regime
