#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "regime/kmeans.hpp"
#include "regime/measures.hpp"

namespace regime {

struct KernelConfig {
    double sigma = 0.1;

    void validate() const {
        if (!(sigma > 0.0)) throw InvalidInput("KernelConfig: sigma must be > 0");
    }
};

struct MmdSamplingConfig {
    std::size_t n_pairs = 1000;
    std::uint64_t seed = 0;
    bool ordered = true;  // represent each measure by its sorted vector

    void validate() const {
        if (n_pairs < 1) throw InvalidInput("MmdSamplingConfig: n_pairs must be >= 1");
    }
};

// exp(-||x - y||^2 / (2 sigma^2))
double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma);

// Biased empirical MMD estimate between two samples of d-dimensional points.
double mmd_biased(const std::vector<std::vector<double>>& x,
                  const std::vector<std::vector<double>>& y, const KernelConfig& kcfg);

struct SimilarityScore {
    double score = 0.0;               // median of squared biased MMDs
    std::vector<double> histogram;    // every sampled squared MMD
};

// Self-similarity of one cluster: sample n_pairs (i != j) pairs of member
// vectors, treat each vector as a single point in R^h1, and take the median
// squared MMD. Lower is more homogeneous.
SimilarityScore within_cluster_similarity(const std::vector<std::vector<double>>& cluster,
                                          const MmdSamplingConfig& cfg,
                                          const KernelConfig& kcfg);

SimilarityScore between_cluster_mmd(const std::vector<std::vector<double>>& c1,
                                    const std::vector<std::vector<double>>& c2,
                                    const MmdSamplingConfig& cfg, const KernelConfig& kcfg);

// Measure-based conveniences; cfg.ordered chooses the sorted-atom
// representation (atoms are already sorted, so ordered=true is a no-op and
// ordered=false is unavailable here; use the vector overloads for raw order).
SimilarityScore within_cluster_similarity(const std::vector<EmpiricalMeasure>& cluster,
                                          const MmdSamplingConfig& cfg,
                                          const KernelConfig& kcfg);
SimilarityScore between_cluster_mmd(const std::vector<EmpiricalMeasure>& c1,
                                    const std::vector<EmpiricalMeasure>& c2,
                                    const MmdSamplingConfig& cfg, const KernelConfig& kcfg);

// Classic clustering indexes, parameterized over the point type and metric.

template <class Point, class Metric>
double davies_bouldin(const std::vector<Point>& points, const std::vector<int>& assignments,
                      const std::vector<Point>& centroids, Metric metric) {
    const std::size_t k = centroids.size();
    if (k < 2) throw InvalidInput("davies_bouldin: need k >= 2");
    std::vector<double> d(k, 0.0);
    std::vector<std::size_t> count(k, 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const std::size_t c = static_cast<std::size_t>(assignments[i]);
        d[c] += metric(points[i], centroids[c]);
        ++count[c];
    }
    for (std::size_t c = 0; c < k; ++c) {
        if (count[c] == 0) throw InvalidInput("davies_bouldin: empty cluster");
        d[c] /= static_cast<double>(count[c]);
    }
    double total = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        double worst = 0.0;
        for (std::size_t j = 0; j < k; ++j) {
            if (j == i) continue;
            const double gap = metric(centroids[i], centroids[j]);
            if (gap == 0.0) throw NumericalFailure("davies_bouldin: coincident centroids");
            worst = std::max(worst, (d[i] + d[j]) / gap);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

template <class Point, class Metric>
double dunn(const std::vector<Point>& points, const std::vector<int>& assignments,
            std::size_t k, Metric metric) {
    if (k < 2) throw InvalidInput("dunn: need k >= 2");
    double min_gap = std::numeric_limits<double>::infinity();
    double max_diam = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = metric(points[i], points[j]);
            if (assignments[i] == assignments[j])
                max_diam = std::max(max_diam, d);
            else
                min_gap = std::min(min_gap, d);
        }
    }
    if (max_diam == 0.0) throw NumericalFailure("dunn: zero intra-cluster diameter");
    return min_gap / max_diam;
}

struct SilhouetteResult {
    double score = 0.0;
    std::size_t sampled = 0;
    std::size_t skipped = 0;  // points whose own cluster was a singleton
};

// alpha-subsampled average silhouette: per cluster, sample floor(alpha*|C|)
// members, average their coefficients, then average over clusters.
template <class Point, class Metric>
SilhouetteResult silhouette_alpha(const std::vector<Point>& points,
                                  const std::vector<int>& assignments, std::size_t k,
                                  Metric metric, double alpha, std::uint64_t seed) {
    if (k < 2) throw InvalidInput("silhouette_alpha: need k >= 2");
    if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidInput("silhouette_alpha: alpha in (0,1]");
    std::vector<std::vector<std::size_t>> members(k);
    for (std::size_t i = 0; i < points.size(); ++i)
        members[static_cast<std::size_t>(assignments[i])].push_back(i);

    std::mt19937_64 rng(seed);
    SilhouetteResult res;
    double cluster_sum = 0.0;
    std::size_t clusters_used = 0;
    for (std::size_t l = 0; l < k; ++l) {
        auto sample = members[l];
        std::size_t take = static_cast<std::size_t>(alpha * static_cast<double>(sample.size()));
        take = std::max<std::size_t>(take, 1);
        std::shuffle(sample.begin(), sample.end(), rng);
        sample.resize(std::min(take, sample.size()));
        std::sort(sample.begin(), sample.end());

        double sum = 0.0;
        std::size_t used = 0;
        for (std::size_t i : sample) {
            if (members[l].size() < 2) {
                ++res.skipped;
                continue;
            }
            // Self term contributes 0; the divisor is the full cluster size.
            double a = 0.0;
            for (std::size_t j : members[l])
                if (j != i) a += metric(points[i], points[j]);
            a /= static_cast<double>(members[l].size());
            double b = std::numeric_limits<double>::infinity();
            for (std::size_t m = 0; m < k; ++m) {
                if (m == l || members[m].empty()) continue;
                double avg = 0.0;
                for (std::size_t j : members[m]) avg += metric(points[i], points[j]);
                b = std::min(b, avg / static_cast<double>(members[m].size()));
            }
            const double denom = std::max(a, b);
            sum += denom > 0.0 ? (b - a) / denom : 0.0;
            ++used;
            ++res.sampled;
        }
        if (used > 0) {
            cluster_sum += sum / static_cast<double>(used);
            ++clusters_used;
        }
    }
    res.score = clusters_used > 0 ? cluster_sum / static_cast<double>(clusters_used) : 0.0;
    return res;
}

}  // namespace regime
