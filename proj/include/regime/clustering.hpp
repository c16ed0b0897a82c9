#pragma once

#include <vector>

#include "regime/kmeans.hpp"
#include "regime/measures.hpp"
#include "regime/wasserstein.hpp"

namespace regime {

// k-means on empirical measures under W_p with barycenter aggregation.
// Cluster 0 of the result is the centroid with the lower atom variance
// (the "standard regime" orientation used by accuracy scoring).
KMeansResult<EmpiricalMeasure> wk_means(const std::vector<EmpiricalMeasure>& measures,
                                        const KMeansConfig& cfg, double p);

// k-means on standardized raw-moment vectors under the Euclidean metric.
// Cluster 0 is the centroid with the smaller |first standardized moment|.
KMeansResult<std::vector<double>> mk_means(const std::vector<EmpiricalMeasure>& measures,
                                           const KMeansConfig& cfg, int p_moments);

// The standardized moment matrix MK-means clusters on (exposed for reports).
std::vector<std::vector<double>> standardized_moments(
    const std::vector<EmpiricalMeasure>& measures, int p_moments);

double euclidean(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace regime
