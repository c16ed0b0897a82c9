#include "regime/clustering.hpp"

#include <cmath>
#include <numeric>

namespace regime {

namespace {

// Reorder clusters so that `order[new_label]` = old label, then relabel
// assignments and centroids in place.
template <class Point>
void relabel(KMeansResult<Point>& res, const std::vector<int>& order) {
    std::vector<int> inverse(order.size());
    for (std::size_t c = 0; c < order.size(); ++c)
        inverse[static_cast<std::size_t>(order[c])] = static_cast<int>(c);
    for (int& a : res.assignments) a = inverse[static_cast<std::size_t>(a)];
    std::vector<Point> centroids(res.centroids.size());
    for (std::size_t c = 0; c < order.size(); ++c)
        centroids[c] = std::move(res.centroids[static_cast<std::size_t>(order[c])]);
    res.centroids = std::move(centroids);
}

template <class Point, class Key>
void canonicalize(KMeansResult<Point>& res, Key key) {
    std::vector<int> order(res.centroids.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return key(res.centroids[static_cast<std::size_t>(a)]) <
               key(res.centroids[static_cast<std::size_t>(b)]);
    });
    relabel(res, order);
}

}  // namespace

double euclidean(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

KMeansResult<EmpiricalMeasure> wk_means(const std::vector<EmpiricalMeasure>& measures,
                                        const KMeansConfig& cfg, double p) {
    if (measures.empty()) throw InvalidInput("wk_means: no measures");
    const std::size_t n_atoms = measures.front().size();
    for (const auto& mu : measures) {
        if (mu.size() != n_atoms) throw InvalidInput("wk_means: unequal atom counts");
        for (double a : mu.atoms)
            if (!std::isfinite(a)) throw InvalidInput("wk_means: non-finite atom");
    }
    auto metric = [p](const EmpiricalMeasure& a, const EmpiricalMeasure& b) {
        return wasserstein_distance(a, b, p);
    };
    auto aggregate = [p](const std::vector<EmpiricalMeasure>& pts,
                         const std::vector<int>& assignments, int cluster) {
        std::vector<EmpiricalMeasure> members;
        for (std::size_t i = 0; i < pts.size(); ++i)
            if (assignments[i] == cluster) members.push_back(pts[i]);
        return wasserstein_barycenter(members, p);
    };
    auto res = kmeans_generic(measures, cfg, metric, aggregate);
    canonicalize(res, [](const EmpiricalMeasure& c) { return c.variance(); });
    return res;
}

std::vector<std::vector<double>> standardized_moments(
    const std::vector<EmpiricalMeasure>& measures, int p_moments) {
    std::vector<std::vector<double>> rows;
    rows.reserve(measures.size());
    for (const auto& mu : measures) rows.push_back(moment_map(mu, p_moments));
    standardize_columns(rows);
    return rows;
}

KMeansResult<std::vector<double>> mk_means(const std::vector<EmpiricalMeasure>& measures,
                                           const KMeansConfig& cfg, int p_moments) {
    if (measures.size() < 2) throw InvalidInput("mk_means: need at least 2 measures");
    if (p_moments < 1) throw InvalidInput("mk_means: p_moments must be >= 1");
    auto rows = standardized_moments(measures, p_moments);
    for (const auto& r : rows)
        for (double x : r)
            if (!std::isfinite(x)) throw InvalidInput("mk_means: non-finite moment");
    auto aggregate = [](const std::vector<std::vector<double>>& pts,
                        const std::vector<int>& assignments, int cluster) {
        std::vector<double> mean(pts.front().size(), 0.0);
        std::size_t count = 0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (assignments[i] != cluster) continue;
            for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += pts[i][j];
            ++count;
        }
        for (double& m : mean) m /= static_cast<double>(count);
        return mean;
    };
    auto res = kmeans_generic(rows, cfg, euclidean, aggregate);
    canonicalize(res, [](const std::vector<double>& c) { return std::abs(c[0]); });
    return res;
}

}  // namespace regime
