#include "regime/validation.hpp"

#include <cmath>

namespace regime {

namespace {

double squared_norm_diff(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += (x[i] - y[i]) * (x[i] - y[i]);
    return s;
}

double median_of(std::vector<double> v) {
    const std::size_t m = v.size();
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(m / 2);
    std::nth_element(v.begin(), mid, v.end());
    if (m % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

// Squared biased MMD with n = m = 1 whole-vector samples:
// k(x,x) - 2 k(x,y) + k(y,y) = 2 - 2 k(x,y).
double pair_squared_mmd(std::span<const double> x, std::span<const double> y, double sigma) {
    return 2.0 - 2.0 * gaussian_kernel(x, y, sigma);
}

// Draw index pairs without replacement within a batch of all candidate
// pairs, falling back to replacement across batches when n_pairs exceeds
// the number of unique pairs.
template <class Emit>
void sample_pairs(std::size_t n_left, std::size_t n_right, bool cross,
                  const MmdSamplingConfig& cfg, Emit emit) {
    std::vector<std::pair<std::size_t, std::size_t>> pool;
    if (cross) {
        pool.reserve(n_left * n_right);
        for (std::size_t i = 0; i < n_left; ++i)
            for (std::size_t j = 0; j < n_right; ++j) pool.emplace_back(i, j);
    } else {
        pool.reserve(n_left * (n_left - 1) / 2);
        for (std::size_t i = 0; i < n_left; ++i)
            for (std::size_t j = i + 1; j < n_left; ++j) pool.emplace_back(i, j);
    }
    std::mt19937_64 rng(cfg.seed);
    std::size_t remaining = cfg.n_pairs;
    while (remaining > 0) {
        std::shuffle(pool.begin(), pool.end(), rng);
        const std::size_t batch = std::min(remaining, pool.size());
        for (std::size_t t = 0; t < batch; ++t) emit(pool[t].first, pool[t].second);
        remaining -= batch;
    }
}

std::vector<std::vector<double>> sorted_vectors(const std::vector<EmpiricalMeasure>& ms) {
    std::vector<std::vector<double>> out;
    out.reserve(ms.size());
    for (const auto& mu : ms) out.push_back(mu.atoms);  // atoms already sorted
    return out;
}

}  // namespace

double gaussian_kernel(std::span<const double> x, std::span<const double> y, double sigma) {
    if (x.size() != y.size()) throw InvalidInput("gaussian_kernel: length mismatch");
    if (!(sigma > 0.0)) throw InvalidInput("gaussian_kernel: sigma must be > 0");
    return std::exp(-squared_norm_diff(x, y) / (2.0 * sigma * sigma));
}

double mmd_biased(const std::vector<std::vector<double>>& x_in,
                  const std::vector<std::vector<double>>& y_in, const KernelConfig& kcfg) {
    kcfg.validate();
    if (x_in.empty() || y_in.empty()) throw InvalidInput("mmd_biased: empty sample");
    // Canonicalize the argument order so the cross-kernel sum accumulates in
    // the same sequence either way, keeping symmetry exact in floating point.
    const bool swap = y_in < x_in;
    const auto& x = swap ? y_in : x_in;
    const auto& y = swap ? x_in : y_in;
    const double n = static_cast<double>(x.size());
    const double m = static_cast<double>(y.size());
    double kxx = 0.0, kyy = 0.0, kxy = 0.0;
    for (const auto& a : x)
        for (const auto& b : x) kxx += gaussian_kernel(a, b, kcfg.sigma);
    for (const auto& a : y)
        for (const auto& b : y) kyy += gaussian_kernel(a, b, kcfg.sigma);
    for (const auto& a : x)
        for (const auto& b : y) kxy += gaussian_kernel(a, b, kcfg.sigma);
    const double sq = kxx / (n * n) - 2.0 * kxy / (n * m) + kyy / (m * m);
    // Nonnegative in exact arithmetic; clamp rounding error before the root.
    return std::sqrt(std::max(sq, 0.0));
}

SimilarityScore within_cluster_similarity(const std::vector<std::vector<double>>& cluster,
                                          const MmdSamplingConfig& cfg,
                                          const KernelConfig& kcfg) {
    cfg.validate();
    kcfg.validate();
    if (cluster.size() < 2) throw InvalidInput("within_cluster_similarity: cluster too small");
    std::vector<std::vector<double>> repr = cluster;
    if (cfg.ordered)
        for (auto& v : repr) std::sort(v.begin(), v.end());
    SimilarityScore out;
    out.histogram.reserve(cfg.n_pairs);
    sample_pairs(repr.size(), 0, false, cfg, [&](std::size_t i, std::size_t j) {
        out.histogram.push_back(pair_squared_mmd(repr[i], repr[j], kcfg.sigma));
    });
    out.score = median_of(out.histogram);
    return out;
}

SimilarityScore between_cluster_mmd(const std::vector<std::vector<double>>& c1,
                                    const std::vector<std::vector<double>>& c2,
                                    const MmdSamplingConfig& cfg, const KernelConfig& kcfg) {
    cfg.validate();
    kcfg.validate();
    if (c1.empty() || c2.empty()) throw InvalidInput("between_cluster_mmd: empty cluster");
    std::vector<std::vector<double>> a = c1, b = c2;
    if (cfg.ordered) {
        for (auto& v : a) std::sort(v.begin(), v.end());
        for (auto& v : b) std::sort(v.begin(), v.end());
    }
    SimilarityScore out;
    out.histogram.reserve(cfg.n_pairs);
    sample_pairs(a.size(), b.size(), true, cfg, [&](std::size_t i, std::size_t j) {
        out.histogram.push_back(pair_squared_mmd(a[i], b[j], kcfg.sigma));
    });
    out.score = median_of(out.histogram);
    return out;
}

SimilarityScore within_cluster_similarity(const std::vector<EmpiricalMeasure>& cluster,
                                          const MmdSamplingConfig& cfg,
                                          const KernelConfig& kcfg) {
    return within_cluster_similarity(sorted_vectors(cluster), cfg, kcfg);
}

SimilarityScore between_cluster_mmd(const std::vector<EmpiricalMeasure>& c1,
                                    const std::vector<EmpiricalMeasure>& c2,
                                    const MmdSamplingConfig& cfg, const KernelConfig& kcfg) {
    return between_cluster_mmd(sorted_vectors(c1), sorted_vectors(c2), cfg, kcfg);
}

}  // namespace regime
