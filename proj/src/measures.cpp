#include "regime/measures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace regime {

void PriceStream::validate() const {
    if (prices.size() < 2) throw InvalidInput("PriceStream: need at least 2 prices");
    if (!timestamps.empty() && timestamps.size() != prices.size())
        throw InvalidInput("PriceStream: timestamp/price length mismatch");
    for (double p : prices) {
        if (!(p > 0.0) || !std::isfinite(p))
            throw InvalidInput("PriceStream: non-positive or non-finite price");
    }
    // Integer timestamps compare numerically, anything else lexicographically.
    auto less = [](const std::string& a, const std::string& b) {
        char* ea = nullptr;
        char* eb = nullptr;
        long la = std::strtol(a.c_str(), &ea, 10);
        long lb = std::strtol(b.c_str(), &eb, 10);
        if (ea && *ea == '\0' && eb && *eb == '\0') return la < lb;
        return a < b;
    };
    for (std::size_t i = 1; i < timestamps.size(); ++i) {
        if (!less(timestamps[i - 1], timestamps[i]))
            throw InvalidInput("PriceStream: timestamps not strictly increasing at row " +
                               std::to_string(i));
    }
}

void WindowConfig::validate() const {
    if (h1 < 2) throw InvalidInput("WindowConfig: h1 must be >= 2");
    if (h2 >= h1) throw InvalidInput("WindowConfig: require h1 > h2 (stride > 0)");
}

double EmpiricalMeasure::cdf(double x) const {
    if (atoms.empty()) return 0.0;
    auto it = std::upper_bound(atoms.begin(), atoms.end(), x);
    return static_cast<double>(it - atoms.begin()) / static_cast<double>(atoms.size());
}

double EmpiricalMeasure::mean() const {
    double s = 0.0;
    for (double a : atoms) s += a;
    return atoms.empty() ? 0.0 : s / static_cast<double>(atoms.size());
}

double EmpiricalMeasure::variance() const {
    if (atoms.empty()) return 0.0;
    const double m = mean();
    double s = 0.0;
    for (double a : atoms) s += (a - m) * (a - m);
    return s / static_cast<double>(atoms.size());
}

ReturnStream log_returns(const PriceStream& prices) {
    if (prices.size() < 2) throw InvalidInput("log_returns: need at least 2 prices");
    for (double p : prices.prices)
        if (!(p > 0.0)) throw InvalidInput("log_returns: non-positive price");
    ReturnStream out(prices.size() - 1);
    for (std::size_t i = 0; i + 1 < prices.size(); ++i)
        out[i] = std::log(prices.prices[i + 1]) - std::log(prices.prices[i]);
    return out;
}

std::vector<IndexRange> lift(const ReturnStream& returns, const WindowConfig& cfg) {
    cfg.validate();
    const std::size_t n = returns.size();
    if (n < cfg.h1) throw InvalidInput("lift: return stream shorter than window length");
    std::vector<IndexRange> windows;
    for (std::size_t start = 0; start + cfg.h1 <= n; start += cfg.stride())
        windows.push_back({start, start + cfg.h1});
    return windows;
}

EmpiricalMeasure empirical_measure(const ReturnStream& returns, const IndexRange& window) {
    if (window.end > returns.size() || window.begin >= window.end)
        throw InvalidInput("empirical_measure: window out of bounds");
    EmpiricalMeasure mu;
    mu.atoms.assign(returns.begin() + static_cast<std::ptrdiff_t>(window.begin),
                    returns.begin() + static_cast<std::ptrdiff_t>(window.end));
    std::sort(mu.atoms.begin(), mu.atoms.end());
    mu.source_span = window;
    return mu;
}

std::vector<EmpiricalMeasure> measures_from_returns(const ReturnStream& returns,
                                                    const WindowConfig& cfg) {
    std::vector<EmpiricalMeasure> out;
    for (const IndexRange& w : lift(returns, cfg)) out.push_back(empirical_measure(returns, w));
    return out;
}

std::vector<double> moment_map(const EmpiricalMeasure& mu, int p) {
    if (p < 1) throw InvalidInput("moment_map: p must be >= 1");
    std::vector<double> out(static_cast<std::size_t>(p), 0.0);
    const double inv_n = 1.0 / static_cast<double>(mu.atoms.size());
    double factorial = 1.0;
    for (int n = 1; n <= p; ++n) {
        factorial *= n;
        double raw = 0.0;
        for (double a : mu.atoms) raw += std::pow(a, n);
        out[static_cast<std::size_t>(n - 1)] = raw * inv_n / factorial;
    }
    return out;
}

void standardize_columns(std::vector<std::vector<double>>& rows) {
    if (rows.size() < 2) throw InvalidInput("standardize_columns: need at least 2 rows");
    const std::size_t cols = rows.front().size();
    for (const auto& r : rows)
        if (r.size() != cols) throw InvalidInput("standardize_columns: ragged matrix");
    const double inv_m = 1.0 / static_cast<double>(rows.size());
    for (std::size_t j = 0; j < cols; ++j) {
        double mean = 0.0;
        for (const auto& r : rows) mean += r[j];
        mean *= inv_m;
        double var = 0.0;
        for (const auto& r : rows) var += (r[j] - mean) * (r[j] - mean);
        var *= inv_m;
        if (var <= 0.0) {
            for (auto& r : rows) r[j] = 0.0;
        } else {
            const double inv_sd = 1.0 / std::sqrt(var);
            for (auto& r : rows) r[j] = (r[j] - mean) * inv_sd;
        }
    }
}

MeanSd mean_variance_projection(const EmpiricalMeasure& mu) {
    return {std::sqrt(mu.variance()), mu.mean()};
}

}  // namespace regime
