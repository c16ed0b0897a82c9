#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "regime/errors.hpp"

namespace regime {

// A price path: strictly increasing timestamps, positive prices.
// Timestamps are kept as strings so that both ISO-8601 stamps and plain
// integer step indexes round-trip through CSV unchanged.
struct PriceStream {
    std::vector<std::string> timestamps;
    std::vector<double> prices;

    // Throws InvalidInput if any invariant fails.
    void validate() const;

    std::size_t size() const { return prices.size(); }
};

using ReturnStream = std::vector<double>;

// Sliding-window parameters: window length h1, overlap h2.
// The stride between consecutive windows is h1 - h2.
struct WindowConfig {
    std::size_t h1 = 35;
    std::size_t h2 = 28;

    void validate() const;
    std::size_t stride() const { return h1 - h2; }
    // Largest number of windows any single return can belong to.
    std::size_t max_multiplicity() const { return (h1 + stride() - 1) / stride(); }
};

// Half-open index range [begin, end) into a return stream.
struct IndexRange {
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t length() const { return end - begin; }
};

// A return-window distribution, stored as its order statistics.
struct EmpiricalMeasure {
    std::vector<double> atoms;  // sorted non-decreasing
    IndexRange source_span;     // originating return indexes

    std::size_t size() const { return atoms.size(); }
    // Empirical CDF: fraction of atoms <= x.
    double cdf(double x) const;
    double mean() const;
    double variance() const;  // population convention (divide by count)
};

ReturnStream log_returns(const PriceStream& prices);

// Window start indexes for the (h1, h2) lift. Windows that would run past
// the end of the stream are dropped so every window has exactly h1 returns.
std::vector<IndexRange> lift(const ReturnStream& returns, const WindowConfig& cfg);

EmpiricalMeasure empirical_measure(const ReturnStream& returns, const IndexRange& window);

// Convenience: lift + empirical_measure over every window.
std::vector<EmpiricalMeasure> measures_from_returns(const ReturnStream& returns,
                                                    const WindowConfig& cfg);

// First p raw moments, each divided by n!.
std::vector<double> moment_map(const EmpiricalMeasure& mu, int p);

// In-place column standardization to mean 0, population variance 1.
// Constant columns map to all-zero.
void standardize_columns(std::vector<std::vector<double>>& rows);

struct MeanSd {
    double sd = 0.0;
    double mean = 0.0;
};

MeanSd mean_variance_projection(const EmpiricalMeasure& mu);

}  // namespace regime
