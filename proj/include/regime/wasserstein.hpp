#pragma once

#include <span>
#include <vector>

#include "regime/measures.hpp"

namespace regime {

// p-Wasserstein distance between two empirical measures with uniform weights.
//
// Equal atom counts use the sorted-atom formula ((1/N) sum |a_i - b_i|^p)^(1/p).
// Unequal counts fall back to exact piecewise-constant quantile integration
// over the merged breakpoint grid {i/N} u {j/M}.
double wasserstein_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p);

// Same, without the final 1/p root. This is the form used inside k-means
// inner loops; the root is applied once at the boundary.
double wasserstein_distance_pow(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p);

// Exact small-instance optimal-transport solver, used as an independent
// test oracle. Equal atom counts are solved by enumerating permutation
// couplings (Birkhoff extreme points); unequal counts by expanding both
// sides to a common unit mass and running an exact assignment solver.
// Rejects instances with more than 8 atoms per side.
double ot_oracle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p);

// Barycenter of measures with equal atom counts: coordinate-wise median of
// order statistics for p=1 (even counts take the midpoint of the two central
// values), coordinate-wise mean for p=2.
EmpiricalMeasure wasserstein_barycenter(std::span<const EmpiricalMeasure> measures, double p);

}  // namespace regime
