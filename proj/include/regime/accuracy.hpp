#pragma once

#include <vector>

#include "regime/measures.hpp"
#include "regime/synthetic.hpp"

namespace regime {

// Per-return membership counts: counts[i][l] = number of windows covering
// return i whose cluster label is l. Returns outside every window get an
// all-zero row and are excluded from scoring.
std::vector<std::vector<int>> membership_vectors(const std::vector<IndexRange>& windows,
                                                 const std::vector<int>& assignments,
                                                 std::size_t n_returns, int k);

struct AccuracyReport {
    double total = 0.0;       // TA
    double regime_on = 0.0;   // RONS
    double regime_off = 0.0;  // ROFS
    std::size_t uncovered_returns = 0;
};

// Cluster 0 is taken as the standard regime, cluster 1 as the regime change
// (canonicalized upstream by centroid variance). Return i is regime-on iff
// step i of the schedule is inside a change interval.
AccuracyReport accuracy_scores(const std::vector<std::vector<int>>& memberships,
                               const RegimeSchedule& schedule);

// Normalized membership fractions for historical colouring; uncovered
// returns yield all-zero rows.
std::vector<std::vector<double>> colouring_series(
    const std::vector<std::vector<int>>& memberships);

}  // namespace regime
