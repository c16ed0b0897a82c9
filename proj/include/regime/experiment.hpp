#pragma once

#include <optional>
#include <string>
#include <vector>

#include "regime/accuracy.hpp"
#include "regime/clustering.hpp"
#include "regime/hmm.hpp"
#include "regime/measures.hpp"
#include "regime/synthetic.hpp"

namespace regime {

enum class Algorithm { WkMeans, MkMeans, Hmm };

Algorithm algorithm_from_name(const std::string& name);
std::string algorithm_name(Algorithm a);

struct RunConfig {
    WindowConfig window{35, 28};
    KMeansConfig kmeans;
    double wasserstein_p = 1.0;
    int p_moments = 4;
    HmmFitConfig hmm;
};

// Result of running one algorithm over one return stream, mapped back to
// per-return membership counts (windows for the k-means methods, a
// window-majority vote plus the raw per-return path for the HMM).
struct RunOutput {
    Algorithm algorithm = Algorithm::WkMeans;
    std::vector<IndexRange> windows;
    std::vector<int> window_labels;
    std::vector<std::vector<int>> memberships;  // per-return counts
    std::optional<KMeansResult<EmpiricalMeasure>> wk;
    std::optional<KMeansResult<std::vector<double>>> mk;
    std::optional<HmmFit> hmm;
    std::vector<int> hmm_return_labels;  // per-return Viterbi path (HMM only)
};

RunOutput run_algorithm(const ReturnStream& returns, Algorithm algorithm,
                        const RunConfig& cfg);

// Accuracy of a run against a known schedule (per-return membership scoring).
AccuracyReport score_run(const RunOutput& out, const RegimeSchedule& schedule);

// Direct per-return scoring for the HMM path (each return counted once).
AccuracyReport score_hmm_returns(const std::vector<int>& labels,
                                 const RegimeSchedule& schedule);

struct AggregateStats {
    double mean = 0.0;
    double ci95 = 0.0;  // normal-approximation half-width
};

AggregateStats aggregate(const std::vector<double>& values);

}  // namespace regime
