#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "regime/errors.hpp"

namespace regime {

struct GaussianHmm {
    int k = 2;
    std::vector<double> initial;                 // length k, sums to 1
    std::vector<std::vector<double>> transition; // k x k, rows sum to 1
    std::vector<double> mean;                    // per-state emission mean
    std::vector<double> variance;                // per-state emission variance

    void validate() const;
};

struct HmmFitConfig {
    int max_em_iterations = 200;
    double tolerance = 1e-6;  // on log-likelihood improvement
    std::uint64_t seed = 0;
    double variance_floor = 1e-12;
};

struct HmmFit {
    GaussianHmm model;
    std::vector<double> loglik_trace;
    bool converged = false;
    bool emission_floored = false;  // a state's variance hit the floor
};

// Baum-Welch EM with per-step scaled forward-backward recursions.
// Initialization is deterministic: states start from a k-quantile split of
// the returns by absolute value, uniform initial distribution, and a
// transition matrix with 0.9 on the diagonal.
HmmFit fit_gaussian_hmm(std::span<const double> returns, int k, const HmmFitConfig& cfg);

// Viterbi maximum-a-posteriori state path, in log-space.
std::vector<int> decode(const GaussianHmm& hmm, std::span<const double> returns);

// Relabel states so state 0 has the lowest emission variance; returns the
// permutation applied (new2old).
std::vector<int> canonicalize_by_variance(GaussianHmm& hmm);

}  // namespace regime
