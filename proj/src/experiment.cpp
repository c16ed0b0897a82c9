#include "regime/experiment.hpp"

#include <cmath>

namespace regime {

Algorithm algorithm_from_name(const std::string& name) {
    if (name == "wkmeans") return Algorithm::WkMeans;
    if (name == "mkmeans") return Algorithm::MkMeans;
    if (name == "hmm") return Algorithm::Hmm;
    throw InvalidInput("unknown algorithm: " + name);
}

std::string algorithm_name(Algorithm a) {
    switch (a) {
        case Algorithm::WkMeans: return "wkmeans";
        case Algorithm::MkMeans: return "mkmeans";
        case Algorithm::Hmm: return "hmm";
    }
    throw InvalidInput("bad algorithm enum");
}

RunOutput run_algorithm(const ReturnStream& returns, Algorithm algorithm,
                        const RunConfig& cfg) {
    RunOutput out;
    out.algorithm = algorithm;
    out.windows = lift(returns, cfg.window);

    if (algorithm == Algorithm::Hmm) {
        HmmFitConfig hmm_cfg = cfg.hmm;
        hmm_cfg.seed = cfg.kmeans.seed;
        out.hmm = fit_gaussian_hmm(returns, cfg.kmeans.k, hmm_cfg);
        canonicalize_by_variance(out.hmm->model);
        out.hmm_return_labels = decode(out.hmm->model, returns);
        // Accuracy convention: the lowest-variance state scores as regime
        // label 1, everything else as the standard regime; swap labels 0/1
        // after the variance-ascending canonicalization.
        for (int& label : out.hmm_return_labels) {
            if (label == 0)
                label = 1;
            else if (label == 1)
                label = 0;
        }
        // Window labels by majority vote so HMM results flow through the
        // same membership scoring as the clustering methods.
        out.window_labels.reserve(out.windows.size());
        for (const IndexRange& w : out.windows) {
            std::vector<int> votes(static_cast<std::size_t>(cfg.kmeans.k), 0);
            for (std::size_t i = w.begin; i < w.end; ++i)
                ++votes[static_cast<std::size_t>(out.hmm_return_labels[i])];
            int best = 0;
            for (int c = 1; c < cfg.kmeans.k; ++c)
                if (votes[static_cast<std::size_t>(c)] > votes[static_cast<std::size_t>(best)])
                    best = c;
            out.window_labels.push_back(best);
        }
    } else {
        std::vector<EmpiricalMeasure> measures;
        measures.reserve(out.windows.size());
        for (const IndexRange& w : out.windows)
            measures.push_back(empirical_measure(returns, w));
        if (algorithm == Algorithm::WkMeans) {
            out.wk = wk_means(measures, cfg.kmeans, cfg.wasserstein_p);
            out.window_labels = out.wk->assignments;
        } else {
            out.mk = mk_means(measures, cfg.kmeans, cfg.p_moments);
            out.window_labels = out.mk->assignments;
        }
    }
    out.memberships =
        membership_vectors(out.windows, out.window_labels, returns.size(), cfg.kmeans.k);
    return out;
}

AccuracyReport score_run(const RunOutput& out, const RegimeSchedule& schedule) {
    return accuracy_scores(out.memberships, schedule);
}

AccuracyReport score_hmm_returns(const std::vector<int>& labels,
                                 const RegimeSchedule& schedule) {
    std::vector<std::vector<int>> memberships(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        memberships[i].assign(2, 0);
        memberships[i][labels[i] == 0 ? 0 : 1] = 1;
    }
    return accuracy_scores(memberships, schedule);
}

AggregateStats aggregate(const std::vector<double>& values) {
    AggregateStats s;
    if (values.empty()) return s;
    for (double v : values) s.mean += v;
    s.mean /= static_cast<double>(values.size());
    if (values.size() > 1) {
        double var = 0.0;
        for (double v : values) var += (v - s.mean) * (v - s.mean);
        var /= static_cast<double>(values.size() - 1);
        s.ci95 = 1.96 * std::sqrt(var / static_cast<double>(values.size()));
    }
    return s;
}

}  // namespace regime
