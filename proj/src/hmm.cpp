#include "regime/hmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace regime {

namespace {

double log_gauss(double x, double mean, double var) {
    const double d = x - mean;
    return -0.5 * (std::log(2.0 * M_PI * var) + d * d / var);
}

GaussianHmm initialize(std::span<const double> returns, int k, double var_floor) {
    // k-quantile split by absolute value: low-|r| states first.
    std::vector<double> sorted(returns.begin(), returns.end());
    std::sort(sorted.begin(), sorted.end(),
              [](double a, double b) { return std::abs(a) < std::abs(b); });
    GaussianHmm hmm;
    hmm.k = k;
    hmm.initial.assign(static_cast<std::size_t>(k), 1.0 / k);
    hmm.transition.assign(static_cast<std::size_t>(k),
                          std::vector<double>(static_cast<std::size_t>(k),
                                              k > 1 ? 0.1 / (k - 1) : 1.0));
    if (k > 1)
        for (int i = 0; i < k; ++i)
            hmm.transition[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 0.9;
    hmm.mean.resize(static_cast<std::size_t>(k));
    hmm.variance.resize(static_cast<std::size_t>(k));
    const std::size_t n = sorted.size();
    for (int s = 0; s < k; ++s) {
        const std::size_t lo = n * static_cast<std::size_t>(s) / static_cast<std::size_t>(k);
        const std::size_t hi = n * static_cast<std::size_t>(s + 1) / static_cast<std::size_t>(k);
        double mean = 0.0;
        for (std::size_t i = lo; i < hi; ++i) mean += sorted[i];
        mean /= static_cast<double>(hi - lo);
        double var = 0.0;
        for (std::size_t i = lo; i < hi; ++i) var += (sorted[i] - mean) * (sorted[i] - mean);
        var /= static_cast<double>(hi - lo);
        hmm.mean[static_cast<std::size_t>(s)] = mean;
        hmm.variance[static_cast<std::size_t>(s)] = std::max(var, var_floor);
    }
    return hmm;
}

}  // namespace

void GaussianHmm::validate() const {
    double pi_sum = 0.0;
    for (double p : initial) pi_sum += p;
    if (std::abs(pi_sum - 1.0) > 1e-10)
        throw InvalidInput("GaussianHmm: initial distribution does not sum to 1");
    for (const auto& row : transition) {
        double s = 0.0;
        for (double p : row) s += p;
        if (std::abs(s - 1.0) > 1e-10)
            throw InvalidInput("GaussianHmm: transition row does not sum to 1");
    }
    for (double v : variance)
        if (!(v > 0.0)) throw InvalidInput("GaussianHmm: non-positive variance");
}

HmmFit fit_gaussian_hmm(std::span<const double> returns, int k, const HmmFitConfig& cfg) {
    const std::size_t t_max = returns.size();
    if (k < 1) throw InvalidInput("fit_gaussian_hmm: k must be >= 1");
    if (t_max < 10 * static_cast<std::size_t>(k))
        throw InvalidInput("fit_gaussian_hmm: need at least 10*k observations");

    HmmFit fit;
    fit.model = initialize(returns, k, cfg.variance_floor);
    const std::size_t ks = static_cast<std::size_t>(k);

    std::vector<std::vector<double>> emit(t_max, std::vector<double>(ks));
    std::vector<std::vector<double>> alpha(t_max, std::vector<double>(ks));
    std::vector<std::vector<double>> beta(t_max, std::vector<double>(ks));
    std::vector<double> scale(t_max);

    double prev_ll = -std::numeric_limits<double>::infinity();
    for (int iter = 0; iter < cfg.max_em_iterations; ++iter) {
        auto& m = fit.model;
        for (std::size_t t = 0; t < t_max; ++t)
            for (std::size_t s = 0; s < ks; ++s)
                emit[t][s] = std::exp(log_gauss(returns[t], m.mean[s], m.variance[s]));

        // Scaled forward pass.
        double ll = 0.0;
        for (std::size_t s = 0; s < ks; ++s) alpha[0][s] = m.initial[s] * emit[0][s];
        for (std::size_t t = 0; t < t_max; ++t) {
            if (t > 0) {
                for (std::size_t s = 0; s < ks; ++s) {
                    double acc = 0.0;
                    for (std::size_t r = 0; r < ks; ++r)
                        acc += alpha[t - 1][r] * m.transition[r][s];
                    alpha[t][s] = acc * emit[t][s];
                }
            }
            double c = 0.0;
            for (std::size_t s = 0; s < ks; ++s) c += alpha[t][s];
            if (!(c > 0.0)) throw NumericalFailure("fit_gaussian_hmm: zero forward mass");
            scale[t] = 1.0 / c;
            for (std::size_t s = 0; s < ks; ++s) alpha[t][s] *= scale[t];
            ll -= std::log(scale[t]);
        }

        // Scaled backward pass.
        for (std::size_t s = 0; s < ks; ++s) beta[t_max - 1][s] = scale[t_max - 1];
        for (std::size_t t = t_max - 1; t-- > 0;) {
            for (std::size_t s = 0; s < ks; ++s) {
                double acc = 0.0;
                for (std::size_t r = 0; r < ks; ++r)
                    acc += m.transition[s][r] * emit[t + 1][r] * beta[t + 1][r];
                beta[t][s] = acc * scale[t];
            }
        }

        // Accumulate sufficient statistics.
        std::vector<double> gamma_sum(ks, 0.0), mean_num(ks, 0.0);
        std::vector<double> gamma0(ks, 0.0), gamma_sum_no_last(ks, 0.0);
        std::vector<std::vector<double>> xi_sum(ks, std::vector<double>(ks, 0.0));
        std::vector<std::vector<double>> gamma(t_max, std::vector<double>(ks));
        for (std::size_t t = 0; t < t_max; ++t) {
            double norm = 0.0;
            for (std::size_t s = 0; s < ks; ++s) {
                gamma[t][s] = alpha[t][s] * beta[t][s] / scale[t];
                norm += gamma[t][s];
            }
            for (std::size_t s = 0; s < ks; ++s) {
                gamma[t][s] /= norm;
                gamma_sum[s] += gamma[t][s];
                mean_num[s] += gamma[t][s] * returns[t];
            }
        }
        for (std::size_t s = 0; s < ks; ++s) {
            gamma0[s] = gamma[0][s];
            gamma_sum_no_last[s] = gamma_sum[s] - gamma[t_max - 1][s];
        }
        for (std::size_t t = 0; t + 1 < t_max; ++t)
            for (std::size_t s = 0; s < ks; ++s)
                for (std::size_t r = 0; r < ks; ++r)
                    xi_sum[s][r] +=
                        alpha[t][s] * m.transition[s][r] * emit[t + 1][r] * beta[t + 1][r];

        // M-step.
        for (std::size_t s = 0; s < ks; ++s) {
            m.initial[s] = gamma0[s];
            if (gamma_sum_no_last[s] > 0.0) {
                for (std::size_t r = 0; r < ks; ++r)
                    m.transition[s][r] = xi_sum[s][r] / gamma_sum_no_last[s];
            }
            // Renormalize against scaling round-off.
            double row = 0.0;
            for (double v : m.transition[s]) row += v;
            for (double& v : m.transition[s]) v /= row;

            if (!(gamma_sum[s] > 0.0)) {
                fit.emission_floored = true;
                continue;
            }
            m.mean[s] = mean_num[s] / gamma_sum[s];
            double var_num = 0.0;
            for (std::size_t t = 0; t < t_max; ++t) {
                const double d = returns[t] - m.mean[s];
                var_num += gamma[t][s] * d * d;
            }
            double var = var_num / gamma_sum[s];
            if (var < cfg.variance_floor) {
                var = cfg.variance_floor;
                fit.emission_floored = true;
            }
            m.variance[s] = var;
        }

        fit.loglik_trace.push_back(ll);
        if (iter > 0 && ll - prev_ll < cfg.tolerance) {
            fit.converged = true;
            break;
        }
        prev_ll = ll;
    }
    return fit;
}

std::vector<int> decode(const GaussianHmm& hmm, std::span<const double> returns) {
    hmm.validate();
    const std::size_t ks = static_cast<std::size_t>(hmm.k);
    const std::size_t t_max = returns.size();
    if (t_max == 0) return {};
    constexpr double neg_inf = -std::numeric_limits<double>::infinity();

    std::vector<std::vector<double>> delta(t_max, std::vector<double>(ks, neg_inf));
    std::vector<std::vector<int>> back(t_max, std::vector<int>(ks, 0));
    std::vector<std::vector<double>> log_a(ks, std::vector<double>(ks));
    for (std::size_t s = 0; s < ks; ++s)
        for (std::size_t r = 0; r < ks; ++r)
            log_a[s][r] = hmm.transition[s][r] > 0.0 ? std::log(hmm.transition[s][r]) : neg_inf;

    for (std::size_t s = 0; s < ks; ++s)
        delta[0][s] = (hmm.initial[s] > 0.0 ? std::log(hmm.initial[s]) : neg_inf) +
                      log_gauss(returns[0], hmm.mean[s], hmm.variance[s]);
    for (std::size_t t = 1; t < t_max; ++t) {
        for (std::size_t s = 0; s < ks; ++s) {
            double best = neg_inf;
            int arg = 0;
            for (std::size_t r = 0; r < ks; ++r) {
                const double v = delta[t - 1][r] + log_a[r][s];
                if (v > best) {
                    best = v;
                    arg = static_cast<int>(r);
                }
            }
            delta[t][s] = best + log_gauss(returns[t], hmm.mean[s], hmm.variance[s]);
            back[t][s] = arg;
        }
    }
    std::vector<int> path(t_max);
    path[t_max - 1] = static_cast<int>(
        std::max_element(delta[t_max - 1].begin(), delta[t_max - 1].end()) -
        delta[t_max - 1].begin());
    for (std::size_t t = t_max - 1; t-- > 0;)
        path[t] = back[t + 1][static_cast<std::size_t>(path[t + 1])];
    return path;
}

std::vector<int> canonicalize_by_variance(GaussianHmm& hmm) {
    std::vector<int> order(static_cast<std::size_t>(hmm.k));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return hmm.variance[static_cast<std::size_t>(a)] <
               hmm.variance[static_cast<std::size_t>(b)];
    });
    GaussianHmm out = hmm;
    for (std::size_t s = 0; s < order.size(); ++s) {
        const std::size_t o = static_cast<std::size_t>(order[s]);
        out.initial[s] = hmm.initial[o];
        out.mean[s] = hmm.mean[o];
        out.variance[s] = hmm.variance[o];
        for (std::size_t r = 0; r < order.size(); ++r)
            out.transition[s][r] = hmm.transition[o][static_cast<std::size_t>(order[r])];
    }
    hmm = std::move(out);
    return order;
}

}  // namespace regime
