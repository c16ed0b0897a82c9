#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "regime/errors.hpp"

namespace regime {

// Hourly mesh: 252 trading days x 7 hours per year.
inline constexpr long kStepsPerYear = 252 * 7;

// Disjoint regime-change intervals over a step mesh. Step i is regime-on
// iff s <= i < s + l for some interval (half-open convention).
struct RegimeSchedule {
    long total_steps = 0;
    std::vector<std::pair<long, long>> intervals;  // (start, length)

    bool on(long step) const;
    long on_steps() const;
    void validate() const;
};

struct SchedulePolicy {
    bool random_length = false;
    long fixed_length = 882;  // 0.5 * 252 * 7
    long min_length = 441;    // only used when random_length
    long max_length = 1323;
};

// r disjoint intervals with starts drawn uniformly, rejection-sampled until
// the spacing constraint s_i + l_i + 2 < s_{i+1} holds.
RegimeSchedule build_schedule(double t_years, int r, const SchedulePolicy& policy,
                              std::uint64_t seed);

struct GbmParams {
    double mu = 0.0;     // drift per year
    double sigma = 0.2;  // volatility per sqrt(year)

    void validate() const {
        if (!(sigma > 0.0)) throw InvalidInput("GbmParams: sigma must be > 0");
    }
};

struct MertonParams {
    double mu = 0.0;
    double sigma = 0.2;
    double lambda = 1.0;  // jump intensity per year
    double gamma = 0.0;   // jump log-mean
    double delta = 0.1;   // jump log-sd

    void validate() const {
        if (!(sigma > 0.0) || !(lambda > 0.0) || !(delta > 0.0))
            throw InvalidInput("MertonParams: sigma, lambda, delta must be > 0");
    }
};

struct PathRecord {
    std::vector<double> prices;  // total_steps + 1 entries
    RegimeSchedule schedule;
    std::string model;  // "gbm" or "merton"
    std::uint64_t seed = 0;
};

// Exact log-Euler scheme; regime-on steps use the bear parameters.
PathRecord simulate_gbm(const RegimeSchedule& schedule, const GbmParams& bull,
                        const GbmParams& bear, double s0, std::uint64_t seed);

// Log-increment = (mu - sigma^2/2) dt + sigma sqrt(dt) Z + sum of K ~ Po(lambda dt)
// jumps, each Normal(gamma, delta^2).
PathRecord simulate_merton(const RegimeSchedule& schedule, const MertonParams& bull,
                           const MertonParams& bear, double s0, std::uint64_t seed);

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments true_moments(const GbmParams& params, double dt);
Moments true_moments(const MertonParams& params, double dt);

// Counter-based generator: an independent deterministic draw stream per
// (seed, step), so per-step increments can be regenerated in isolation.
class StepRng {
  public:
    StepRng(std::uint64_t seed, std::uint64_t step);

    std::uint64_t next_u64();
    double uniform();      // in (0, 1]
    double normal();       // standard normal (Box-Muller, two uniforms per call)
    long poisson(double lambda);

  private:
    std::uint64_t state_;
};

}  // namespace regime
