#include "regime/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace regime {

namespace {

std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

StepRng::StepRng(std::uint64_t seed, std::uint64_t step)
    : state_(mix64(mix64(seed) ^ mix64(step * 0xd6e8feb86659fd93ULL + 1))) {}

std::uint64_t StepRng::next_u64() {
    state_ = mix64(state_);
    return state_;
}

double StepRng::uniform() {
    // Map to (0, 1]: never returns 0, so log(uniform()) is always finite.
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
}

double StepRng::normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

long StepRng::poisson(double lambda) {
    // Inversion by sequential search; lambda is tiny (per-step intensity).
    double p = std::exp(-lambda);
    double cdf = p;
    const double u = uniform();
    long k = 0;
    while (u > cdf && k < 10000) {
        ++k;
        p *= lambda / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

bool RegimeSchedule::on(long step) const {
    for (const auto& [s, l] : intervals)
        if (step >= s && step < s + l) return true;
    return false;
}

long RegimeSchedule::on_steps() const {
    long total = 0;
    for (const auto& [s, l] : intervals) total += l;
    return total;
}

void RegimeSchedule::validate() const {
    long prev_end = -1;
    bool first = true;
    for (const auto& [s, l] : intervals) {
        if (s < 0 || l <= 0) throw InvalidInput("RegimeSchedule: bad interval");
        if (!first && !(prev_end + 2 < s))
            throw InvalidInput("RegimeSchedule: intervals too close");
        if (s + l > total_steps) throw InvalidInput("RegimeSchedule: interval past mesh end");
        prev_end = s + l;
        first = false;
    }
}

RegimeSchedule build_schedule(double t_years, int r, const SchedulePolicy& policy,
                              std::uint64_t seed) {
    if (r < 0) throw InvalidInput("build_schedule: r must be >= 0");
    const long n_total = static_cast<long>(std::lround(t_years * kStepsPerYear));
    RegimeSchedule sched;
    sched.total_steps = n_total;
    if (r == 0) return sched;

    const long max_len = policy.random_length ? policy.max_length : policy.fixed_length;
    if (static_cast<long>(r) * (max_len + 3) > n_total)
        throw InvalidInput("build_schedule: infeasible (regimes do not fit with gaps)");

    StepRng rng(seed, 0);
    constexpr int kMaxAttempts = 10000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        std::vector<long> lengths(static_cast<std::size_t>(r));
        for (auto& l : lengths) {
            if (policy.random_length) {
                const double u = rng.uniform();
                l = policy.min_length +
                    static_cast<long>(u * static_cast<double>(policy.max_length -
                                                             policy.min_length + 1)) %
                        (policy.max_length - policy.min_length + 1);
            } else {
                l = policy.fixed_length;
            }
        }
        std::vector<long> starts(static_cast<std::size_t>(r));
        for (std::size_t i = 0; i < starts.size(); ++i) {
            const long room = n_total - lengths[i];
            starts[i] = static_cast<long>(rng.uniform() * static_cast<double>(room + 1));
            starts[i] = std::min(starts[i], room);
        }
        std::vector<std::size_t> order(starts.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return starts[a] < starts[b]; });

        RegimeSchedule candidate;
        candidate.total_steps = n_total;
        bool ok = true;
        long prev_end = -3;
        for (std::size_t i : order) {
            if (!(prev_end + 2 < starts[i]) || starts[i] + lengths[i] > n_total) {
                ok = false;
                break;
            }
            candidate.intervals.emplace_back(starts[i], lengths[i]);
            prev_end = starts[i] + lengths[i];
        }
        if (ok) {
            candidate.validate();
            return candidate;
        }
    }
    throw NumericalFailure("build_schedule: rejection sampling failed after 10000 attempts");
}

PathRecord simulate_gbm(const RegimeSchedule& schedule, const GbmParams& bull,
                        const GbmParams& bear, double s0, std::uint64_t seed) {
    bull.validate();
    bear.validate();
    if (!(s0 > 0.0)) throw InvalidInput("simulate_gbm: s0 must be > 0");
    const double dt = 1.0 / kStepsPerYear;
    const double sqrt_dt = std::sqrt(dt);
    PathRecord rec;
    rec.model = "gbm";
    rec.seed = seed;
    rec.schedule = schedule;
    rec.prices.resize(static_cast<std::size_t>(schedule.total_steps) + 1);
    double log_s = std::log(s0);
    rec.prices[0] = s0;
    for (long i = 0; i < schedule.total_steps; ++i) {
        const GbmParams& th = schedule.on(i) ? bear : bull;
        StepRng rng(seed, static_cast<std::uint64_t>(i));
        log_s += (th.mu - 0.5 * th.sigma * th.sigma) * dt + th.sigma * sqrt_dt * rng.normal();
        rec.prices[static_cast<std::size_t>(i) + 1] = std::exp(log_s);
    }
    return rec;
}

PathRecord simulate_merton(const RegimeSchedule& schedule, const MertonParams& bull,
                           const MertonParams& bear, double s0, std::uint64_t seed) {
    bull.validate();
    bear.validate();
    if (!(s0 > 0.0)) throw InvalidInput("simulate_merton: s0 must be > 0");
    const double dt = 1.0 / kStepsPerYear;
    const double sqrt_dt = std::sqrt(dt);
    PathRecord rec;
    rec.model = "merton";
    rec.seed = seed;
    rec.schedule = schedule;
    rec.prices.resize(static_cast<std::size_t>(schedule.total_steps) + 1);
    double log_s = std::log(s0);
    rec.prices[0] = s0;
    for (long i = 0; i < schedule.total_steps; ++i) {
        const MertonParams& th = schedule.on(i) ? bear : bull;
        StepRng rng(seed, static_cast<std::uint64_t>(i));
        double incr = (th.mu - 0.5 * th.sigma * th.sigma) * dt + th.sigma * sqrt_dt * rng.normal();
        const long jumps = rng.poisson(th.lambda * dt);
        for (long j = 0; j < jumps; ++j) incr += th.gamma + th.delta * rng.normal();
        log_s += incr;
        rec.prices[static_cast<std::size_t>(i) + 1] = std::exp(log_s);
    }
    return rec;
}

Moments true_moments(const GbmParams& params, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("true_moments: dt must be > 0");
    return {(params.mu - 0.5 * params.sigma * params.sigma) * dt,
            params.sigma * params.sigma * dt};
}

Moments true_moments(const MertonParams& params, double dt) {
    if (!(dt > 0.0)) throw InvalidInput("true_moments: dt must be > 0");
    const double drift = params.mu - 0.5 * params.sigma * params.sigma;
    return {(drift + params.lambda * params.gamma) * dt,
            (params.sigma * params.sigma +
             params.lambda * (params.delta * params.delta + params.gamma * params.gamma)) *
                dt};
}

}  // namespace regime
