#include "regime/wasserstein.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace regime {

namespace {

double abs_pow(double x, double p) {
    const double a = std::abs(x);
    if (p == 1.0) return a;
    if (p == 2.0) return a * a;
    return std::pow(a, p);
}

// Exact integral of |F_mu^{-1}(z) - F_nu^{-1}(z)|^p over [0, 1) when the
// atom counts differ. Both quantile functions are piecewise constant with
// breakpoints at i/N and j/M, so the integrand is constant on the merged grid.
double quantile_integral_pow(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p) {
    const std::size_t n = mu.size();
    const std::size_t m = nu.size();
    std::size_t i = 0;
    std::size_t j = 0;
    double z = 0.0;
    double total = 0.0;
    while (i < n && j < m) {
        const double next_i = static_cast<double>(i + 1) / static_cast<double>(n);
        const double next_j = static_cast<double>(j + 1) / static_cast<double>(m);
        const double next = std::min(next_i, next_j);
        total += (next - z) * abs_pow(mu.atoms[i] - nu.atoms[j], p);
        z = next;
        if (next_i <= next) ++i;
        if (next_j <= next) ++j;
    }
    return total;
}

// Exact minimum-cost perfect matching on a square cost matrix
// (Jonker-Volgenant style shortest augmenting path). Used only by the oracle.
double assignment_cost(const std::vector<std::vector<double>>& cost) {
    const std::size_t n = cost.size();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
    std::vector<std::size_t> match(n + 1, 0);  // match[j] = row assigned to column j
    for (std::size_t i = 1; i <= n; ++i) {
        match[0] = i;
        std::size_t j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<bool> used(n + 1, false);
        std::vector<std::size_t> way(n + 1, 0);
        do {
            used[j0] = true;
            const std::size_t i0 = match[j0];
            double delta = inf;
            std::size_t j1 = 0;
            for (std::size_t j = 1; j <= n; ++j) {
                if (used[j]) continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (std::size_t j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[match[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (match[j0] != 0);
        do {
            const std::size_t j1 = way[j0];
            match[j0] = match[j1];
            j0 = j1;
        } while (j0 != 0);
    }
    double total = 0.0;
    for (std::size_t j = 1; j <= n; ++j) total += cost[match[j] - 1][j - 1];
    return total;
}

double column_median(std::vector<double>& scratch) {
    const std::size_t m = scratch.size();
    auto mid = scratch.begin() + static_cast<std::ptrdiff_t>(m / 2);
    std::nth_element(scratch.begin(), mid, scratch.end());
    if (m % 2 == 1) return *mid;
    const double hi = *mid;
    const double lo = *std::max_element(scratch.begin(), mid);
    return 0.5 * (lo + hi);
}

}  // namespace

double wasserstein_distance_pow(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu,
                                double p) {
    if (mu.atoms.empty() || nu.atoms.empty())
        throw InvalidInput("wasserstein_distance: empty measure");
    if (p < 1.0) throw InvalidInput("wasserstein_distance: require p >= 1");
    if (mu.size() == nu.size()) {
        double total = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i)
            total += abs_pow(mu.atoms[i] - nu.atoms[i], p);
        return total / static_cast<double>(mu.size());
    }
    return quantile_integral_pow(mu, nu, p);
}

double wasserstein_distance(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p) {
    return std::pow(wasserstein_distance_pow(mu, nu, p), 1.0 / p);
}

double ot_oracle(const EmpiricalMeasure& mu, const EmpiricalMeasure& nu, double p) {
    constexpr std::size_t kMaxAtoms = 8;
    const std::size_t n = mu.size();
    const std::size_t m = nu.size();
    if (n == 0 || m == 0) throw InvalidInput("ot_oracle: empty measure");
    if (n > kMaxAtoms || m > kMaxAtoms)
        throw InvalidInput("ot_oracle: instance too large (max 8 atoms per side)");

    if (n == m) {
        // Uniform weights: extreme points of the coupling polytope are
        // permutation matrices, so enumerate all of them.
        std::vector<std::size_t> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        double best = std::numeric_limits<double>::infinity();
        do {
            double total = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                total += abs_pow(mu.atoms[i] - nu.atoms[perm[i]], p);
            best = std::min(best, total);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return std::pow(best / static_cast<double>(n), 1.0 / p);
    }

    // Unequal counts: replicate each atom lcm/n (lcm/m) times so both sides
    // carry lcm unit masses, then solve the exact assignment problem.
    const std::size_t l = std::lcm(n, m);
    std::vector<double> a, b;
    a.reserve(l);
    b.reserve(l);
    for (double x : mu.atoms) a.insert(a.end(), l / n, x);
    for (double x : nu.atoms) b.insert(b.end(), l / m, x);
    std::vector<std::vector<double>> cost(l, std::vector<double>(l));
    for (std::size_t i = 0; i < l; ++i)
        for (std::size_t j = 0; j < l; ++j) cost[i][j] = abs_pow(a[i] - b[j], p);
    return std::pow(assignment_cost(cost) / static_cast<double>(l), 1.0 / p);
}

EmpiricalMeasure wasserstein_barycenter(std::span<const EmpiricalMeasure> measures, double p) {
    if (measures.empty()) throw InvalidInput("wasserstein_barycenter: no measures");
    if (p != 1.0 && p != 2.0)
        throw InvalidInput("wasserstein_barycenter: only p in {1, 2} supported");
    const std::size_t n_atoms = measures.front().size();
    for (const auto& mu : measures)
        if (mu.size() != n_atoms)
            throw InvalidInput("wasserstein_barycenter: unequal atom counts");

    EmpiricalMeasure bary;
    bary.atoms.resize(n_atoms);
    std::vector<double> column(measures.size());
    for (std::size_t j = 0; j < n_atoms; ++j) {
        for (std::size_t i = 0; i < measures.size(); ++i) column[i] = measures[i].atoms[j];
        if (p == 1.0) {
            bary.atoms[j] = column_median(column);
        } else {
            double s = 0.0;
            for (double x : column) s += x;
            bary.atoms[j] = s / static_cast<double>(column.size());
        }
    }
    // Medians/means of sorted columns are already monotone; re-sorting is a
    // cheap re-assertion of the atom invariant.
    std::sort(bary.atoms.begin(), bary.atoms.end());
    return bary;
}

}  // namespace regime
