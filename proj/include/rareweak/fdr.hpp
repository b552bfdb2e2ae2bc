#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "rareweak/empirical_hc.hpp"
#include "rareweak/errors.hpp"
#include "rareweak/rw_model.hpp"

// False discovery rate machinery: the Benjamini-Hochberg tail-area
// estimate, a maximum-likelihood fit of the two-component normal mixture
// with the null fixed at N(0,1), and local/tail fdr-fndr curves with
// level cutoffs extracted from them.

namespace rareweak {

// Tail-area Fdr estimate at each order statistic: eta0 * p_(i) * d / i,
// made monotone nondecreasing by the step-up cumulative minimum from the
// top, capped at 1.
inline std::vector<double> bh_tail_fdr(const PValueSample& s, double eta0) {
    if (!(eta0 > 0.0 && eta0 <= 1.0))
        throw OutOfDomainError("bh_tail_fdr: eta0 must lie in (0,1]");
    const auto& p = s.sorted();
    const std::size_t d = p.size();
    std::vector<double> q(d);
    for (std::size_t i = 0; i < d; ++i)
        q[i] = eta0 * p[i] * static_cast<double>(d) / static_cast<double>(i + 1);
    double running = 1.0;
    for (std::size_t i = d; i-- > 0;) {
        running = std::min(running, q[i]);
        q[i] = running;
    }
    return q;
}

struct MixtureFit {
    double eta0_hat = 1.0;  // null proportion
    double tau_hat = 0.0;   // alternative mean, >= 0
    double loglik = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> loglik_trace;  // per accepted iteration
};

// EM fit of (eta0) N(0,1) + (1-eta0) N(tau,1) to raw z-scores, null
// component fixed. Initialization is deterministic: eta0 = 0.9 and tau
// at the 90th percentile of z (at least 1), so identical data give
// identical fits. Convergence is declared when the relative
// log-likelihood change drops below tol; otherwise the best-so-far
// parameters come back with converged = false.
inline MixtureFit fit_mixture(const std::vector<double>& z, double tol = 1e-8,
                              std::size_t max_iter = 500) {
    if (z.size() < 10)
        throw InsufficientDataError("fit_mixture: need at least 10 observations");

    const std::size_t n = z.size();
    std::vector<double> sorted(z);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t q90 =
        static_cast<std::size_t>(std::llround(0.9 * static_cast<double>(n - 1)));

    MixtureFit fit;
    fit.eta0_hat = 0.9;
    fit.tau_hat = std::max(1.0, sorted[q90]);

    std::vector<double> w(n);  // posterior alternative weights
    double prev_ll = -std::numeric_limits<double>::infinity();
    for (std::size_t iter = 1; iter <= max_iter; ++iter) {
        const double eta0 = fit.eta0_hat;
        const double tau = fit.tau_hat;

        double ll = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double f0 = normal_pdf(z[i]);
            const double fa = normal_pdf(z[i] - tau);
            const double mix = eta0 * f0 + (1.0 - eta0) * fa;
            w[i] = (mix > 0.0) ? (1.0 - eta0) * fa / mix : 0.0;
            ll += std::log(std::max(mix, 1e-300));
        }
        fit.loglik = ll;
        fit.loglik_trace.push_back(ll);
        fit.iterations = iter;

        if (iter > 1) {
            const double rel = std::abs(ll - prev_ll) / std::max(1.0, std::abs(ll));
            if (rel < tol) {
                fit.converged = true;
                break;
            }
        }
        prev_ll = ll;
        // keep reported parameters consistent with the last evaluated
        // log-likelihood when the budget runs out
        if (iter == max_iter) break;

        double w_sum = 0.0, wz_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w_sum += w[i];
            wz_sum += w[i] * z[i];
        }
        fit.eta0_hat = std::clamp(1.0 - w_sum / static_cast<double>(n), 0.0, 1.0);
        // Alternative weight can die out entirely; keep tau rather than 0/0.
        if (w_sum > 0.0) fit.tau_hat = std::max(0.0, wz_sum / w_sum);
    }
    return fit;
}

struct FdrCurves {
    std::vector<double> z_grid;      // ascending
    std::vector<double> local_fdr;   // nonincreasing after regularization
    std::vector<double> local_fndr;  // 1 - local_fdr
    std::vector<double> tail_fdr;    // eta0 S0 / S (upper tail)
    std::vector<double> tail_fndr;   // (1-eta0) F_A / F (lower tail)
};

namespace detail {

// Pool-adjacent-violators, enforcing nonincreasing values left to right.
inline void isotonic_nonincreasing(std::vector<double>& y) {
    const std::size_t n = y.size();
    std::vector<double> level(n);
    std::vector<std::size_t> count(n);
    std::size_t blocks = 0;
    for (std::size_t i = 0; i < n; ++i) {
        level[blocks] = y[i];
        count[blocks] = 1;
        ++blocks;
        while (blocks > 1 && level[blocks - 2] < level[blocks - 1]) {
            const double merged =
                (level[blocks - 2] * static_cast<double>(count[blocks - 2]) +
                 level[blocks - 1] * static_cast<double>(count[blocks - 1])) /
                static_cast<double>(count[blocks - 2] + count[blocks - 1]);
            count[blocks - 2] += count[blocks - 1];
            level[blocks - 2] = merged;
            --blocks;
        }
    }
    std::size_t pos = 0;
    for (std::size_t b = 0; b < blocks; ++b)
        for (std::size_t k = 0; k < count[b]; ++k) y[pos++] = level[b];
}

inline FdrCurves curves_from_params(double eta0, double tau, std::vector<double> z_grid) {
    FdrCurves c;
    c.z_grid = std::move(z_grid);
    const std::size_t n = c.z_grid.size();
    c.local_fdr.resize(n);
    c.local_fndr.resize(n);
    c.tail_fdr.resize(n);
    c.tail_fndr.resize(n);

    const double eps = 1.0 - eta0;
    for (std::size_t i = 0; i < n; ++i) {
        const double z = c.z_grid[i];
        // density ratio form, stable at both ends
        double fdr;
        if (eps <= 0.0) {
            fdr = 1.0;
        } else if (eta0 <= 0.0) {
            fdr = 0.0;
        } else {
            fdr = eta0 / (eta0 + eps * std::exp(tau * z - 0.5 * tau * tau));
        }
        c.local_fdr[i] = fdr;

        const double s0 = normal_survival(z);
        const double sa = normal_survival(z - tau);
        const double surv = eta0 * s0 + eps * sa;
        c.tail_fdr[i] = (surv > 0.0) ? std::min(1.0, eta0 * s0 / surv) : 0.0;

        const double f0 = normal_cdf(z);
        const double fa = normal_cdf(z - tau);
        const double cdf = eta0 * f0 + eps * fa;
        c.tail_fndr[i] = (cdf > 0.0) ? std::min(1.0, eps * fa / cdf) : 0.0;
    }

    isotonic_nonincreasing(c.local_fdr);
    for (std::size_t i = 0; i < n; ++i) c.local_fndr[i] = 1.0 - c.local_fdr[i];
    return c;
}

}  // namespace detail

// Curves from a fitted mixture.
inline FdrCurves local_fdr_curve(const MixtureFit& fit, std::vector<double> z_grid) {
    return detail::curves_from_params(fit.eta0_hat, fit.tau_hat, std::move(z_grid));
}

// Oracle curves from the true model parameters.
inline FdrCurves local_fdr_curve(const RwModel& m, std::vector<double> z_grid) {
    return detail::curves_from_params(1.0 - m.epsilon, m.tau, std::move(z_grid));
}

// Smallest z on the grid with local_fdr <= level, linearly interpolated
// between bracketing grid points; +inf when the level is never reached.
inline double cutoff_from_curve(const FdrCurves& c, double level) {
    if (!(level > 0.0 && level < 1.0))
        throw OutOfDomainError("cutoff_from_curve: level must lie in (0,1)");
    const std::size_t n = c.z_grid.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (c.local_fdr[i] <= level) {
            if (i == 0) return c.z_grid[0];
            const double f_hi = c.local_fdr[i - 1];  // > level
            const double f_lo = c.local_fdr[i];      // <= level
            const double t = (f_hi - level) / (f_hi - f_lo);
            return c.z_grid[i - 1] + t * (c.z_grid[i] - c.z_grid[i - 1]);
        }
    }
    return std::numeric_limits<double>::infinity();
}

}  // namespace rareweak
