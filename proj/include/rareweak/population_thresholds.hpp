#pragma once

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "rareweak/errors.hpp"
#include "rareweak/rw_model.hpp"

// Population-level decision thresholds on the z-scale for the rare-weak
// mixture: the Kolmogorov-Smirnov maximizer tau/2, the classification
// class boundary (local fdr = 1/2), general local-fdr level cutoffs, and
// the Higher Criticism threshold found by maximizing the standardized
// distribution gap numerically.

namespace rareweak {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Maximizer of |F_A - F_0|; solves f_0(z) = f_A(z), which is z = tau/2.
inline double ks_threshold(const RwModel& m) {
    if (m.tau <= 0.0)
        throw NoThresholdError("ks_threshold: objective is identically zero at tau = 0");
    return 0.5 * m.tau;
}

// Class boundary, the point where the posterior odds of null and
// alternative are even: tau/2 + log((1-eps)/eps)/tau. +inf at eps = 0
// (nothing is ever classified non-null), -inf at eps = 1.
inline double cb_threshold(const RwModel& m) {
    if (m.tau <= 0.0)
        throw NoThresholdError("cb_threshold: no class boundary at tau = 0");
    if (m.epsilon <= 0.0) return kInf;
    if (m.epsilon >= 1.0) return -kInf;
    return 0.5 * m.tau + std::log((1.0 - m.epsilon) / m.epsilon) / m.tau;
}

// Solves oracle_local_fdr(z, m) = q in closed form:
// z = tau/2 + log((1-eps)(1-q)/(eps q))/tau. The q = 1/2 case is exactly
// the class boundary.
inline double fdr_cutoff(const RwModel& m, double q) {
    if (!(q > 0.0 && q < 1.0))
        throw OutOfDomainError("fdr_cutoff: level must lie in (0,1)");
    if (m.tau <= 0.0)
        throw NoThresholdError("fdr_cutoff: local fdr is constant at tau = 0");
    if (m.epsilon <= 0.0) return kInf;
    if (m.epsilon >= 1.0) return -kInf;
    return 0.5 * m.tau +
           std::log((1.0 - m.epsilon) * (1.0 - q) / (m.epsilon * q)) / m.tau;
}

// Squared population HC objective on the z-scale,
// (S_A - S_0)^2 / (S (1-S)) with survival functions in place of the
// p-scale CDFs; the change of variables p = 1 - Phi(z) leaves the
// functional form intact.
inline double population_hc_objective(double z, const RwModel& m) {
    const double surv = mix_survival(z, m);
    const double cdf = mix_cdf(z, m);
    if (!(surv > 0.0) || !(cdf > 0.0))
        throw UndefinedPointError("population_hc_objective: mixture survival not in (0,1)");
    // S_A - S_0 = Phi(z) - Phi(z - tau); pick the difference of the
    // smaller pair to avoid cancellation.
    const double gap = (z > 0.5 * m.tau)
                           ? null_survival(z - m.tau) - null_survival(z)
                           : null_cdf(z) - null_cdf(z - m.tau);
    return gap * gap / (surv * cdf);
}

// Signed stationarity defect of the HC objective at z: LHS minus RHS of
// the first-order condition
//   f0 {2F(1-F) + (F_A-F_0)(1-2F) eta0} = fA {2F(1-F) - (F_A-F_0)(1-2F)(1-eta0)}
// transported to the z-scale (distribution functions become survivals;
// the densities' common Jacobian cancels). Zero at interior stationary
// points of population_hc_objective.
inline double hc_stationarity_residual(double z, const RwModel& m) {
    const double surv = mix_survival(z, m);
    const double cdf = mix_cdf(z, m);
    if (!(surv > 0.0) || !(cdf > 0.0))
        throw UndefinedPointError("hc_stationarity_residual: mixture survival not in (0,1)");
    const double eta0 = 1.0 - m.epsilon;
    const double gap = (z > 0.5 * m.tau)
                           ? null_survival(z - m.tau) - null_survival(z)
                           : null_cdf(z) - null_cdf(z - m.tau);
    const double curve = 2.0 * surv * cdf;          // 2 F (1-F)
    const double skew = gap * (1.0 - 2.0 * surv);   // (F_A-F_0)(1-2F)
    const double lhs = null_density(z) * (curve + skew * eta0);
    const double rhs = alt_density(z, m.tau) * (curve - skew * (1.0 - eta0));
    return lhs - rhs;
}

// Magnitudes of the two sides of the stationarity condition, used to put
// the residual on a relative scale.
inline double hc_stationarity_scale(double z, const RwModel& m) {
    const double surv = mix_survival(z, m);
    const double cdf = mix_cdf(z, m);
    const double eta0 = 1.0 - m.epsilon;
    const double gap = (z > 0.5 * m.tau)
                           ? null_survival(z - m.tau) - null_survival(z)
                           : null_cdf(z) - null_cdf(z - m.tau);
    const double curve = 2.0 * surv * cdf;
    const double skew = gap * (1.0 - 2.0 * surv);
    const double lhs = null_density(z) * (curve + skew * eta0);
    const double rhs = alt_density(z, m.tau) * (curve - skew * (1.0 - eta0));
    return std::max(std::abs(lhs), std::abs(rhs));
}

struct HcSearchResult {
    double z = 0.0;               // maximizer (smallest one on ties)
    double objective = 0.0;       // objective value at z
    bool multiple_maxima = false; // distinct maxima within value tolerance
};

namespace detail {

// Golden-section maximization of fn over [a, b] down to the given
// interval width.
template <class Fn>
double golden_section_max(Fn&& fn, double a, double b, double width) {
    constexpr double kInvPhi = 0.6180339887498948482;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > width) {
        if (fc > fd) {
            b = d; d = c; fd = fc;
            c = b - kInvPhi * (b - a);
            fc = fn(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + kInvPhi * (b - a);
            fd = fn(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace detail

// Global maximizer of the population HC objective. Deterministic coarse
// grid scan over [-2, tau+12] (step 1e-3) locates the basin; golden-
// section refinement then pins the maximizer to better than 1e-8.
// The grid-then-refine scheme avoids latching onto non-maximal roots of
// the stationarity condition. When several local maxima agree in value
// to within 1e-9 (relative), the smallest maximizer is returned and
// multiple_maxima is set.
inline HcSearchResult hc_threshold_search(const RwModel& m) {
    if (m.tau <= 0.0)
        throw NoThresholdError("hc_threshold: objective is identically zero at tau = 0");

    const double lo = -2.0;
    const double hi = m.tau + 12.0;
    const double step = 1e-3;
    const auto objective = [&m](double z) { return population_hc_objective(z, m); };

    const std::size_t n = static_cast<std::size_t>((hi - lo) / step) + 1;
    std::vector<double> value(n);
    double best = -kInf;
    for (std::size_t i = 0; i < n; ++i) {
        value[i] = objective(lo + static_cast<double>(i) * step);
        if (value[i] > best) best = value[i];
    }

    // Local maxima of the grid whose value is within a whisker of the
    // global grid maximum are candidate basins.
    const double candidate_tol = 1e-6 * best;
    std::vector<std::size_t> candidates;
    for (std::size_t i = 0; i < n; ++i) {
        const double left = (i > 0) ? value[i - 1] : -kInf;
        const double right = (i + 1 < n) ? value[i + 1] : -kInf;
        if (value[i] >= left && value[i] >= right && value[i] >= best - candidate_tol)
            candidates.push_back(i);
    }

    std::vector<std::pair<double, double>> refined;  // (z, value)
    refined.reserve(candidates.size());
    double best_refined = -kInf;
    for (std::size_t idx : candidates) {
        const double a = lo + step * static_cast<double>(idx > 0 ? idx - 1 : 0);
        const double b = std::min(hi, lo + step * static_cast<double>(idx + 1));
        const double z = detail::golden_section_max(objective, a, b, 1e-8);
        const double val = objective(z);
        refined.emplace_back(z, val);
        if (val > best_refined) best_refined = val;
    }

    // Ties within value tolerance: keep the smallest maximizer and flag
    // multiplicity when distinct points achieve the same value.
    HcSearchResult result;
    result.objective = best_refined;
    const double tie_tol = 1e-9 * std::abs(best_refined);
    double z_min = kInf, z_max = -kInf;
    for (const auto& [z, val] : refined) {
        if (val >= best_refined - tie_tol) {
            z_min = std::min(z_min, z);
            z_max = std::max(z_max, z);
        }
    }
    result.z = z_min;
    result.multiple_maxima = (z_max - z_min > 1e-5);
    return result;
}

inline double hc_threshold(const RwModel& m) { return hc_threshold_search(m).z; }

struct ThresholdSet {
    double z_ks = 0.0;
    double z_hc = 0.0;
    double z_cb = 0.0;  // may be +/- infinity
    bool hc_multiple_maxima = false;
    std::map<double, double> fdr_cutoffs;  // level -> z (may be infinite)
};

inline ThresholdSet threshold_set(const RwModel& m, const std::vector<double>& q_levels = {}) {
    ThresholdSet set;
    set.z_ks = ks_threshold(m);
    const HcSearchResult hc = hc_threshold_search(m);
    set.z_hc = hc.z;
    set.hc_multiple_maxima = hc.multiple_maxima;
    set.z_cb = cb_threshold(m);
    for (double q : q_levels) set.fdr_cutoffs[q] = fdr_cutoff(m, q);
    return set;
}

// Ratio z_HC / z_CB with tau placed on the signal identification
// boundary r = beta, optionally shifted up by delta_r in phase-space
// units: tau^2 = -2 log(eps) + 2 delta_r log(d). At delta_r = 0 the
// reference dimension d drops out and tau = sqrt(-2 log(eps)) exactly.
inline double hc_cb_ratio_at_boundary(double epsilon, double delta_r,
                                      std::size_t d = 10000) {
    if (!(epsilon > 0.0 && epsilon < 1.0))
        throw OutOfDomainError("hc_cb_ratio_at_boundary: epsilon must lie in (0,1)");
    if (delta_r < 0.0)
        throw OutOfDomainError("hc_cb_ratio_at_boundary: delta_r must be >= 0");
    if (d < 2)
        throw OutOfDomainError("hc_cb_ratio_at_boundary: d must be >= 2");
    const double tau_sq =
        -2.0 * std::log(epsilon) + 2.0 * delta_r * std::log(static_cast<double>(d));
    const RwModel m(epsilon, std::sqrt(tau_sq));
    return hc_threshold(m) / cb_threshold(m);
}

}  // namespace rareweak
