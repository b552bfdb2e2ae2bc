#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "rareweak/errors.hpp"

// Empirical Higher Criticism: the standardized gap between the empirical
// distribution of p-values and the uniform, evaluated at the order
// statistics. Its maximum is the HC statistic; the maximizing p-value is
// the HC decision threshold.

namespace rareweak {

class PValueSample {
public:
    // Takes arbitrary order, stores sorted ascending. Values must lie in
    // [0,1]; at least one value is required.
    explicit PValueSample(std::vector<double> values) : p_(std::move(values)) {
        if (p_.empty()) throw InsufficientDataError("PValueSample: empty sample");
        for (double p : p_) {
            if (!(p >= 0.0 && p <= 1.0))
                throw OutOfDomainError("PValueSample: p-values must lie in [0,1]");
        }
        std::sort(p_.begin(), p_.end());
    }

    const std::vector<double>& sorted() const { return p_; }
    std::size_t size() const { return p_.size(); }

private:
    std::vector<double> p_;
};

// Right-continuous empirical CDF with the conventions p_(0) = 0 and
// p_(d+1) = 1: returns i/d for p_(i) <= x < p_(i+1).
inline double ecdf(const PValueSample& s, double x) {
    const auto& p = s.sorted();
    // count of p_(i) <= x
    const auto it = std::upper_bound(p.begin(), p.end(), x);
    return static_cast<double>(it - p.begin()) / static_cast<double>(p.size());
}

// HC objective |i/d - p_(i)| / sqrt((i/d)(1 - i/d)/d) for i = 1..d-1.
// The last order statistic is excluded: the standardization denominator
// vanishes at i = d.
inline std::vector<double> hc_objective_at_order_stats(const PValueSample& s) {
    const std::size_t d = s.size();
    if (d < 2) throw InsufficientDataError("hc_objective_at_order_stats: need d >= 2");
    const auto& p = s.sorted();
    const double dd = static_cast<double>(d);
    std::vector<double> out(d - 1);
    for (std::size_t i = 1; i < d; ++i) {
        const double frac = static_cast<double>(i) / dd;
        out[i - 1] = std::abs(frac - p[i - 1]) / std::sqrt(frac * (1.0 - frac) / dd);
    }
    return out;
}

struct HcResult {
    double threshold = 0.0;   // p-value at the maximizer
    double hc_star = 0.0;     // maximum of the objective
    std::size_t argmax_index = 0;        // 0-based into objective_values
    std::vector<double> objective_values; // one per evaluated order statistic
};

// Maximizes the HC objective over the first floor(search_fraction * d)
// order statistics (never past d-1). Restricting the search to the lower
// half of the p-values is the common stabilization; search_fraction = 1
// scans everything. Ties resolve to the smallest index.
inline HcResult hc_threshold(const PValueSample& s, double search_fraction = 0.5) {
    const std::size_t d = s.size();
    if (d < 2) throw InsufficientDataError("hc_threshold: need d >= 2");
    if (!(search_fraction > 0.0 && search_fraction <= 1.0))
        throw OutOfDomainError("hc_threshold: search_fraction must lie in (0,1]");

    const std::size_t limit = std::min(
        d - 1, static_cast<std::size_t>(std::floor(search_fraction * static_cast<double>(d))));
    if (limit < 1)
        throw InsufficientDataError("hc_threshold: search range is empty");

    const auto& p = s.sorted();
    const double dd = static_cast<double>(d);
    HcResult result;
    result.objective_values.resize(limit);
    for (std::size_t i = 1; i <= limit; ++i) {
        const double frac = static_cast<double>(i) / dd;
        const double value = std::abs(frac - p[i - 1]) / std::sqrt(frac * (1.0 - frac) / dd);
        result.objective_values[i - 1] = value;
        if (value > result.hc_star || i == 1) {
            result.hc_star = value;
            result.argmax_index = i - 1;
        }
    }
    result.threshold = p[result.argmax_index];
    return result;
}

// Significance indicator per sorted p-value: strict p < threshold.
inline std::vector<bool> classify(const PValueSample& s, double threshold) {
    if (!(threshold >= 0.0 && threshold <= 1.0))
        throw OutOfDomainError("classify: threshold must lie in [0,1]");
    const auto& p = s.sorted();
    std::vector<bool> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = p[i] < threshold;
    return out;
}

}  // namespace rareweak
