#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "rareweak/errors.hpp"
#include "rareweak/math/normal.hpp"

// Rare-weak two-component normal mixture: with probability 1-epsilon a
// coordinate is null N(0,1), with probability epsilon it carries signal
// N(tau,1). Everything downstream (thresholds, fdr curves, simulations)
// is built on the densities and distribution functions defined here.

namespace rareweak {

struct RwModel {
    double epsilon;  // non-null proportion, in [0,1]
    double tau;      // alternative mean, >= 0

    RwModel(double epsilon_, double tau_) : epsilon(epsilon_), tau(tau_) {
        if (!(std::isfinite(epsilon) && epsilon >= 0.0 && epsilon <= 1.0))
            throw OutOfDomainError("RwModel: epsilon must be finite in [0,1]");
        if (!(std::isfinite(tau) && tau >= 0.0))
            throw OutOfDomainError("RwModel: tau must be finite and >= 0");
    }

    double null_proportion() const { return 1.0 - epsilon; }
};

inline double null_density(double z) { return normal_pdf(z); }

inline double alt_density(double z, double tau) { return normal_pdf(z - tau); }

inline double mix_density(double z, const RwModel& m) {
    return (1.0 - m.epsilon) * null_density(z) + m.epsilon * alt_density(z, m.tau);
}

inline double null_cdf(double z) { return normal_cdf(z); }

inline double alt_cdf(double z, double tau) { return normal_cdf(z - tau); }

inline double mix_cdf(double z, const RwModel& m) {
    return (1.0 - m.epsilon) * null_cdf(z) + m.epsilon * alt_cdf(z, m.tau);
}

inline double null_survival(double z) { return normal_survival(z); }

inline double alt_survival(double z, double tau) { return normal_survival(z - tau); }

inline double mix_survival(double z, const RwModel& m) {
    return (1.0 - m.epsilon) * null_survival(z) + m.epsilon * alt_survival(z, m.tau);
}

// Upper-tail p-value of a z-score. Deliberately the same routine as
// null_cdf so that p_value(z) == 1 - null_cdf(z) holds exactly.
inline double p_value(double z) { return 1.0 - null_cdf(z); }

// Posterior probability of the null at z, (1-eps) f0(z) / f(z).
// The density ratio form avoids underflow of the individual densities.
// Degenerate mixtures return their analytic limits (1 when eps = 0,
// 0 when eps = 1).
inline double oracle_local_fdr(double z, const RwModel& m) {
    if (m.epsilon <= 0.0) return 1.0;
    if (m.epsilon >= 1.0) return 0.0;
    const double eta0 = 1.0 - m.epsilon;
    // f_A(z)/f_0(z) = exp(tau*z - tau^2/2); IEEE semantics give the right
    // limits when the exponential over- or underflows.
    const double ratio = std::exp(m.tau * z - 0.5 * m.tau * m.tau);
    return eta0 / (eta0 + m.epsilon * ratio);
}

// z-scores equivalent to a balanced two-class comparison with n
// observations and effect mu0 in the non-null coordinates.
inline double tau_from_two_class(std::size_t n, double mu0) {
    if (n < 1) throw OutOfDomainError("tau_from_two_class: n must be >= 1");
    return std::sqrt(static_cast<double>(n)) * mu0;
}

struct LabeledSample {
    std::vector<double> z;            // sorted ascending
    std::vector<bool> is_alternative; // ground truth, parallel to z
    std::uint64_t seed = 0;

    std::size_t size() const { return z.size(); }
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic standard-normal stream on top of a 64-bit generator
// (Box-Muller, both outputs used).
template <class Rng>
class NormalStream {
public:
    explicit NormalStream(Rng& rng) : rng_(rng) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = unit_open_closed();
        const double u2 = unit_open_closed();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 6.283185307179586476925287 * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Uniform on (0,1]; never 0, so log(u1) stays finite.
    double unit_open_closed() {
        return (static_cast<double>(rng_() >> 11) + 1.0) * 0x1.0p-53;
    }

private:
    Rng& rng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace detail

// Draws d labeled z-scores from the mixture, sorted ascending with labels
// kept parallel. Identical (m, d, seed) inputs reproduce the sample
// bit-for-bit.
inline LabeledSample sample(const RwModel& m, std::size_t d, std::uint64_t seed) {
    if (d < 1) throw InsufficientDataError("sample: d must be >= 1");

    std::mt19937_64 rng(detail::splitmix64(seed));
    detail::NormalStream<std::mt19937_64> normal(rng);

    std::vector<std::pair<double, bool>> draws(d);
    for (std::size_t i = 0; i < d; ++i) {
        const double u = normal.unit_open_closed();
        const bool alt = (u <= m.epsilon);  // P(u <= eps) = eps on (0,1]
        draws[i] = {normal() + (alt ? m.tau : 0.0), alt};
    }
    std::sort(draws.begin(), draws.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });

    LabeledSample out;
    out.z.resize(d);
    out.is_alternative.resize(d);
    out.seed = seed;
    for (std::size_t i = 0; i < d; ++i) {
        out.z[i] = draws[i].first;
        out.is_alternative[i] = draws[i].second;
    }
    return out;
}

}  // namespace rareweak
