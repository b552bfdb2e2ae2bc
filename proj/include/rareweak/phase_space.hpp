#pragma once

#include <cmath>
#include <cstddef>
#include <string_view>

#include "rareweak/errors.hpp"
#include "rareweak/rw_model.hpp"

// Phase-space view of the rare-weak model: sparsity beta = -log(eps)/log(d)
// and strength r = (tau^2/2)/log(d), together with the detection,
// identification and recovery boundaries that split the (beta, r) plane
// into four regions.

namespace rareweak {

struct PhaseCoords {
    double beta = 0.0;   // in [0,1]
    double r = 0.0;      // >= 0
    std::size_t d = 2;
};

inline PhaseCoords to_phase(const RwModel& m, std::size_t d) {
    if (d < 2) throw OutOfDomainError("to_phase: d must be >= 2");
    if (!(m.epsilon > 0.0))
        throw OutOfDomainError("to_phase: beta is undefined at epsilon = 0");
    const double log_d = std::log(static_cast<double>(d));
    PhaseCoords c;
    c.beta = -std::log(m.epsilon) / log_d;
    c.r = 0.5 * m.tau * m.tau / log_d;
    c.d = d;
    if (c.beta > 1.0)
        throw OutOfDomainError("to_phase: epsilon below 1/d lies outside the phase space");
    return c;
}

inline RwModel from_phase(const PhaseCoords& c) {
    if (c.d < 2) throw OutOfDomainError("from_phase: d must be >= 2");
    if (!(c.beta >= 0.0 && c.beta <= 1.0))
        throw OutOfDomainError("from_phase: beta must lie in [0,1]");
    if (!(c.r >= 0.0)) throw OutOfDomainError("from_phase: r must be >= 0");
    const double log_d = std::log(static_cast<double>(c.d));
    return RwModel(std::exp(-c.beta * log_d), std::sqrt(2.0 * c.r * log_d));
}

// r below which even detecting the presence of signal is impossible.
// Two branches meeting at beta = 3/4; defined on the sparse regime only.
inline double detection_boundary(double beta) {
    if (!(beta >= 0.5 && beta <= 1.0))
        throw OutOfDomainError("detection_boundary: beta must lie in [1/2,1]");
    if (beta <= 0.75) return beta - 0.5;
    const double s = 1.0 - std::sqrt(1.0 - beta);
    return s * s;
}

// r above which individual signals can be located by thresholding;
// equivalently tau >= sqrt(-2 log(eps)).
inline double identification_boundary(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw OutOfDomainError("identification_boundary: beta must lie in [0,1]");
    return beta;
}

// r above which almost all signal coordinates can be recovered.
inline double recovery_boundary(double beta) {
    if (!(beta >= 0.0 && beta <= 1.0))
        throw OutOfDomainError("recovery_boundary: beta must lie in [0,1]");
    const double s = 1.0 + std::sqrt(1.0 - beta);
    return s * s;
}

enum class RegionLabel { undetectable, detectable, estimable, recoverable };

inline std::string_view region_name(RegionLabel label) {
    switch (label) {
        case RegionLabel::undetectable: return "undetectable";
        case RegionLabel::detectable: return "detectable";
        case RegionLabel::estimable: return "estimable";
        case RegionLabel::recoverable: return "recoverable";
    }
    return "unknown";
}

struct Region {
    RegionLabel label = RegionLabel::undetectable;
    bool on_boundary = false;   // point sits exactly on a boundary curve
    bool dense_regime = false;  // beta < 1/2: no detection boundary there
};

// Region of a phase-space point. Points exactly on a boundary belong to
// the region above it (identification is possible at equality). For
// beta < 1/2 the detection boundary is undefined; such points are
// classified against the identification and recovery boundaries only and
// flagged dense_regime.
inline Region classify_region(const PhaseCoords& c) {
    if (!(c.beta >= 0.0 && c.beta <= 1.0))
        throw OutOfDomainError("classify_region: beta must lie in [0,1]");
    if (!(c.r >= 0.0)) throw OutOfDomainError("classify_region: r must be >= 0");

    const double ident = identification_boundary(c.beta);
    const double recov = recovery_boundary(c.beta);
    Region region;
    region.dense_regime = c.beta < 0.5;

    if (c.r >= recov) {
        region.label = RegionLabel::recoverable;
        region.on_boundary = (c.r == recov);
    } else if (c.r >= ident) {
        region.label = RegionLabel::estimable;
        region.on_boundary = (c.r == ident);
    } else if (region.dense_regime) {
        // below the identification boundary; detection is not in question
        // for dense signals
        region.label = RegionLabel::detectable;
    } else {
        const double detect = detection_boundary(c.beta);
        if (c.r >= detect) {
            region.label = RegionLabel::detectable;
            region.on_boundary = (c.r == detect);
        } else {
            region.label = RegionLabel::undetectable;
        }
    }
    return region;
}

}  // namespace rareweak
