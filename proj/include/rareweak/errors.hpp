#pragma once

#include <stdexcept>
#include <string>

namespace rareweak {

// Thrown when a decision threshold does not exist, e.g. tau = 0 makes
// every objective identically zero.
struct NoThresholdError : std::domain_error {
    explicit NoThresholdError(const std::string& msg) : std::domain_error(msg) {}
};

// Parameter outside the mathematical domain of an operation.
struct OutOfDomainError : std::domain_error {
    explicit OutOfDomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Objective evaluated at a point where it is undefined (e.g. mixture
// survival exactly 0 or 1).
struct UndefinedPointError : std::domain_error {
    explicit UndefinedPointError(const std::string& msg) : std::domain_error(msg) {}
};

// Too few observations to carry out the computation.
struct InsufficientDataError : std::invalid_argument {
    explicit InsufficientDataError(const std::string& msg) : std::invalid_argument(msg) {}
};

}  // namespace rareweak
