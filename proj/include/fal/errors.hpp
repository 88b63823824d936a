#pragma once

#include <stdexcept>
#include <string>

namespace fal {

// Base class for all library errors. Everything recoverable is reported by
// throwing one of the subclasses below; NaN is never returned silently.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Evaluation at a pole of a special function (Gamma at -n, zeta at 1, ...).
struct PoleError : Error {
    explicit PoleError(const std::string& msg) : Error(msg) {}
};

// Argument outside the documented domain of an operation.
struct DomainError : Error {
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// An iterative scheme (quadrature, series summation, Newton) exhausted its
// budget before reaching the requested tolerance.
struct NoConvergence : Error {
    explicit NoConvergence(const std::string& msg) : Error(msg) {}
};

// The exponent inequalities required by a calculus rule do not hold.
struct HypothesisViolation : Error {
    explicit HypothesisViolation(const std::string& msg) : Error(msg) {}
};

// A numerically computed moment integral exceeded its overflow budget.
struct MomentDiverges : Error {
    explicit MomentDiverges(const std::string& msg) : Error(msg) {}
};

// A numeric routine was asked about a phi-family it has no algorithm for.
struct UnsupportedFamily : Error {
    explicit UnsupportedFamily(const std::string& msg) : Error(msg) {}
};

} // namespace fal
