// errors.hpp: exception types shared by every esdf module

#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace esdf {

// Argument outside the mathematical domain of an operation (negative frequency,
// invalid parameter set, malformed configuration value, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// A closed-form expression hit a vanishing denominator.
class SingularityError : public DomainError {
public:
    SingularityError(const std::string& what, double where)
        : DomainError(what), location_(where) {}
    double location() const noexcept { return location_; }

private:
    double location_;
};

// Adaptive quadrature did not reach its tolerance. Carries the subinterval
// with the largest remaining error estimate.
class QuadratureError : public std::runtime_error {
public:
    QuadratureError(const std::string& what, double lo, double hi, double err)
        : std::runtime_error(what + " (worst subinterval [" + format(lo) + ", " + format(hi) +
                             "], error estimate " + format(err) + ")"),
          lo_(lo), hi_(hi), error_(err) {}
    double worst_lo() const noexcept { return lo_; }
    double worst_hi() const noexcept { return hi_; }
    double error_estimate() const noexcept { return error_; }

private:
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }
    double lo_, hi_, error_;
};

// Root bracketing failed (calibration).
class NoRootError : public DomainError {
public:
    using DomainError::DomainError;
};

// An iterative or extrapolation procedure did not converge, or a convergence
// sweep exceeded its threshold.
class ConvergenceError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested tensor storage exceeds the configured memory budget.
class MemoryBudgetError : public DomainError {
public:
    using DomainError::DomainError;
};

// A structural invariant (trace, Hermiticity) broke during propagation.
class InvariantError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// File could not be read or written.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace esdf
