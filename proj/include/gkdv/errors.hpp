#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace gkdv {

/// Base class for all errors thrown by this library.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed inputs: wrong sizes, invalid grids, bad JSON, non-finite data.
struct StructuralError : Error {
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
struct DomainError : Error {
    using Error::Error;
};

/// Inverse transform of a spectrally non-Hermitian field.
struct SymmetryError : Error {
    using Error::Error;
};

/// Oscillatory quadrature failed to meet tolerance; carries the partial
/// result so callers can decide whether it is still usable.
struct QuadratureError : Error {
    double partial_sum;
    double error_estimate;
    QuadratureError(const std::string& msg, double partial, double estimate)
        : Error(msg), partial_sum(partial), error_estimate(estimate) {}
};

/// exp(P dy) overflowed; names the offending wavenumber.
struct GrowthError : Error {
    double lambda;
    GrowthError(const std::string& msg, double lam) : Error(msg), lambda(lam) {}
};

/// Neumann series iterate norms stopped decreasing.
struct DivergenceError : Error {
    std::vector<double> norm_history;
    DivergenceError(const std::string& msg, std::vector<double> history)
        : Error(msg), norm_history(std::move(history)) {}
};

/// Picard iteration did not converge within max_iter.
struct ConvergenceError : Error {
    std::vector<double> difference_history;
    ConvergenceError(const std::string& msg, std::vector<double> history)
        : Error(msg), difference_history(std::move(history)) {}
};

/// An iterate escaped the a-priori ceiling by a gross factor.
struct BoundViolationError : Error {
    using Error::Error;
};

/// Missing or inconsistent auxiliary data (kernel tables, y-derivatives, ...).
struct ConfigError : Error {
    using Error::Error;
};

/// Too few usable samples for an exponent fit.
struct InsufficientDataError : Error {
    using Error::Error;
};

/// Quadrature rule cannot reach its order on the given grid.
struct QuadratureOrderError : Error {
    using Error::Error;
};

/// Test function support touches the domain boundary.
struct TestFunctionError : Error {
    using Error::Error;
};

}  // namespace gkdv
