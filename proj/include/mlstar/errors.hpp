#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace mlstar {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A series did not reach its tolerance within the term cap.
class TruncationError : public Error {
public:
    TruncationError(const std::string& what, double tail_bound)
        : Error(what), tail_bound_(tail_bound) {}
    double tail_bound() const noexcept { return tail_bound_; }

private:
    double tail_bound_;
};

/// Consecutive points on a tracked path are too far apart in phase.
class PathResolutionError : public Error {
public:
    using Error::Error;
};

/// Adaptive quadrature hit its panel cap; carries the best estimate.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, std::complex<double> best, double error_estimate)
        : Error(what), best_(best), error_estimate_(error_estimate) {}
    std::complex<double> best_estimate() const noexcept { return best_; }
    double error_estimate() const noexcept { return error_estimate_; }

private:
    std::complex<double> best_;
    double error_estimate_;
};

/// |E(z)| too small to divide by.
class NearZeroDenominatorError : public Error {
public:
    NearZeroDenominatorError(const std::string& what, std::complex<double> z)
        : Error(what), z_(z) {}
    std::complex<double> z() const noexcept { return z_; }

private:
    std::complex<double> z_;
};

/// F^zeta vanished away from the origin.
class DegenerateOperatorError : public Error {
public:
    using Error::Error;
};

}  // namespace mlstar
