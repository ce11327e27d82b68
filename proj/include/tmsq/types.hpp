#pragma once

// Common aliases, units and the error hierarchy shared by every tmsq module.

#include <Eigen/Dense>

#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace tmsq {

using cplx = std::complex<double>;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Angular rate (rad/s) of a frequency quoted as omega/(2 pi) in kHz.
constexpr double khz(double value) { return two_pi * 1e3 * value; }

/// Inverse of khz(): rad/s back to omega/(2 pi) in kHz.
constexpr double to_khz(double rate) { return rate / (two_pi * 1e3); }

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Input that violates a documented invariant (bad parameter, bad config).
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Size mismatch or a truncated space larger than its guard.
class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

/// A numerical procedure could not produce a trustworthy answer.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// The drift matrix has an eigenvalue outside the open left half-plane.
class NotHurwitzError : public NumericalError {
public:
    NotHurwitzError(const std::string& what, cplx eigenvalue)
        : NumericalError(what), eigenvalue_(eigenvalue) {}

    cplx eigenvalue() const noexcept { return eigenvalue_; }

private:
    cplx eigenvalue_;
};

/// Step-size underflow or a tolerance the integrator could not meet.
class ToleranceError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

}  // namespace tmsq
