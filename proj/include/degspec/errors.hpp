#pragma once

#include <complex>
#include <sstream>
#include <stdexcept>
#include <string>

namespace degspec {

/// Root of the library's exception hierarchy.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad coefficient specs, dimension mismatches, violated
/// preconditions, config validation failures.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// File could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

/// A numerical procedure could not deliver a trustworthy result.
class NumericalError : public Error {
public:
    using Error::Error;
};

class EvaluationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Step-size underflow or step budget exhausted while integrating.
class StiffnessError : public NumericalError {
public:
    StiffnessError(const std::string& what, std::complex<double> lambda, double x_reached)
        : NumericalError(what), lambda_(lambda), x_reached_(x_reached)
    {}

    std::complex<double> lambda() const noexcept { return lambda_; }
    double x_reached() const noexcept { return x_reached_; }

private:
    std::complex<double> lambda_;
    double x_reached_;
};

class QuadratureError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// The argument-principle contour could not be placed or integrated reliably.
class ContourError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Raised by count_zeros when the characteristic determinant vanishes
/// identically (degenerate d = +-1 with reflection-symmetric coefficients).
class WholePlaneSpectrumError : public ContourError {
public:
    using ContourError::ContourError;
};

/// Newton refinement did not find a zero.
class NoRootError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

namespace detail {

inline std::string format_complex(std::complex<double> z)
{
    std::ostringstream os;
    os.precision(10);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

}  // namespace detail

}  // namespace degspec
