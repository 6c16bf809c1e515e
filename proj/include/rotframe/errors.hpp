#pragma once

#include <stdexcept>
#include <string>

namespace rotframe {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input (spectral data, grid, spin quantum numbers, config files).
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Simpson quadrature needs an odd number (>= 3) of samples.
class QuadratureError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

class GridMismatchError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Output directory or file could not be written.
class OutputError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Numerical degeneracy: the closed forms cannot be evaluated at the requested point.
class NumericalError : public Error {
public:
    using Error::Error;
};

/// P(x) failed the symmetric positive definite factorization.
class SingularConfigurationError : public NumericalError {
public:
    SingularConfigurationError(double x)
        : NumericalError("singular configuration: P(x) is not positive definite at x = " + std::to_string(x)),
          x_(x) {}
    double x() const { return x_; }

private:
    double x_;
};

/// kappa -+ ik vanishes in a Jost tail integral.
class PoleConfigurationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Grid too narrow for a decaying state or potential.
class TruncationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

class NormalizationError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// A propagation claimed cyclic did not return to its initial ray.
class NonCyclicEvolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Time step too coarse for the requested accuracy; the caller must refine.
class ResolutionError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

/// Wavefunction amplitude reached the Dirichlet boundary during grid propagation.
class BoundaryLeakError : public NumericalError {
public:
    using NumericalError::NumericalError;
};

} // namespace rotframe
