#ifndef SASAKIGEO_ERRORS_HPP
#define SASAKIGEO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sasakigeo {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration (bad JSON, unknown keys, missing command block).
class ConfigError : public Error {
public:
  using Error::Error;
};

/// Point (or a finite-difference stencil point) left the chart domain.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Metric not positive-definite, degenerate geometry input.
class GeometryError : public Error {
public:
  using Error::Error;
};

/// Tensor extents do not match the requested operation.
class ShapeError : public Error {
public:
  using Error::Error;
};

/// Linearly dependent input where independence is required.
class RankError : public Error {
public:
  using Error::Error;
};

/// Non-finite value produced during evaluation.
class NumericError : public Error {
public:
  using Error::Error;
};

/// Operation precondition violated (non-tangent argument, nonzero Hessian, ...).
class PreconditionError : public Error {
public:
  using Error::Error;
};

} // namespace sasakigeo

#endif
