#pragma once

#include <cstddef>
#include <exception>
#include <stdexcept>
#include <string>

namespace zermelo {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class CoincidentPointsError : public Error {
 public:
  using Error::Error;
};

class AntipodalPointsError : public Error {
 public:
  using Error::Error;
};

class OutOfDomainError : public Error {
 public:
  using Error::Error;
};

class AllLandCellError : public Error {
 public:
  using Error::Error;
};

class PoleSingularityError : public Error {
 public:
  using Error::Error;
};

class AllTrajectoriesDeadError : public Error {
 public:
  using Error::Error;
};

/// Background current locally as fast as the vessel; the unconstrained
/// Lagrangian loses regularity there.
class CurrentExceedsSpeedError : public Error {
 public:
  CurrentExceedsSpeedError(double x1, double x2, const std::string& what)
      : Error(what), x1(x1), x2(x2) {}
  double x1;
  double x2;
};

class SingularHessianError : public Error {
 public:
  SingularHessianError(std::size_t k, const std::string& what) : Error(what), index(k) {}
  std::size_t index;
};

class NonPositiveSpeedError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

class ShapeMismatchError : public Error {
 public:
  using Error::Error;
};

class NonMonotonicAxisError : public Error {
 public:
  using Error::Error;
};

class LandStartError : public Error {
 public:
  using Error::Error;
};

class LandGoalError : public Error {
 public:
  using Error::Error;
};

/// Wraps an error thrown during a multi-step operation, remembering how far
/// the operation got and the original exception.
class SteppedError : public Error {
 public:
  SteppedError(std::size_t step, std::exception_ptr cause, const std::string& what)
      : Error(what), step(step), cause(std::move(cause)) {}
  std::size_t step;
  std::exception_ptr cause;
};

}  // namespace zermelo
