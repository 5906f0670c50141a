#pragma once

#include <stdexcept>
#include <string>

namespace cellforce {

// Base for every error raised by the library. Subclasses name the failing
// stage so callers (the CLI in particular) can map them to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Grid spacing does not divide the domain or subdomain extents.
class AlignmentError : public Error {
 public:
  using Error::Error;
};

/// Geometry that would produce degenerate or invalid elements.
class GeometryError : public Error {
 public:
  using Error::Error;
};

/// A query point is outside the meshed domain (or inside a hole).
class NotFoundError : public Error {
 public:
  using Error::Error;
};

class AssemblyError : public Error {
 public:
  using Error::Error;
};

class SolverError : public Error {
 public:
  SolverError(const std::string& what, double residual)
      : Error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

/// Evaluation at the pole of a Green's function.
class SingularityError : public Error {
 public:
  using Error::Error;
};

/// Convergence rate undefined because two successive values coincide.
class IndeterminateRateError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class FormatError : public Error {
 public:
  using Error::Error;
};

}  // namespace cellforce
