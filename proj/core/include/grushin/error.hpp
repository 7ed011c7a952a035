#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace grushin {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Violated precondition on a parameter or argument.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Field with vanishing norm or vanishing Choquard term where a nonzero one is needed.
class DegenerateField : public Error {
 public:
  DegenerateField() : Error("degenerate field") {}
};

/// Point evaluation of the kernel at coincident arguments.
class SingularEvaluation : public Error {
 public:
  SingularEvaluation() : Error("singular evaluation") {}
};

/// Exponent p outside the open existence window.
class NonadmissibleExponent : public Error {
 public:
  NonadmissibleExponent(double p, double lo, double hi);
  double p() const noexcept { return p_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double p_, lo_, hi_;
};

/// Iterates left the trust band around the initial scale.
class SolverDiverged : public Error {
 public:
  using Error::Error;
};

/// Iteration budget exhausted before reaching tolerance.
class MaxIterations : public Error {
 public:
  using Error::Error;
};

/// Dense kernel storage would exceed the configured cap.
class KernelMemoryError : public Error {
 public:
  using Error::Error;
};

/// Malformed file or a header that disagrees with the expected parameters.
class FormatError : public Error {
 public:
  FormatError(std::string key, const std::string& what)
      : Error(what), key_(std::move(key)) {}
  /// Name of the first offending header key, empty if not key-specific.
  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

}  // namespace grushin
