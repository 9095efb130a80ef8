#pragma once

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnstab {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad mesh size, p <= 1, ...).
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Data that should satisfy a structural invariant does not.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

/// Two objects that must live on the same grid do not.
class GridMismatch : public Error {
 public:
  using Error::Error;
};

/// Adaptive quadrature failed to reach the requested tolerance.
inline std::string format_estimate(double value) {
  std::ostringstream os;
  os << value;
  return os.str();
}

class QuadratureError : public Error {
 public:
  QuadratureError(const std::string& what, double achieved)
      : Error(what + " (achieved error estimate " + format_estimate(achieved) +
              ")"),
        achieved_(achieved) {}

  double achieved_tolerance() const noexcept { return achieved_; }

 private:
  double achieved_;
};

/// Newton (and its Picard fallback) did not reduce the residual below
/// tolerance. Carries enough state for the caller to decide on a retry with
/// a larger regularization or a smaller time step.
class NewtonDivergence : public Error {
 public:
  NewtonDivergence(const std::string& what, double last_residual,
                   std::vector<int> halvings, long step_index = -1)
      : Error(what),
        last_residual_(last_residual),
        halvings_(std::move(halvings)),
        step_index_(step_index) {}

  double last_residual() const noexcept { return last_residual_; }
  /// Number of line-search halvings taken at each Newton iteration.
  const std::vector<int>& damping_history() const noexcept { return halvings_; }
  long step_index() const noexcept { return step_index_; }

 private:
  double last_residual_;
  std::vector<int> halvings_;
  long step_index_;
};

}  // namespace dnstab
