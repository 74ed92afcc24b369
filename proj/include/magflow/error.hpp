#pragma once

#include <stdexcept>
#include <string>

namespace magflow {

/// Argument outside the domain of an operation (t outside [0, ell], ratio <= 0, ...).
class domain_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A construction whose parameters admit no solution.
class infeasible_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An operation refused because its hypothesis does not hold
/// (non-positive magnetic curvature, h <= 0 on an orbit, ...).
class precondition_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numerical failure; carries the offending residual when one exists.
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what, double residual = 0.0)
      : std::runtime_error(what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace magflow
