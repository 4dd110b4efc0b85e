#pragma once

#include <stdexcept>
#include <string>

namespace qslkit {

// Raised when an argument violates a documented precondition.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Raised when an adaptive quadrature cannot meet its tolerance within the
// allowed subdivision depth. Carries the best value reached so far.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double partial_value, double err_estimate)
      : std::runtime_error(what), partial_value_(partial_value), err_estimate_(err_estimate) {}

  double partial_value() const noexcept { return partial_value_; }
  double err_estimate() const noexcept { return err_estimate_; }

 private:
  double partial_value_;
  double err_estimate_;
};

}  // namespace qslkit
