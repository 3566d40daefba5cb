#pragma once

#include <stdexcept>
#include <string>

namespace tbq {

/// An iterative solver stopped at its iteration cap without meeting tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/// A requested construction exceeds what the frontend class can realize.
class InfeasibleError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace tbq
