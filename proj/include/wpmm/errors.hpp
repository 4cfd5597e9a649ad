#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace wpmm {

// Invalid arguments (out-of-range ranks, nonpositive radii, shape mismatch).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class DimensionMismatch : public InvalidArgument {
 public:
  using InvalidArgument::InvalidArgument;
};

// An iterative kernel hit its iteration cap. Carries the residual it reached.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double attained_residual)
      : std::runtime_error(what), residual_(attained_residual) {}
  double attained_residual() const noexcept { return residual_; }

 private:
  double residual_;
};

// A failure inside one solver iteration (oracle, line search, ...).
class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, std::size_t iteration)
      : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
        iteration_(iteration) {}
  std::size_t iteration() const noexcept { return iteration_; }

 private:
  std::size_t iteration_;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace wpmm
