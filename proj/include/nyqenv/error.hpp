#pragma once

#include <stdexcept>
#include <string>

namespace nyqenv {

// Violated precondition on an argument (bad grid, wrong length, out of range).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Eigensolver breakdown: Cholesky failure, QL non-convergence, failed certification.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Experiment configuration rejected; field() names the offending path, e.g. "grid.h".
class ConfigError : public std::invalid_argument {
 public:
  ConfigError(std::string field, const std::string& message)
      : std::invalid_argument(field + ": " + message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace nyqenv
