#pragma once

#include <stdexcept>
#include <string>

namespace nct {

/// Caller violated a documented precondition (dimension mismatch, bad range, ...).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Spectrum of a truncated left-regular operator fell below the admissible floor.
class PositivityError : public std::domain_error {
 public:
  PositivityError(const std::string& what, double min_eigenvalue)
      : std::domain_error(what), min_eigenvalue_(min_eigenvalue) {}

  double min_eigenvalue() const noexcept { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// Truncation box cannot hold the requested element or exceeds the matrix cap.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace nct
