#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace auctionval {

// Input that violates a documented invariant. Carries every violation found,
// not just the first one.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);
  ValidationError(const std::string& what);

  const std::vector<std::string>& violations() const noexcept { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Two pooled prices compare equal. Callers are expected to jitter and retry.
class TieError : public ValidationError {
 public:
  TieError(double value);
  double value() const noexcept { return value_; }

 private:
  double value_;
};

// Objective became non-finite, an ascent step went downhill, or a numeric
// inversion could not be carried out.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace auctionval
