#pragma once

#include <stdexcept>
#include <string>

namespace blowup {

// Invalid argument outside an operation's mathematical domain (lambda <= 0, n < 3, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A requested radius, time or index lies outside the data backing an operation.
class RangeError : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

// A numerical procedure failed to meet its tolerance.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double residual)
      : std::runtime_error(what + " (residual estimate " + std::to_string(residual) + ")"),
        residual_(residual) {}

  double residual() const { return residual_; }

 private:
  double residual_;
};

// The shooting functional has no sign change on the search bracket.
class BracketError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Two independent routes to the same quantity disagree.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough dynamic range or too poor a fit to estimate a blowup time.
class FitQualityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace blowup
