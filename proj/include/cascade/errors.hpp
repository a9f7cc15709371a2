#pragma once

#include <stdexcept>
#include <string>

namespace cascade {

/// Input outside the mathematical domain of an operation (negative frequency, eta > 1, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Caller broke a precondition that is not a domain issue (asymmetric covariance, singular block).
class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Drift matrix not Hurwitz, or a time integration diverged.
class StabilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Singular or ill-conditioned linear algebra, optimizer failure.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double diagnostic = 0.0)
      : std::runtime_error(what), diagnostic_(diagnostic) {}

  /// Condition estimate, best objective value, or whatever number explains the failure.
  double diagnostic() const noexcept { return diagnostic_; }

 private:
  double diagnostic_;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cascade
