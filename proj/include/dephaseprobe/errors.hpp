#pragma once

#include <stdexcept>
#include <string>

namespace dephaseprobe {

/// An argument lies outside the domain of the operation (s <= 0, tau < 0, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A value object violates one of its invariants (non-Hermitian state, |b| != 1, ...).
class InvariantError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An iterative numerical procedure ran out of budget before meeting its tolerance.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double estimate, double achieved_error)
      : std::runtime_error(what), estimate_(estimate), achieved_error_(achieved_error) {}

  double estimate() const noexcept { return estimate_; }
  double achieved_error() const noexcept { return achieved_error_; }

 private:
  double estimate_;
  double achieved_error_;
};

}  // namespace dephaseprobe
