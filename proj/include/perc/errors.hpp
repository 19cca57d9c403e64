#pragma once

#include <stdexcept>
#include <string>

namespace perc {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A series or iteration hit its hard term cap.  Carries the partial value
/// and the size of the last term so callers can judge how far off it is.
class NonConvergenceError : public std::runtime_error {
 public:
  NonConvergenceError(const std::string& what, double partial, double bound)
      : std::runtime_error(what), partial_(partial), bound_(bound) {}

  double partial() const noexcept { return partial_; }
  double bound() const noexcept { return bound_; }

 private:
  double partial_;
  double bound_;
};

/// Malformed input description (graph, lattice spec, config).
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

}  // namespace perc
