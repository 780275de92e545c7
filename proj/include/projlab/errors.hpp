#pragma once

#include <stdexcept>
#include <string>

namespace projlab {

/// Raised when arguments violate an operation's documented input contract.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a mathematical precondition of a check does not hold
/// (e.g. vectors that were required to be perpendicular are not).
class PreconditionError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Raised by the experiment harness when a family fails the
/// non-degeneracy gate and the caller did not force the run.
class RefusedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

inline void require(bool condition, const std::string& message) {
  if (!condition) throw InputError(message);
}

}  // namespace detail
}  // namespace projlab
