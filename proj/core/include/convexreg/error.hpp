#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace convexreg {

/// Bad caller input: wrong sizes, grid mismatch, out-of-domain parameters.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The exhaustive oracle refuses problems it cannot enumerate.
class UnsupportedSize : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A documented precondition (e.g. the design is too coarse for the
/// requested packing) does not hold. Carries the smallest admissible n.
class PreconditionViolation : public std::invalid_argument {
 public:
  PreconditionViolation(const std::string& what, std::size_t required_n)
      : std::invalid_argument(what), required_n_(required_n) {}

  std::size_t required_n() const noexcept { return required_n_; }

 private:
  std::size_t required_n_;
};

/// Iterative solver did not reach a certified optimum.
class SolverFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Randomized construction exhausted its retry budget.
class InternalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace convexreg
