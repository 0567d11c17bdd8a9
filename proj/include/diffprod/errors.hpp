#pragma once

#include <stdexcept>
#include <string>

namespace diffprod {

/// Malformed or out-of-contract input (bad modulus, mismatched moduli,
/// non-divisor d, decimal density, ...). The CLI maps this to exit code 2.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A runtime-checked mathematical postcondition did not hold. The CLI maps
/// this to exit code 1.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A computation was refused because it would exceed a configured
/// resource limit (search budget, bound materialization size).
class LimitExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

[[noreturn]] inline void fail_verification(const std::string& what) {
  throw VerificationError("verification failed: " + what);
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidArgument(what);
}

}  // namespace detail
}  // namespace diffprod
