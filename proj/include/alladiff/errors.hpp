#pragma once

#include <stdexcept>
#include <string>

namespace alladiff {

/// Bad input: a violated precondition, an unknown flag, a bound exceeded.
/// The CLI maps this to exit code 1.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Two independent computations of the same quantity disagree.
/// The CLI maps this to exit code 2.
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ValidationError(what);
}

inline void ensure_consistent(bool ok, const std::string& what) {
  if (!ok) throw InconsistencyError(what);
}

}  // namespace detail
}  // namespace alladiff
