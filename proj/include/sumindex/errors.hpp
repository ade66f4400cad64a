#pragma once

#include <stdexcept>

namespace sumindex {

/// Malformed or truncated serialized data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Advice file built for a different instance than the one supplied.
class DigestMismatch : public FormatError {
 public:
  using FormatError::FormatError;
};

/// A configured size budget (sieve range, exhaustive enumeration, sumset
/// size) would be exceeded.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace sumindex
