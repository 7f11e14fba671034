#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>

namespace spectile {

// Base for every error the library raises. Verdicts (tiles / does not tile,
// spectral / not spectral) are never reported through exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// Operands live in different ambient groups.
class AmbientMismatch : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// Arithmetic would leave the supported integer range.
class SizeLimitError : public Error {
 public:
  using Error::Error;
};

// A configured enumeration / search budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

namespace detail {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw SizeLimitError(std::string(what) + ": exceeds 64-bit range");
  }
  return r;
}

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_add_overflow(a, b, &r)) {
    throw SizeLimitError("integer coefficient overflow");
  }
  return r;
}

inline std::int64_t checked_sub(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_sub_overflow(a, b, &r)) {
    throw SizeLimitError("integer coefficient overflow");
  }
  return r;
}

inline std::int64_t checked_mul_signed(std::int64_t a, std::int64_t b) {
  std::int64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) {
    throw SizeLimitError("integer coefficient overflow");
  }
  return r;
}

inline std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    const std::uint64_t t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline std::uint64_t lcm(std::uint64_t a, std::uint64_t b, const char* what) {
  return checked_mul(a / gcd(a, b), b, what);
}

// Number of k-subsets of an n-set, saturating at UINT64_MAX.
inline std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > std::numeric_limits<std::uint64_t>::max()) {
      return std::numeric_limits<std::uint64_t>::max();
    }
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace detail
}  // namespace spectile
