#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

namespace alladiff {

using BigInt = mpz_class;
using Rational = mpq_class;

inline BigInt big(std::uint64_t v) {
  BigInt r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof v, 0, 0, &v);
  return r;
}

inline BigInt big_signed(std::int64_t v) {
  if (v >= 0) return big(static_cast<std::uint64_t>(v));
  // -(v+1) avoids overflow at INT64_MIN
  return -big(static_cast<std::uint64_t>(-(v + 1))) - 1;
}

inline BigInt ipow(const BigInt& base, unsigned long exp) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exp);
  return r;
}

inline BigInt ipow(std::uint64_t base, unsigned long exp) { return ipow(big(base), exp); }

/// C(n, k) for arbitrary non-negative big n.
inline BigInt binomial(const BigInt& n, unsigned long k) {
  BigInt r;
  mpz_bin_ui(r.get_mpz_t(), n.get_mpz_t(), k);
  return r;
}

inline Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline std::string to_string(const BigInt& v) { return v.get_str(); }

inline std::uint64_t to_u64(const BigInt& v) {
  std::uint64_t out = 0;
  if (v == 0) return 0;
  std::size_t words = 0;
  mpz_export(&out, &words, 1, sizeof out, 0, 0, v.get_mpz_t());
  return out;
}

inline bool fits_u64(const BigInt& v) { return v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 64; }

/// Classical Möbius function on positive integers (trial division).
inline int mobius_int(std::uint64_t n) {
  int sign = 1;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    n /= d;
    if (n % d == 0) return 0;
    sign = -sign;
  }
  if (n > 1) sign = -sign;
  return sign;
}

inline bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2)
    if (n % d == 0) return false;
  return true;
}

}  // namespace alladiff
