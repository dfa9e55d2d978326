#pragma once

// Finite fields F_q, q = p^e, at desk scale.
//
// Elements are dense coefficient vectors over F_p in the polynomial basis of
// the field modulus. A FieldElement stores that vector packed into a single
// integer code = c0 + c1*p + ... + c_{e-1}*p^{e-1}; FieldSpec::coeffs unpacks
// it. All operations go through the owning FieldSpec.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace alladiff {

/// Largest field cardinality accepted by default.
inline constexpr std::uint64_t kDefaultFieldBound = std::uint64_t{1} << 20;

struct FieldElement {
  std::uint32_t code = 0;

  friend constexpr auto operator<=>(const FieldElement&, const FieldElement&) = default;
};

namespace detail {

// Dense polynomials over a prime field, little-endian; used to pick the field
// modulus before any FieldSpec exists.
using PrimePoly = std::vector<std::uint32_t>;

inline void trim(PrimePoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

inline std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  // Fermat; p is prime
  std::uint64_t r = 1, b = a % p;
  for (std::uint64_t k = p - 2; k; k >>= 1) {
    if (k & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<std::uint32_t>(r);
}

inline PrimePoly prime_poly_rem(PrimePoly a, const PrimePoly& m, std::uint32_t p) {
  trim(a);
  const std::size_t dm = m.size() - 1;
  const std::uint64_t lead_inv = inv_mod_p(m.back(), p);
  while (a.size() > dm) {
    const std::uint64_t c = a.back() * lead_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    trim(a);
  }
  return a;
}

inline PrimePoly prime_poly_mulmod(const PrimePoly& a, const PrimePoly& b, const PrimePoly& m,
                                   std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  PrimePoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<std::uint32_t>((r[i + j] + std::uint64_t{a[i]} * b[j]) % p);
  return prime_poly_rem(std::move(r), m, p);
}

inline PrimePoly prime_poly_gcd(PrimePoly a, PrimePoly b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    PrimePoly r = prime_poly_rem(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

/// Ben-Or test: f of degree n is irreducible iff gcd(x^{p^i} - x, f) = 1 for i <= n/2.
inline bool prime_poly_is_irreducible(const PrimePoly& f, std::uint32_t p) {
  const std::size_t n = f.size() - 1;
  if (n == 1) return true;
  PrimePoly h = prime_poly_rem({0, 1}, f, p);
  for (std::size_t i = 1; 2 * i <= n; ++i) {
    PrimePoly base = h, acc{1};
    for (std::uint32_t k = p; k; k >>= 1) {
      if (k & 1) acc = prime_poly_mulmod(acc, base, f, p);
      base = prime_poly_mulmod(base, base, f, p);
    }
    h = acc;
    PrimePoly t = h;
    if (t.size() < 2) t.resize(2, 0);
    t[1] = (t[1] + p - 1) % p;
    trim(t);
    if (t.empty()) return false;  // f divides x^{p^i} - x
    if (prime_poly_gcd(t, f, p).size() > 1) return false;
  }
  return true;
}

}  // namespace detail

class FieldSpec {
 public:
  FieldSpec() = default;

  std::uint32_t characteristic() const { return d_->p; }
  unsigned degree() const { return d_->e; }
  std::uint64_t cardinality() const { return d_->q; }
  /// Monic modulus, little-endian, length e+1. Empty for prime fields.
  const std::vector<std::uint32_t>& modulus() const { return d_->modulus; }
  bool is_prime_field() const { return d_->e == 1; }

  FieldElement zero() const { return {0}; }
  FieldElement one() const { return {1}; }

  /// Image of an integer under Z -> F_p -> F_q.
  FieldElement from_int(std::int64_t v) const {
    const std::int64_t p = d_->p;
    return {static_cast<std::uint32_t>(((v % p) + p) % p)};
  }

  FieldElement from_code(std::uint64_t code) const {
    detail::require(code < d_->q, "field element code out of range");
    return {static_cast<std::uint32_t>(code)};
  }

  FieldElement from_coeffs(const std::vector<std::uint32_t>& c) const {
    detail::require(c.size() <= d_->e, "too many coefficients for field element");
    std::uint64_t code = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      detail::require(c[i] < d_->p, "coefficient not reduced mod p");
      code = code * d_->p + c[i];
    }
    return {static_cast<std::uint32_t>(code)};
  }

  std::vector<std::uint32_t> coeffs(FieldElement a) const {
    std::vector<std::uint32_t> c(d_->e, 0);
    std::uint32_t v = a.code;
    for (unsigned i = 0; i < d_->e; ++i) {
      c[i] = v % d_->p;
      v /= d_->p;
    }
    return c;
  }

  /// True when a lies in the prime subfield F_p.
  bool in_prime_field(FieldElement a) const { return a.code < d_->p; }

  FieldElement add(FieldElement a, FieldElement b) const {
    const std::uint32_t p = d_->p;
    if (d_->e == 1) return {(a.code + b.code) % p};
    std::uint32_t out = 0, scale = 1, x = a.code, y = b.code;
    for (unsigned i = 0; i < d_->e; ++i) {
      out += ((x % p + y % p) % p) * scale;
      x /= p;
      y /= p;
      scale *= p;
    }
    return {out};
  }

  FieldElement neg(FieldElement a) const {
    const std::uint32_t p = d_->p;
    if (d_->e == 1) return {(p - a.code) % p};
    std::uint32_t out = 0, scale = 1, x = a.code;
    for (unsigned i = 0; i < d_->e; ++i) {
      out += ((p - x % p) % p) * scale;
      x /= p;
      scale *= p;
    }
    return {out};
  }

  FieldElement sub(FieldElement a, FieldElement b) const { return add(a, neg(b)); }

  FieldElement mul(FieldElement a, FieldElement b) const {
    const std::uint64_t p = d_->p;
    if (d_->e == 1) return {static_cast<std::uint32_t>(std::uint64_t{a.code} * b.code % p)};
    const unsigned e = d_->e;
    const auto x = coeffs(a), y = coeffs(b);
    std::vector<std::uint64_t> prod(2 * e - 1, 0);
    for (unsigned i = 0; i < e; ++i) {
      if (x[i] == 0) continue;
      for (unsigned j = 0; j < e; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{x[i]} * y[j]) % p;
    }
    const auto& m = d_->modulus;
    for (std::size_t k = prod.size(); k-- > e;) {
      const std::uint64_t c = prod[k];
      if (c == 0) continue;
      // x^k = -(m_0 + ... + m_{e-1} x^{e-1}) x^{k-e}
      for (unsigned i = 0; i < e; ++i) prod[k - e + i] = (prod[k - e + i] + (p - c) * m[i]) % p;
      prod[k] = 0;
    }
    std::uint64_t out = 0;
    for (unsigned i = e; i-- > 0;) out = out * p + prod[i];
    return {static_cast<std::uint32_t>(out)};
  }

  FieldElement pow(FieldElement a, std::uint64_t k) const {
    FieldElement r = one(), base = a;
    for (; k; k >>= 1) {
      if (k & 1) r = mul(r, base);
      base = mul(base, base);
    }
    return r;
  }

  FieldElement pow(FieldElement a, const BigInt& k) const {
    detail::require(k >= 0, "negative exponent");
    if (a.code == 0) return k == 0 ? one() : zero();
    const BigInt reduced = k % big(d_->q - 1);
    return pow(a, to_u64(reduced));
  }

  FieldElement inv(FieldElement a) const {
    detail::require(a.code != 0, "inverse of zero in " + to_string());
    return pow(a, d_->q - 2);
  }

  /// a -> a^p
  FieldElement frobenius(FieldElement a) const { return pow(a, std::uint64_t{d_->p}); }

  /// Number of y in F_q with y^2 = c. Odd q only.
  unsigned num_sqrt(FieldElement c) const {
    detail::require(d_->q % 2 == 1, "num_sqrt requires odd q");
    if (c.code == 0) return 1;
    return pow(c, (d_->q - 1) / 2) == one() ? 2 : 0;
  }

  /// All q elements in code order: constant coefficient varying fastest.
  std::vector<FieldElement> elements() const {
    std::vector<FieldElement> out(d_->q);
    for (std::uint64_t i = 0; i < d_->q; ++i) out[i] = {static_cast<std::uint32_t>(i)};
    return out;
  }

  /// "p" for prime fields, "p^e:c0,c1,...,ce" otherwise.
  std::string to_string() const {
    std::ostringstream os;
    os << d_->p;
    if (d_->e > 1) {
      os << '^' << d_->e << ':';
      for (std::size_t i = 0; i < d_->modulus.size(); ++i) os << (i ? "," : "") << d_->modulus[i];
    }
    return os.str();
  }

  std::string element_to_string(FieldElement a) const {
    if (d_->e == 1) return std::to_string(a.code);
    std::ostringstream os;
    const auto c = coeffs(a);
    os << '[';
    for (std::size_t i = 0; i < c.size(); ++i) os << (i ? "," : "") << c[i];
    os << ']';
    return os.str();
  }

  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.d_ == b.d_ || (a.d_->p == b.d_->p && a.d_->e == b.d_->e && a.d_->modulus == b.d_->modulus);
  }

 private:
  struct Data {
    std::uint32_t p = 2;
    unsigned e = 1;
    std::uint64_t q = 2;
    std::vector<std::uint32_t> modulus;
  };

  explicit FieldSpec(std::shared_ptr<const Data> d) : d_(std::move(d)) {}

  std::shared_ptr<const Data> d_ = std::make_shared<const Data>();

  friend FieldSpec make_field_with_modulus(std::uint32_t, std::vector<std::uint32_t>, std::uint64_t);
  friend FieldSpec make_field(std::uint64_t, unsigned, std::uint64_t);
};

/// F_{p^e} with an explicitly chosen monic irreducible modulus of degree e.
inline FieldSpec make_field_with_modulus(std::uint32_t p, std::vector<std::uint32_t> modulus,
                                         std::uint64_t bound = kDefaultFieldBound) {
  detail::require(is_prime_u64(p), std::to_string(p) + " is not prime");
  detail::require(modulus.size() >= 2, "modulus must have degree >= 1");
  detail::require(modulus.back() == 1, "modulus must be monic");
  for (auto c : modulus) detail::require(c < p, "modulus coefficient not reduced mod p");
  const unsigned e = static_cast<unsigned>(modulus.size() - 1);
  BigInt q = ipow(p, e);
  detail::require(q <= big(bound), "field size exceeds desk-scale bound");
  detail::require(detail::prime_poly_is_irreducible(modulus, p), "modulus is not irreducible");
  auto d = std::make_shared<FieldSpec::Data>();
  d->p = p;
  d->e = e;
  d->q = to_u64(q);
  if (e > 1) d->modulus = std::move(modulus);
  return FieldSpec(std::move(d));
}

/// F_{p^e} whose modulus is the least monic irreducible of degree e, comparing
/// coefficient vectors from the constant term upward.
inline FieldSpec make_field(std::uint64_t p, unsigned e, std::uint64_t bound = kDefaultFieldBound) {
  detail::require(e >= 1, "extension degree must be >= 1");
  detail::require(is_prime_u64(p), std::to_string(p) + " is not prime");
  const BigInt q = ipow(p, e);
  detail::require(q <= big(bound), "field size " + q.get_str() + " exceeds desk-scale bound");
  auto d = std::make_shared<FieldSpec::Data>();
  d->p = static_cast<std::uint32_t>(p);
  d->e = e;
  d->q = to_u64(q);
  if (e > 1) {
    // Candidate index i enumerates (c0, ..., c_{e-1}) with c0 most significant.
    const std::uint64_t total = d->q;
    for (std::uint64_t i = 0; i < total; ++i) {
      detail::PrimePoly f(e + 1, 0);
      f[e] = 1;
      std::uint64_t v = i;
      for (unsigned k = e; k-- > 0;) {
        f[k] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      if (detail::prime_poly_is_irreducible(f, static_cast<std::uint32_t>(p))) {
        d->modulus = std::move(f);
        break;
      }
    }
    detail::ensure_consistent(!d->modulus.empty(), "no irreducible modulus found");
  }
  return FieldSpec(std::move(d));
}

/// Parses "p", "p^e", "p^e:c0,...,ce", or a prime power written as an integer.
inline FieldSpec parse_field(const std::string& text, std::uint64_t bound = kDefaultFieldBound) {
  auto num = [&text](const std::string& s) -> std::uint64_t {
    detail::require(!s.empty() && s.find_first_not_of("0123456789") == std::string::npos,
                    "cannot parse field spec '" + text + "'");
    return std::stoull(s);
  };
  try {
    const auto colon = text.find(':');
    const auto caret = text.find('^');
    if (caret == std::string::npos) {
      const std::uint64_t q = num(text);
      detail::require(q >= 2, "field size must be >= 2");
      std::uint64_t p = 2;
      while (q % p != 0) ++p;
      unsigned e = 0;
      std::uint64_t rest = q;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      detail::require(rest == 1, text + " is not a prime power");
      return make_field(p, e, bound);
    }
    const std::uint64_t p = num(text.substr(0, caret));
    const unsigned e = static_cast<unsigned>(num(text.substr(caret + 1, colon - caret - 1)));
    if (colon == std::string::npos) return make_field(p, e, bound);
    std::vector<std::uint32_t> modulus;
    std::istringstream is(text.substr(colon + 1));
    std::string tok;
    while (std::getline(is, tok, ',')) modulus.push_back(static_cast<std::uint32_t>(num(tok)));
    detail::require(modulus.size() == e + 1, "modulus length does not match extension degree");
    return make_field_with_modulus(static_cast<std::uint32_t>(p), std::move(modulus), bound);
  } catch (const std::logic_error& ex) {
    if (dynamic_cast<const ValidationError*>(&ex)) throw;
    throw ValidationError("cannot parse field spec '" + text + "'");
  }
}

}  // namespace alladiff
