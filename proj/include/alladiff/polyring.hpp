#pragma once

// Polynomials over F_q: arithmetic, monic enumeration, irreducibility,
// factorization by trial division against cached irreducible tables, and the
// F_q[x] Euler totient.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"
#include "gf.hpp"

namespace alladiff {

class Poly {
 public:
  Poly() = default;
  Poly(FieldSpec field, std::vector<FieldElement> coeffs) : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    normalize();
  }

  static Poly zero(const FieldSpec& f) { return Poly(f, {}); }
  static Poly constant(const FieldSpec& f, FieldElement c) { return Poly(f, {c}); }
  static Poly one(const FieldSpec& f) { return constant(f, f.one()); }
  static Poly monomial(const FieldSpec& f, int degree, FieldElement c) {
    std::vector<FieldElement> v(static_cast<std::size_t>(degree) + 1, f.zero());
    v.back() = c;
    return Poly(f, std::move(v));
  }
  static Poly x(const FieldSpec& f) { return monomial(f, 1, f.one()); }

  const FieldSpec& field() const { return field_; }
  const std::vector<FieldElement>& coeffs() const { return coeffs_; }
  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  FieldElement leading() const { return is_zero() ? field_.zero() : coeffs_.back(); }
  bool is_monic() const { return !is_zero() && coeffs_.back() == field_.one(); }
  FieldElement coeff(int i) const {
    return (i >= 0 && i <= degree()) ? coeffs_[static_cast<std::size_t>(i)] : field_.zero();
  }

  /// Comma-separated element codes, constant term first. "0" for zero.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::string out;
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(coeffs_[i].code);
    }
    return out;
  }

  /// Human-readable form, e.g. "x^2 + 2x + 1".
  std::string pretty() const {
    if (is_zero()) return "0";
    std::string out;
    for (int i = degree(); i >= 0; --i) {
      const auto c = coeffs_[static_cast<std::size_t>(i)];
      if (c.code == 0) continue;
      if (!out.empty()) out += " + ";
      const bool unit = c == field_.one();
      if (i == 0 || !unit) out += field_.element_to_string(c);
      if (i >= 1) out += "x";
      if (i >= 2) out += "^" + std::to_string(i);
    }
    return out;
  }

  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }

 private:
  void normalize() {
    while (!coeffs_.empty() && coeffs_.back().code == 0) coeffs_.pop_back();
  }

  FieldSpec field_;
  std::vector<FieldElement> coeffs_;
};

inline Poly operator+(const Poly& a, const Poly& b) {
  const auto& F = a.field();
  const std::size_t n = std::max(a.coeffs().size(), b.coeffs().size());
  std::vector<FieldElement> out(n, F.zero());
  for (std::size_t i = 0; i < n; ++i)
    out[i] = F.add(a.coeff(static_cast<int>(i)), b.coeff(static_cast<int>(i)));
  return Poly(F, std::move(out));
}

inline Poly operator-(const Poly& a) {
  const auto& F = a.field();
  std::vector<FieldElement> out(a.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.neg(a.coeffs()[i]);
  return Poly(F, std::move(out));
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b) {
  const auto& F = a.field();
  if (a.is_zero() || b.is_zero()) return Poly::zero(F);
  const auto& x = a.coeffs();
  const auto& y = b.coeffs();
  std::vector<FieldElement> out(x.size() + y.size() - 1, F.zero());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].code == 0) continue;
    for (std::size_t j = 0; j < y.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(x[i], y[j]));
  }
  return Poly(F, std::move(out));
}

inline Poly scale(const Poly& a, FieldElement c) {
  const auto& F = a.field();
  std::vector<FieldElement> out(a.coeffs().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = F.mul(a.coeffs()[i], c);
  return Poly(F, std::move(out));
}

struct DivRem {
  Poly quotient;
  Poly remainder;
};

inline DivRem divrem(const Poly& a, const Poly& b) {
  detail::require(!b.is_zero(), "polynomial division by zero");
  const auto& F = a.field();
  if (a.degree() < b.degree()) return {Poly::zero(F), a};
  std::vector<FieldElement> rem = a.coeffs();
  const auto& d = b.coeffs();
  const std::size_t db = d.size() - 1;
  const FieldElement lead_inv = F.inv(d.back());
  std::vector<FieldElement> quot(rem.size() - db, F.zero());
  for (std::size_t k = rem.size(); k-- > db;) {
    const FieldElement c = F.mul(rem[k], lead_inv);
    quot[k - db] = c;
    if (c.code == 0) continue;
    for (std::size_t i = 0; i <= db; ++i) rem[k - db + i] = F.sub(rem[k - db + i], F.mul(c, d[i]));
  }
  rem.resize(db);
  return {Poly(F, std::move(quot)), Poly(F, std::move(rem))};
}

inline Poly operator%(const Poly& a, const Poly& b) { return divrem(a, b).remainder; }

/// Scales a nonzero polynomial to leading coefficient 1.
inline Poly make_monic(const Poly& f) {
  if (f.is_zero()) return f;
  return scale(f, f.field().inv(f.leading()));
}

/// Monic gcd; gcd(0, 0) = 0.
inline Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(a);
}

inline Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

inline Poly powmod(Poly base, BigInt exp, const Poly& m) {
  Poly r = Poly::one(base.field()) % m;
  base = base % m;
  while (exp > 0) {
    if (mpz_odd_p(exp.get_mpz_t())) r = mulmod(r, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return r;
}

/// Remainder of f modulo g.
inline Poly residue_class(const Poly& f, const Poly& g) { return f % g; }

// --- monic enumeration --------------------------------------------------------
//
// Monic polynomials of degree n are indexed by code = sum_{i<n} c_i q^i, so the
// constant term varies fastest.

inline std::uint64_t monic_code(const Poly& f) {
  const std::uint64_t q = f.field().cardinality();
  std::uint64_t code = 0;
  for (int i = f.degree() - 1; i >= 0; --i) code = code * q + f.coeffs()[static_cast<std::size_t>(i)].code;
  return code;
}

inline Poly monic_from_code(const FieldSpec& F, int n, std::uint64_t code) {
  const std::uint64_t q = F.cardinality();
  std::vector<FieldElement> c(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) {
    c[static_cast<std::size_t>(i)] = {static_cast<std::uint32_t>(code % q)};
    code /= q;
  }
  c.back() = F.one();
  return Poly(F, std::move(c));
}

/// q^n, or throws if it does not fit the enumeration bound.
inline std::uint64_t monic_count(const FieldSpec& F, int n, std::uint64_t bound) {
  const BigInt total = ipow(F.cardinality(), static_cast<unsigned long>(n));
  detail::require(total <= big(bound),
                  "enumerating " + total.get_str() + " monic polynomials exceeds the desk-scale bound");
  return to_u64(total);
}

inline Poly parse_poly(const FieldSpec& F, const std::string& text);

// --- irreducibility -----------------------------------------------------------

/// Ben-Or: f of degree n is irreducible iff gcd(x^{q^i} - x, f) = 1 for 1 <= i <= n/2.
inline bool is_irreducible(const Poly& f) {
  detail::require(f.degree() >= 1, "is_irreducible needs a non-constant polynomial");
  if (f.degree() == 1) return true;
  const Poly m = make_monic(f);
  const Poly x = Poly::x(f.field()) % m;
  const BigInt q = big(f.field().cardinality());
  Poly h = x;
  for (int i = 1; 2 * i <= m.degree(); ++i) {
    h = powmod(h, q, m);
    const Poly g = gcd(h - x, m);
    if (g.degree() != 0) return false;
  }
  return true;
}

/// Number of monic irreducibles of degree n over F_q: (1/n) sum_{d|n} mu(d) q^{n/d}.
inline BigInt count_irreducibles(std::uint64_t q, int n) {
  detail::require(n >= 1, "degree must be >= 1");
  BigInt total = 0;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    const int mu = mobius_int(static_cast<std::uint64_t>(d));
    if (mu != 0) total += mu * ipow(q, static_cast<unsigned long>(n / d));
  }
  return total / n;
}

inline constexpr std::uint64_t kSieveBound = std::uint64_t{1} << 25;
inline constexpr int kCacheFormatVersion = 1;

namespace detail {

inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t v) {
  std::ostringstream os;
  os << std::hex;
  os.width(16);
  os.fill('0');
  os << v;
  return os.str();
}

/// File-name-safe tag for a field spec.
inline std::string field_tag(const FieldSpec& F) {
  std::string s = F.to_string();
  for (char& c : s) {
    if (c == '^') c = 'e';
    else if (c == ':') c = 'm';
    else if (c == ',') c = '_';
  }
  return s;
}

}  // namespace detail

/// Cache of irreducible tables keyed by (field, degree). Concurrent readers are
/// allowed; construction of a missing key is serialized. With a directory,
/// tables are persisted as "q=<field> n=<n> count=<c> checksum=<hex>" followed
/// by one serialized Poly per line.
class IrreducibleCache {
 public:
  IrreducibleCache() = default;
  explicit IrreducibleCache(std::filesystem::path dir) : dir_(std::move(dir)) {}

  /// Loads or builds the degree-n table. Only the requested table is written
  /// back to the directory; tables consulted while sieving stay in memory.
  const std::vector<Poly>& get(const FieldSpec& F, int n) { return get_impl(F, n, true); }

  /// Index of a monic irreducible within its degree's table.
  std::size_t index_of(const Poly& P) {
    const auto& table = get(P.field(), P.degree());
    const std::uint64_t code = monic_code(P);
    auto it = std::lower_bound(table.begin(), table.end(), code,
                               [](const Poly& a, std::uint64_t c) { return monic_code(a) < c; });
    detail::require(it != table.end() && *it == P, "polynomial is not a monic irreducible");
    return static_cast<std::size_t>(it - table.begin());
  }

  const std::optional<std::filesystem::path>& directory() const { return dir_; }
  std::size_t corrupt_rebuilds() const { return corrupt_rebuilds_; }

  std::filesystem::path file_for(const FieldSpec& F, int n) const {
    return *dir_ / ("alladiff-v" + std::to_string(kCacheFormatVersion) + "-irr-q" + detail::field_tag(F) + "-n" +
                    std::to_string(n) + ".txt");
  }

  static std::string serialize(const FieldSpec& F, int n, const std::vector<Poly>& table) {
    std::string body;
    for (const auto& P : table) body += P.to_string() + "\n";
    return "q=" + F.to_string() + " n=" + std::to_string(n) + " count=" + std::to_string(table.size()) +
           " checksum=" + detail::hex64(detail::fnv1a(body)) + "\n" + body;
  }

 private:
  const std::vector<Poly>& get_impl(const FieldSpec& F, int n, bool persist) {
    detail::require(n >= 1, "degree must be >= 1");
    const std::string key = F.to_string() + "|" + std::to_string(n);
    {
      std::shared_lock lock(map_mutex_);
      if (auto it = tables_.find(key); it != tables_.end()) return *it->second;
    }
    std::lock_guard build(build_mutex_);
    {
      std::shared_lock lock(map_mutex_);
      if (auto it = tables_.find(key); it != tables_.end()) return *it->second;
    }
    auto table = std::make_shared<std::vector<Poly>>();
    if (!load(F, n, *table)) {
      *table = sieve(F, n);
      if (persist) store(F, n, *table);
    }
    std::unique_lock lock(map_mutex_);
    auto [it, inserted] = tables_.emplace(key, std::move(table));
    return *it->second;
  }

  std::vector<Poly> sieve(const FieldSpec& F, int n) {
    const std::uint64_t total = monic_count(F, n, kSieveBound);
    std::vector<bool> reducible(total, false);
    for (int d = 1; 2 * d <= n; ++d) {
      const auto& small = get_impl(F, d, false);
      const std::uint64_t cofactors = monic_count(F, n - d, kSieveBound);
      for (const auto& P : small)
        for (std::uint64_t c = 0; c < cofactors; ++c) reducible[monic_code(P * monic_from_code(F, n - d, c))] = true;
    }
    std::vector<Poly> out;
    for (std::uint64_t c = 0; c < total; ++c)
      if (!reducible[c]) out.push_back(monic_from_code(F, n, c));
    detail::ensure_consistent(big(out.size()) == count_irreducibles(F.cardinality(), n),
                              "irreducible sieve disagrees with the Gauss count");
    return out;
  }

  bool load(const FieldSpec& F, int n, std::vector<Poly>& out) {
    if (!dir_) return false;
    const auto path = file_for(F, n);
    std::ifstream in(path);
    if (!in) return false;
    std::string header, line, body;
    std::getline(in, header);
    std::vector<Poly> polys;
    while (std::getline(in, line)) {
      body += line + "\n";
      try {
        polys.push_back(parse_poly(F, line));
      } catch (const ValidationError&) {
        ++corrupt_rebuilds_;
        return false;
      }
    }
    const std::string expect = serialize(F, n, polys);
    const bool ok = expect.substr(0, expect.find('\n')) == header && big(polys.size()) ==
                    count_irreducibles(F.cardinality(), n) &&
                    header.find(detail::hex64(detail::fnv1a(body))) != std::string::npos;
    if (!ok) {
      ++corrupt_rebuilds_;
      return false;
    }
    out = std::move(polys);
    return true;
  }

  void store(const FieldSpec& F, int n, const std::vector<Poly>& table) const {
    if (!dir_) return;
    std::filesystem::create_directories(*dir_);
    const auto path = file_for(F, n);
    const auto tmp = path.string() + ".tmp";
    {
      std::ofstream os(tmp, std::ios::binary);
      os << serialize(F, n, table);
    }
    std::filesystem::rename(tmp, path);
  }

  std::optional<std::filesystem::path> dir_;
  std::map<std::string, std::shared_ptr<std::vector<Poly>>> tables_;
  std::shared_mutex map_mutex_;
  std::recursive_mutex build_mutex_;
  std::size_t corrupt_rebuilds_ = 0;
};

/// Process-wide in-memory cache used when callers do not supply one.
inline IrreducibleCache& default_irreducible_cache() {
  static IrreducibleCache cache;
  return cache;
}

/// All monic irreducibles of degree n, in monic-code order.
inline std::vector<Poly> irreducibles_of_degree(const FieldSpec& F, int n, IrreducibleCache* cache = nullptr) {
  return (cache ? *cache : default_irreducible_cache()).get(F, n);
}

// --- factorization --------------------------------------------------------------

struct Factorization {
  FieldElement unit;
  /// (monic irreducible, multiplicity), ordered by degree then monic code.
  std::vector<std::pair<Poly, int>> factors;

  Poly expand(const FieldSpec& F) const {
    Poly out = Poly::constant(F, unit);
    for (const auto& [P, e] : factors)
      for (int i = 0; i < e; ++i) out = out * P;
    return out;
  }
};

/// Trial division against the irreducible tables up to deg f / 2; whatever
/// survives is irreducible.
inline Factorization factor(const Poly& f, IrreducibleCache* cache = nullptr) {
  detail::require(!f.is_zero(), "cannot factor the zero polynomial");
  auto& tables = cache ? *cache : default_irreducible_cache();
  const auto& F = f.field();
  Factorization out{f.leading(), {}};
  Poly rest = make_monic(f);
  for (int d = 1; 2 * d <= rest.degree(); ++d) {
    for (const auto& P : tables.get(F, d)) {
      if (2 * d > rest.degree()) break;
      int mult = 0;
      for (;;) {
        auto [quot, rem] = divrem(rest, P);
        if (!rem.is_zero()) break;
        rest = std::move(quot);
        ++mult;
      }
      if (mult) out.factors.emplace_back(P, mult);
    }
  }
  // every factor of rest now has degree > deg(rest)/2
  if (rest.degree() >= 1) out.factors.emplace_back(rest, 1);
  std::stable_sort(out.factors.begin(), out.factors.end(), [](const auto& a, const auto& b) {
    if (a.first.degree() != b.first.degree()) return a.first.degree() < b.first.degree();
    return monic_code(a.first) < monic_code(b.first);
  });
  return out;
}

/// Number of units of F_q[x]/(g): prod (q^{d e} - q^{d (e-1)}) over g = prod P^e.
inline BigInt euler_phi(const Poly& g, IrreducibleCache* cache = nullptr) {
  detail::require(g.degree() >= 1, "euler_phi needs a non-constant modulus");
  detail::require(g.is_monic(), "euler_phi needs a monic modulus");
  const std::uint64_t q = g.field().cardinality();
  BigInt phi = 1;
  for (const auto& [P, e] : factor(g, cache).factors) {
    const auto d = static_cast<unsigned long>(P.degree());
    phi *= ipow(q, d * static_cast<unsigned long>(e)) - ipow(q, d * static_cast<unsigned long>(e - 1));
  }
  return phi;
}

// --- parsing --------------------------------------------------------------------

/// Accepts either comma-separated element codes ("1,0,1") or an expression in x
/// such as "x^2+2x+1" / "2*x^3 - x". Integer coefficients are element codes
/// (reduced mod p for prime fields).
inline Poly parse_poly(const FieldSpec& F, const std::string& raw) {
  std::string text;
  for (char c : raw)
    if (!std::isspace(static_cast<unsigned char>(c))) text += c;
  detail::require(!text.empty(), "empty polynomial");
  auto parse_coeff = [&](const std::string& s) -> FieldElement {
    for (char c : s) detail::require(std::isdigit(static_cast<unsigned char>(c)), "bad coefficient '" + s + "'");
    const std::uint64_t v = std::stoull(s);
    if (F.is_prime_field()) return F.from_int(static_cast<std::int64_t>(v % F.characteristic()));
    return F.from_code(v);
  };
  if (text.find('x') == std::string::npos) {
    std::vector<FieldElement> c;
    std::istringstream is(text);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      c.push_back(parse_coeff(tok));
      detail::require(std::stoull(tok) < F.cardinality(), "coefficient code '" + tok + "' out of range");
    }
    return Poly(F, std::move(c));
  }
  Poly out = Poly::zero(F);
  std::size_t i = 0;
  while (i < text.size()) {
    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
      negative = text[i] == '-';
      ++i;
    }
    std::size_t j = i;
    while (j < text.size() && text[j] != '+' && text[j] != '-') ++j;
    const std::string term = text.substr(i, j - i);
    detail::require(!term.empty(), "bad polynomial '" + raw + "'");
    FieldElement c = F.one();
    int power = 0;
    const auto xpos = term.find('x');
    if (xpos == std::string::npos) {
      c = parse_coeff(term);
    } else {
      std::string head = term.substr(0, xpos);
      if (!head.empty() && head.back() == '*') head.pop_back();
      if (!head.empty()) c = parse_coeff(head);
      const std::string tail = term.substr(xpos + 1);
      if (tail.empty()) {
        power = 1;
      } else {
        detail::require(tail.size() > 1 && tail[0] == '^', "bad exponent in '" + term + "'");
        for (std::size_t k = 1; k < tail.size(); ++k)
          detail::require(std::isdigit(static_cast<unsigned char>(tail[k])), "bad exponent in '" + term + "'");
        power = std::stoi(tail.substr(1));
      }
    }
    if (negative) c = F.neg(c);
    out = out + Poly::monomial(F, power, c);
    i = j;
  }
  return out;
}

}  // namespace alladiff
