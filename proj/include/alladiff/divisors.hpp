#pragma once

// Effective divisors of a function field described only by its places, and
// exact generating-function engines for the counting sums built on them.
//
// The engines read a PlaceTable: counts[k] places of degree k, of which
// s_counts[k] lie in the prime set S. Every sum here depends on places only
// through those two numbers, so abstract tables and concrete ones (F_q(x),
// elliptic function fields) share the same code.

#include <algorithm>
#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "bigint.hpp"
#include "errors.hpp"

namespace alladiff {

/// A prime divisor, identified by its degree and its position within that
/// degree in the owning PlaceTable.
struct Place {
  int degree = 1;
  std::uint64_t index = 0;

  friend constexpr auto operator<=>(const Place&, const Place&) = default;
};

using Membership = std::function<bool(const Place&)>;
/// Arithmetic weight on degrees; must vanish at 0.
using DegreeWeight = std::function<std::int64_t(int)>;

class Divisor {
 public:
  Divisor() = default;
  Divisor(std::initializer_list<std::pair<const Place, int>> terms) {
    for (const auto& [P, a] : terms) add(P, a);
  }

  void add(const Place& P, int multiplicity = 1) {
    detail::require(multiplicity >= 1, "multiplicities of an effective divisor are positive");
    detail::require(P.degree >= 1, "place degree must be >= 1");
    support_[P] += multiplicity;
  }

  /// Removes multiplicity; drops the place when it reaches zero.
  void remove(const Place& P, int multiplicity = 1) {
    auto it = support_.find(P);
    detail::require(it != support_.end() && it->second >= multiplicity, "result would not be effective");
    if ((it->second -= multiplicity) == 0) support_.erase(it);
  }

  const std::map<Place, int>& support() const { return support_; }
  bool is_zero() const { return support_.empty(); }
  int multiplicity(const Place& P) const {
    auto it = support_.find(P);
    return it == support_.end() ? 0 : it->second;
  }

  int degree() const {
    int d = 0;
    for (const auto& [P, a] : support_) d += a * P.degree;
    return d;
  }

  /// B <= A: A - B is effective.
  bool divides(const Divisor& A) const {
    for (const auto& [P, b] : support_)
      if (A.multiplicity(P) < b) return false;
    return true;
  }

  /// e.g. "2*P(1,0) + P(3,4)"; "0" for the zero divisor.
  std::string to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [P, a] : support_) {
      if (!first) os << " + ";
      first = false;
      if (a != 1) os << a << '*';
      os << "P(" << P.degree << ',' << P.index << ')';
    }
    return os.str();
  }

  friend bool operator==(const Divisor&, const Divisor&) = default;

 private:
  std::map<Place, int> support_;
};

inline int mobius(const Divisor& D) {
  int sign = 1;
  for (const auto& [P, a] : D.support()) {
    if (a > 1) return 0;
    sign = -sign;
  }
  return sign;
}

/// Smallest degree of a prime factor. Undefined (and rejected) for D = 0.
inline int d_minus(const Divisor& D) {
  detail::require(!D.is_zero(), "d_minus of the zero divisor is undefined");
  return D.support().begin()->first.degree;
}

/// Largest degree of a prime factor; 0 for D = 0.
inline int d_plus(const Divisor& D) { return D.is_zero() ? 0 : D.support().rbegin()->first.degree; }

/// D != 0 and exactly one prime factor attains d_minus(D).
inline bool is_distinguishable(const Divisor& D) {
  if (D.is_zero()) return false;
  const auto& s = D.support();
  auto it = s.begin();
  const int low = it->first.degree;
  return ++it == s.end() || it->first.degree != low;
}

inline Place p_min(const Divisor& D) {
  detail::require(is_distinguishable(D), "p_min requires a distinguishable divisor");
  return D.support().begin()->first;
}

/// Number of prime factors of D in S attaining d_plus(D).
inline std::uint64_t q_count(const Divisor& D, const Membership& in_s) {
  if (D.is_zero()) return 0;
  const int top = d_plus(D);
  std::uint64_t n = 0;
  for (const auto& [P, a] : D.support())
    if (P.degree == top && in_s(P)) ++n;
  return n;
}

/// Visits every effective B <= A (including 0 and A itself).
inline void for_each_subdivisor(const Divisor& A, const std::function<void(const Divisor&)>& visit) {
  std::vector<std::pair<Place, int>> terms(A.support().begin(), A.support().end());
  Divisor B;
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == terms.size()) {
      visit(B);
      return;
    }
    rec(i + 1);
    for (int m = 1; m <= terms[i].second; ++m) {
      B.add(terms[i].first);
      rec(i + 1);
    }
    B.remove(terms[i].first, terms[i].second);
  };
  rec(0);
}

/// Sum of mu(B) over B <= A; 1 for A = 0 and 0 otherwise.
inline int mobius_subdivisor_sum(const Divisor& A) {
  int total = 0;
  for_each_subdivisor(A, [&](const Divisor& B) { total += mobius(B); });
  return total;
}

/// Membership in D(K, S): distinguishable with P_min in S.
inline bool in_distinguished_set(const Divisor& B, const Membership& in_s) {
  return is_distinguishable(B) && in_s(p_min(B));
}

struct DualitySides {
  BigInt lhs;  // sum_{B<=A} mu(B) 1_D(K,S)(B) f(d_-(B))
  BigInt rhs;  // -Q_S(A) f(d_+(A))
  bool holds() const { return lhs == rhs; }
};

inline DualitySides duality_sides(const Divisor& A, const Membership& in_s, const DegreeWeight& f) {
  detail::require(f(0) == 0, "duality weight must satisfy f(0) = 0");
  DualitySides out;
  for_each_subdivisor(A, [&](const Divisor& B) {
    const int mu = mobius(B);
    if (mu == 0 || !in_distinguished_set(B, in_s)) return;
    out.lhs += mu * big_signed(f(d_minus(B)));
  });
  out.rhs = -big(q_count(A, in_s)) * big_signed(f(d_plus(A)));
  return out;
}

/// Checks the min/max prime-factor duality for a single effective divisor.
inline bool duality_check(const Divisor& A, const Membership& in_s, const DegreeWeight& f) {
  return duality_sides(A, in_s, f).holds();
}

// --- place tables ---------------------------------------------------------------

struct PlaceTable {
  std::uint64_t q = 2;
  /// counts[k] = number of places of degree k; index 0 unused. n_max = size - 1.
  std::vector<BigInt> counts{0};
  /// s_counts[k] = number of degree-k places in S.
  std::optional<std::vector<BigInt>> s_counts;
  /// labels[k][i] names place (k, i).
  std::optional<std::vector<std::vector<std::string>>> labels;
  std::optional<BigInt> class_number;
  std::optional<int> genus;
  std::string s_description = "all";

  int n_max() const { return static_cast<int>(counts.size()) - 1; }

  const BigInt& count(int k) const {
    detail::require(k >= 1 && k <= n_max(), "degree " + std::to_string(k) + " not tabulated");
    return counts[static_cast<std::size_t>(k)];
  }

  const BigInt& s_count(int k) const {
    detail::require(s_counts.has_value(), "place table has no S-counts");
    detail::require(k >= 1 && k <= n_max(), "degree " + std::to_string(k) + " not tabulated");
    return (*s_counts)[static_cast<std::size_t>(k)];
  }

  bool labeled_through(int n) const {
    if (!labels || static_cast<int>(labels->size()) <= n) return false;
    for (int k = 1; k <= n; ++k)
      if (big((*labels)[static_cast<std::size_t>(k)].size()) != counts[static_cast<std::size_t>(k)]) return false;
    return true;
  }

  /// Default S-membership for degree-determined sets: the first s_counts[k]
  /// places of each degree are in S.
  Membership s_membership() const {
    detail::require(s_counts.has_value(), "place table has no S-counts");
    auto sc = *s_counts;
    return [sc](const Place& P) {
      return P.degree < static_cast<int>(sc.size()) && big(P.index) < sc[static_cast<std::size_t>(P.degree)];
    };
  }

  /// c_K = h q^{1-g} / (q - 1), the leading constant of b_n.
  Rational leading_constant() const {
    detail::require(class_number && genus, "place table lacks class number and genus");
    Rational c(*class_number, 1);
    if (*genus <= 1)
      c *= ipow(q, static_cast<unsigned long>(1 - *genus));
    else
      c /= ipow(q, static_cast<unsigned long>(*genus - 1));
    c /= big(q - 1);
    c.canonicalize();
    return c;
  }

  void validate() const {
    detail::require(q >= 2, "q must be >= 2");
    detail::require(!counts.empty() && counts[0] == 0, "counts[0] must be 0");
    for (const auto& c : counts) detail::require(c >= 0, "place counts must be non-negative");
    if (s_counts) {
      detail::require(s_counts->size() == counts.size(), "s_counts length must match counts");
      for (std::size_t k = 0; k < counts.size(); ++k)
        detail::require((*s_counts)[k] >= 0 && (*s_counts)[k] <= counts[k], "need 0 <= s_counts[k] <= counts[k]");
    }
    if (labels) {
      for (std::size_t k = 1; k < labels->size() && k < counts.size(); ++k)
        detail::require((*labels)[k].empty() || big((*labels)[k].size()) == counts[k],
                        "label block size must match count at degree " + std::to_string(k));
    }
  }

  /// Versioned text form: a header line, one "deg=k count=c scount=s" line per
  /// degree, then optional "labels deg=k" blocks.
  std::string serialize() const {
    std::ostringstream os;
    os << "# alladiff-placetable v1\n";
    os << "q=" << q << " nmax=" << n_max();
    if (class_number) os << " h=" << class_number->get_str();
    if (genus) os << " g=" << *genus;
    os << '\n';
    for (int k = 1; k <= n_max(); ++k) {
      os << "deg=" << k << " count=" << counts[static_cast<std::size_t>(k)].get_str();
      if (s_counts) os << " scount=" << (*s_counts)[static_cast<std::size_t>(k)].get_str();
      os << '\n';
    }
    if (labels) {
      for (std::size_t k = 1; k < labels->size(); ++k) {
        if ((*labels)[k].empty()) continue;
        os << "labels deg=" << k << '\n';
        for (const auto& l : (*labels)[k]) os << l << '\n';
      }
    }
    return os.str();
  }

  static PlaceTable parse(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    detail::require(std::getline(is, line) && line == "# alladiff-placetable v1", "unsupported place table format");
    detail::require(static_cast<bool>(std::getline(is, line)), "missing place table header");
    auto field = [](const std::string& l, const std::string& key) -> std::optional<std::string> {
      std::istringstream ls(l);
      std::string tok;
      while (ls >> tok)
        if (tok.rfind(key + "=", 0) == 0) return tok.substr(key.size() + 1);
      return std::nullopt;
    };
    PlaceTable t;
    try {
      t.q = std::stoull(field(line, "q").value());
      const int nmax = std::stoi(field(line, "nmax").value());
      if (auto h = field(line, "h")) t.class_number = BigInt(*h);
      if (auto g = field(line, "g")) t.genus = std::stoi(*g);
      t.counts.assign(static_cast<std::size_t>(nmax) + 1, 0);
      bool any_s = false;
      std::vector<BigInt> s(static_cast<std::size_t>(nmax) + 1, 0);
      for (int k = 1; k <= nmax; ++k) {
        detail::require(static_cast<bool>(std::getline(is, line)), "truncated place table");
        detail::require(std::stoi(field(line, "deg").value()) == k, "place table degrees out of order");
        t.counts[static_cast<std::size_t>(k)] = BigInt(field(line, "count").value());
        if (auto sc = field(line, "scount")) {
          s[static_cast<std::size_t>(k)] = BigInt(*sc);
          any_s = true;
        }
      }
      if (any_s) t.s_counts = std::move(s);
      while (std::getline(is, line)) {
        if (line.empty()) continue;
        detail::require(line.rfind("labels deg=", 0) == 0, "unexpected line in place table: " + line);
        const int k = std::stoi(line.substr(11));
        detail::require(k >= 1 && k <= nmax, "label block degree out of range");
        if (!t.labels) t.labels.emplace(static_cast<std::size_t>(nmax) + 1);
        auto& block = (*t.labels)[static_cast<std::size_t>(k)];
        const std::uint64_t n = to_u64(t.counts[static_cast<std::size_t>(k)]);
        for (std::uint64_t i = 0; i < n; ++i) {
          detail::require(static_cast<bool>(std::getline(is, line)), "truncated label block");
          block.push_back(line);
        }
      }
    } catch (const std::bad_optional_access&) {
      throw ValidationError("place table header or degree line missing a field");
    } catch (const std::invalid_argument& ex) {
      if (dynamic_cast<const ValidationError*>(&ex)) throw;
      throw ValidationError("malformed number in place table");
    }
    t.validate();
    return t;
  }
};

/// Attaches index labels "k.i" through degree n (abstract places).
inline PlaceTable with_index_labels(PlaceTable t, int n) {
  detail::require(n <= t.n_max(), "cannot label beyond n_max");
  t.labels.emplace(static_cast<std::size_t>(t.n_max()) + 1);
  for (int k = 1; k <= n; ++k) {
    const std::uint64_t c = to_u64(t.counts[static_cast<std::size_t>(k)]);
    auto& block = (*t.labels)[static_cast<std::size_t>(k)];
    for (std::uint64_t i = 0; i < c; ++i) block.push_back(std::to_string(k) + "." + std::to_string(i));
  }
  return t;
}

/// Visits every effective divisor of degree exactly n, each once, in a fixed
/// order. With max_part set, only divisors with d_plus = max_part are visited,
/// which partitions the enumeration for parallel consumers.
inline void for_each_effective_divisor(const PlaceTable& table, int n, const std::function<void(const Divisor&)>& visit,
                                       std::optional<int> max_part = std::nullopt) {
  detail::require(n >= 0 && n <= table.n_max(), "degree out of tabulated range");
  detail::require(table.labeled_through(n), "enumeration needs place labels through degree " + std::to_string(n));
  std::vector<Place> places;
  const int top = max_part.value_or(n);
  for (int k = 1; k <= std::min(n, top); ++k) {
    const std::uint64_t c = to_u64(table.counts[static_cast<std::size_t>(k)]);
    for (std::uint64_t i = 0; i < c; ++i) places.push_back({k, i});
  }
  Divisor D;
  std::function<void(std::size_t, int)> rec = [&](std::size_t i, int remaining) {
    if (remaining == 0) {
      if (!max_part || d_plus(D) == *max_part) visit(D);
      return;
    }
    if (i == places.size() || places[i].degree > remaining) return;
    rec(i + 1, remaining);
    const Place P = places[i];
    int used = 0;
    while (remaining >= P.degree) {
      D.add(P);
      ++used;
      remaining -= P.degree;
      rec(i + 1, remaining);
    }
    if (used) D.remove(P, used);
  };
  if (max_part && n == 0) return;
  rec(0, n);
}

inline std::vector<Divisor> enumerate_effective_divisors(const PlaceTable& table, int n) {
  std::vector<Divisor> out;
  for_each_effective_divisor(table, n, [&](const Divisor& D) { out.push_back(D); });
  return out;
}

// --- generating-function engines ---------------------------------------------------

namespace detail {

using Series = std::vector<BigInt>;

/// s <- s * (1 - t^k)^c   (inverse = false)  or  s * (1 - t^k)^{-c}  (inverse = true),
/// truncated at t^N. Coefficients are exact integer binomials.
inline void apply_euler_factor(Series& s, int k, const BigInt& c, bool inverse, int N) {
  if (c == 0 || k > N) return;
  const int terms = N / k;
  std::vector<BigInt> f(static_cast<std::size_t>(terms) + 1);
  for (int j = 0; j <= terms; ++j) {
    const auto uj = static_cast<unsigned long>(j);
    if (inverse) {
      f[static_cast<std::size_t>(j)] = binomial(c + j - 1, uj);  // C(c+j-1, j)
    } else {
      f[static_cast<std::size_t>(j)] = binomial(c, uj);
      if (j % 2) f[static_cast<std::size_t>(j)] = -f[static_cast<std::size_t>(j)];
    }
  }
  for (int t = N; t >= 0; --t) {
    BigInt acc = 0;
    for (int j = 0; j * k <= t; ++j) {
      const auto& a = s[static_cast<std::size_t>(t - j * k)];
      if (a != 0) acc += f[static_cast<std::size_t>(j)] * a;
    }
    s[static_cast<std::size_t>(t)] = std::move(acc);
  }
}

/// prod_{lo <= k <= hi} (1 - t^k)^{+-counts[k]} truncated at t^N.
inline Series euler_product(const PlaceTable& table, int lo, int hi, bool inverse, int N) {
  Series s(static_cast<std::size_t>(N) + 1, 0);
  s[0] = 1;
  for (int k = std::max(lo, 1); k <= std::min(hi, N); ++k)
    apply_euler_factor(s, k, table.count(k), inverse, N);
  return s;
}

inline void require_degree(const PlaceTable& table, int n) {
  require(n >= 0, "degree must be non-negative");
  require(n <= table.n_max(), "degree " + std::to_string(n) + " exceeds table n_max " + std::to_string(table.n_max()));
}

}  // namespace detail

/// b_n: number of effective divisors of degree n.
inline BigInt count_bn(const PlaceTable& table, int n) {
  detail::require_degree(table, n);
  return detail::euler_product(table, 1, n, true, n)[static_cast<std::size_t>(n)];
}

/// b_0, ..., b_n.
inline std::vector<BigInt> count_bn_all(const PlaceTable& table, int n) {
  detail::require_degree(table, n);
  return detail::euler_product(table, 1, n, true, n);
}

/// Psi(n, m): effective divisors of degree n whose prime factors have degree <= m.
inline BigInt psi(const PlaceTable& table, int n, int m) {
  detail::require_degree(table, n);
  detail::require(m >= 1, "smoothness bound must be >= 1");
  return detail::euler_product(table, 1, std::min(m, n), true, n)[static_cast<std::size_t>(n)];
}

/// M(n, m) = sum of mu(A) over deg A <= n with d_-(A) > m, the zero divisor included.
inline BigInt big_m(const PlaceTable& table, int n, int m) {
  detail::require_degree(table, n);
  detail::require(m >= 0, "m must be >= 0");
  const auto s = detail::euler_product(table, m + 1, n, false, n);
  BigInt total = 0;
  for (const auto& c : s) total += c;
  return total;
}

/// Phi(n, m) = number of A with deg A <= n and d_-(A) > m, the zero divisor included.
inline BigInt big_phi(const PlaceTable& table, int n, int m) {
  detail::require_degree(table, n);
  detail::require(m >= 0, "m must be >= 0");
  const auto s = detail::euler_product(table, m + 1, n, true, n);
  BigInt total = 0;
  for (const auto& c : s) total += c;
  return total;
}

/// sum over deg A = n of Q_S(A) f(d_+(A)) = sum_k s_k f(k) Psi(n - k, k).
inline BigInt weighted_q_sum(const PlaceTable& table, int n, const DegreeWeight& f) {
  detail::require_degree(table, n);
  BigInt total = 0;
  for (int k = 1; k <= n; ++k) {
    const BigInt& sk = table.s_count(k);
    if (sk == 0) continue;
    const std::int64_t w = f(k);
    if (w == 0) continue;
    const int rest = n - k;
    const BigInt smooth = detail::euler_product(table, 1, std::min(k, rest), true, rest)[static_cast<std::size_t>(rest)];
    total += sk * big_signed(w) * smooth;
  }
  return total;
}

/// sum over deg A = n of Q_S(A).
inline BigInt q_sum(const PlaceTable& table, int n) {
  return weighted_q_sum(table, n, [](int k) -> std::int64_t { return k > 0 ? 1 : 0; });
}

/// q^n T_n, an integer, where T_n = -sum_{1<=deg D<=n, D in D(K,S)} mu(D)/|D|.
/// Splitting D = P + B with P = P_min(D) of degree k gives
///   T_n = sum_k s_k q^{-k} sum_{B squarefree, d_-(B) > k, deg B <= n-k} mu(B) q^{-deg B}.
inline BigInt alladi_scaled_sum(const PlaceTable& table, int n) {
  detail::require_degree(table, n);
  BigInt total = 0;
  for (int k = 1; k <= n; ++k) {
    const BigInt& sk = table.s_count(k);
    if (sk == 0) continue;
    const int rest = n - k;
    const auto w = detail::euler_product(table, k + 1, rest, false, rest);
    BigInt inner = 0;
    for (int j = 0; j <= rest; ++j)
      inner += w[static_cast<std::size_t>(j)] * ipow(table.q, static_cast<unsigned long>(rest - j));
    total += sk * inner;
  }
  return total;
}

inline Rational alladi_partial_sum(const PlaceTable& table, int n) {
  return make_rational(alladi_scaled_sum(table, n), ipow(table.q, static_cast<unsigned long>(n)));
}

// --- the finite-level duality identity -------------------------------------------

/// Both sides of
///   sum_{deg A = n} Q_S(A) f(d_+(A)) = -sum_{deg B <= n} mu(B) 1_D(K,S)(B) f(d_-(B)) b_{n - deg B},
/// each by generating functions and, when the table is labeled, by enumeration.
struct DualIdentitySides {
  BigInt lhs_dp;
  BigInt rhs_dp;
  std::optional<BigInt> lhs_enum;
  std::optional<BigInt> rhs_enum;

  bool holds() const {
    if (lhs_dp != rhs_dp) return false;
    if (lhs_enum && *lhs_enum != lhs_dp) return false;
    if (rhs_enum && *rhs_enum != lhs_dp) return false;
    return true;
  }
};

inline DualIdentitySides dual_identity(const PlaceTable& table, int n, const DegreeWeight& f,
                                       std::optional<Membership> in_s = std::nullopt) {
  detail::require_degree(table, n);
  detail::require(f(0) == 0, "weight must satisfy f(0) = 0");
  DualIdentitySides out;
  out.lhs_dp = weighted_q_sum(table, n, f);
  const auto b = count_bn_all(table, n);
  for (int k = 1; k <= n; ++k) {
    const BigInt& sk = table.s_count(k);
    const std::int64_t w = f(k);
    if (sk == 0 || w == 0) continue;
    const int rest = n - k;
    const auto W = detail::euler_product(table, k + 1, rest, false, rest);
    BigInt inner = 0;
    for (int j = 0; j <= rest; ++j) inner += W[static_cast<std::size_t>(j)] * b[static_cast<std::size_t>(rest - j)];
    out.rhs_dp += sk * big_signed(w) * inner;
  }
  if (table.labeled_through(n)) {
    const Membership member = in_s ? *in_s : table.s_membership();
    BigInt lhs = 0, rhs = 0;
    for_each_effective_divisor(table, n, [&](const Divisor& A) {
      lhs += big(q_count(A, member)) * big_signed(f(d_plus(A)));
    });
    for (int d = 1; d <= n; ++d) {
      BigInt b_rest = 0;
      for_each_effective_divisor(table, n - d, [&](const Divisor&) { ++b_rest; });
      for_each_effective_divisor(table, d, [&](const Divisor& B) {
        const int mu = mobius(B);
        if (mu == 0 || !in_distinguished_set(B, member)) return;
        rhs -= mu * big_signed(f(d_minus(B))) * b_rest;
      });
    }
    out.lhs_enum = lhs;
    out.rhs_enum = rhs;
  }
  return out;
}

inline bool dual_identity_check(const PlaceTable& table, int n, const DegreeWeight& f,
                                std::optional<Membership> in_s = std::nullopt) {
  return dual_identity(table, n, f, std::move(in_s)).holds();
}

// --- convergence reports ------------------------------------------------------------

struct PartialSumLevel {
  int level = 0;
  Rational value;
  double approx = 0.0;
  Rational increment;
  std::optional<Rational> residual;
};

struct PartialSumReport {
  std::uint64_t q = 2;
  std::string s_description;
  std::optional<Rational> target;
  std::vector<PartialSumLevel> levels;

  const PartialSumLevel& last() const {
    detail::require(!levels.empty(), "empty report");
    return levels.back();
  }
};

inline PartialSumReport report_from_values(std::uint64_t q, std::string description, const std::vector<Rational>& values,
                                           std::optional<Rational> target) {
  PartialSumReport r{q, std::move(description), target, {}};
  Rational prev = 0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    PartialSumLevel L;
    L.level = static_cast<int>(i) + 1;
    L.value = values[i];
    L.approx = values[i].get_d();
    L.increment = values[i] - prev;
    if (target) L.residual = abs(values[i] - *target);
    prev = values[i];
    r.levels.push_back(std::move(L));
  }
  return r;
}

/// T_1 .. T_{n_max}, with residuals |T_k - target| when a target density is given.
inline PartialSumReport convergence_report(const PlaceTable& table, int n_max, std::optional<Rational> target) {
  detail::require(n_max >= 1, "report needs at least one level");
  detail::require_degree(table, n_max);
  std::vector<Rational> values;
  for (int k = 1; k <= n_max; ++k) values.push_back(alladi_partial_sum(table, k));
  return report_from_values(table.q, table.s_description, values, target);
}

/// True when residuals over the last `window` levels never increase.
inline bool residuals_non_increasing(const PartialSumReport& r, std::size_t window = 3) {
  detail::require(r.target.has_value(), "report has no target");
  detail::require(r.levels.size() >= window, "report shorter than window");
  for (std::size_t i = r.levels.size() - window + 1; i < r.levels.size(); ++i)
    if (*r.levels[i].residual > *r.levels[i - 1].residual) return false;
  return true;
}

}  // namespace alladiff
