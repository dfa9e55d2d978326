#pragma once

// The rational function field F_q(x): monic polynomials as effective divisors
// avoiding infinity, prime sets cut out by residues, and brute-force
// counterparts of the generating-function engines.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "divisors.hpp"
#include "gf.hpp"
#include "polyring.hpp"

namespace alladiff {

inline constexpr std::uint64_t kNaiveBound = 10'000'000;
inline constexpr std::uint64_t kLabelBound = 1'000'000;

/// Monic irreducibles P with P = f (mod g).
class ProgressionSet {
 public:
  ProgressionSet(Poly f, Poly g) : g_(std::move(g)) {
    detail::require(!g_.is_zero() && g_.is_monic() && g_.degree() >= 1, "modulus must be monic of degree >= 1");
    detail::require(f.field() == g_.field(), "residue and modulus over different fields");
    f_ = residue_class(f, g_);
    detail::require(gcd(f_, g_).degree() == 0, "residue must be coprime to the modulus");
  }

  const Poly& residue() const { return f_; }
  const Poly& modulus() const { return g_; }
  bool contains(const Poly& P) const { return residue_class(P, g_) == f_; }
  std::string to_string() const { return f_.pretty() + " mod " + g_.pretty(); }

 private:
  Poly f_;
  Poly g_;
};

/// A set of finite places of F_q(x) given by a predicate on monic irreducibles.
class PrimeSet {
 public:
  static PrimeSet all() {
    return PrimeSet([](const Poly&) { return true; }, "all");
  }
  static PrimeSet progression(const ProgressionSet& s) {
    return PrimeSet([s](const Poly& P) { return s.contains(P); }, s.to_string());
  }
  /// Primes dividing g.
  static PrimeSet dividing(const Poly& g) {
    detail::require(g.degree() >= 1, "modulus must be non-constant");
    return PrimeSet([g](const Poly& P) { return (g % P).is_zero(); }, "divisors of " + g.pretty());
  }

  bool contains(const Poly& P) const { return pred_(P); }
  const std::string& description() const { return description_; }

 private:
  PrimeSet(std::function<bool(const Poly&)> pred, std::string d) : pred_(std::move(pred)), description_(std::move(d)) {}
  std::function<bool(const Poly&)> pred_;
  std::string description_;
};

/// The point at infinity, when tabulated, is the last degree-1 place.
inline Place infinity_place(std::uint64_t q) { return Place{1, q}; }

/// Places of F_q(x) through degree n_max. Degree-k places are the monic
/// irreducibles of degree k in monic-code order, then infinity at degree 1.
/// Labels are attached when the listing stays under kLabelBound; S defaults
/// to all tabulated places.
inline PlaceTable build_rational_table(const FieldSpec& F, int n_max, bool include_infinity,
                                       IrreducibleCache* cache = nullptr) {
  detail::require(n_max >= 1, "n_max must be >= 1");
  const std::uint64_t q = F.cardinality();
  PlaceTable t;
  t.q = q;
  t.counts.assign(static_cast<std::size_t>(n_max) + 1, 0);
  BigInt listed = 0;
  for (int k = 1; k <= n_max; ++k) {
    t.counts[static_cast<std::size_t>(k)] = count_irreducibles(q, k);
    listed += t.counts[static_cast<std::size_t>(k)];
  }
  if (include_infinity) {
    t.counts[1] += 1;
    t.class_number = BigInt(1);
    t.genus = 0;
  }
  t.s_counts = t.counts;
  t.s_description = include_infinity ? "all places" : "all finite places";
  if (listed <= big(kLabelBound) && ipow(q, static_cast<unsigned long>(n_max)) <= big(kSieveBound)) {
    std::vector<std::vector<std::string>> labels(static_cast<std::size_t>(n_max) + 1);
    for (int k = 1; k <= n_max; ++k)
      for (const auto& P : irreducibles_of_degree(F, k, cache)) labels[static_cast<std::size_t>(k)].push_back(P.pretty());
    if (include_infinity) labels[1].push_back("inf");
    t.labels = std::move(labels);
  }
  t.validate();
  return t;
}

/// s_counts[k] = number of degree-k monic irreducibles in S. Infinity is never in S.
inline std::vector<BigInt> prime_set_s_counts(const FieldSpec& F, const PrimeSet& S, int n_max,
                                              IrreducibleCache* cache = nullptr) {
  std::vector<BigInt> out(static_cast<std::size_t>(n_max) + 1, 0);
  for (int k = 1; k <= n_max; ++k) {
    std::uint64_t c = 0;
    for (const auto& P : irreducibles_of_degree(F, k, cache))
      if (S.contains(P)) ++c;
    out[static_cast<std::size_t>(k)] = big(c);
  }
  return out;
}

inline std::vector<BigInt> progression_s_counts(const ProgressionSet& set, int n_max, IrreducibleCache* cache = nullptr) {
  return prime_set_s_counts(set.modulus().field(), PrimeSet::progression(set), n_max, cache);
}

/// Rational table with S restricted to a set of finite places.
inline PlaceTable rational_table_for(const FieldSpec& F, int n_max, const PrimeSet& S, bool include_infinity,
                                     IrreducibleCache* cache = nullptr) {
  PlaceTable t = build_rational_table(F, n_max, include_infinity, cache);
  t.s_counts = prime_set_s_counts(F, S, n_max, cache);
  t.s_description = S.description();
  t.validate();
  return t;
}

/// Place membership matching a PrimeSet on a table from build_rational_table.
inline Membership rational_membership(const FieldSpec& F, const PrimeSet& S, int n_max,
                                      IrreducibleCache* cache = nullptr) {
  auto flags = std::make_shared<std::vector<std::vector<bool>>>(static_cast<std::size_t>(n_max) + 1);
  for (int k = 1; k <= n_max; ++k)
    for (const auto& P : irreducibles_of_degree(F, k, cache)) (*flags)[static_cast<std::size_t>(k)].push_back(S.contains(P));
  return [flags](const Place& P) {
    if (P.degree < 1 || P.degree >= static_cast<int>(flags->size())) return false;
    const auto& row = (*flags)[static_cast<std::size_t>(P.degree)];
    return P.index < row.size() && row[P.index];
  };
}

/// (F)_0 for monic F: sum of ord_P(F) P over the finite places.
inline Divisor phi_correspondence(const Poly& F, IrreducibleCache* cache = nullptr) {
  detail::require(F.is_monic(), "correspondence needs a monic polynomial");
  auto& tables = cache ? *cache : default_irreducible_cache();
  Divisor D;
  for (const auto& [P, e] : factor(F, &tables).factors)
    D.add(Place{P.degree(), tables.index_of(P)}, e);
  return D;
}

// --- brute force over monic polynomials ----------------------------------------------

/// What the sums need from a factored monic F.
struct MonicProfile {
  int degree = 0;
  int mu = 1;
  /// P_min(F) when F is distinguishable.
  std::optional<Poly> p_min;
  /// Prime factors attaining the largest degree.
  std::vector<Poly> top_primes;
};

inline MonicProfile profile_of(const Poly& F, const Factorization& fac) {
  MonicProfile m;
  m.degree = F.degree();
  for (const auto& [P, e] : fac.factors) {
    if (e > 1) m.mu = 0;
    else if (m.mu != 0) m.mu = -m.mu;
  }
  const auto& fs = fac.factors;
  if (!fs.empty()) {
    if (fs.size() == 1 || fs[1].first.degree() != fs[0].first.degree()) m.p_min = fs[0].first;
    const int top = fs.back().first.degree();
    for (const auto& [P, e] : fs)
      if (P.degree() == top) m.top_primes.push_back(P);
  }
  return m;
}

/// Runs body(acc, profile) over every monic polynomial of degree n, split into
/// contiguous code blocks across workers; per-worker accumulators are merged
/// in block order.
template <class Acc, class Body, class Merge>
Acc reduce_over_monics(const FieldSpec& F, int n, unsigned workers, Acc init, Body body, Merge merge,
                       IrreducibleCache* cache = nullptr, std::uint64_t bound = kNaiveBound) {
  const std::uint64_t total = monic_count(F, n, bound);
  auto& tables = cache ? *cache : default_irreducible_cache();
  for (int d = 1; 2 * d <= n; ++d) tables.get(F, d);
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::min<std::uint64_t>(total, 64))));
  std::vector<Acc> partial(workers, init);
  auto run = [&](unsigned w) {
    const std::uint64_t lo = total * w / workers, hi = total * (w + 1) / workers;
    for (std::uint64_t code = lo; code < hi; ++code) {
      const Poly f = monic_from_code(F, n, code);
      body(partial[w], profile_of(f, factor(f, &tables)));
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  Acc out = init;
  for (auto& p : partial) out = merge(std::move(out), std::move(p));
  return out;
}

/// Per-degree brute-force data for a prime set S:
///   alladi[d] = -sum_{deg F = d, F in D(q,S)} mu(F)
///   qsum[d]   = sum_{deg F = d} Q_S(F)
struct NaiveDegreeSums {
  std::vector<BigInt> alladi;
  std::vector<BigInt> qsum;
};

inline NaiveDegreeSums naive_degree_sums(const FieldSpec& F, const std::vector<PrimeSet>& sets, int n, unsigned workers,
                                         std::vector<NaiveDegreeSums>* per_set = nullptr,
                                         IrreducibleCache* cache = nullptr) {
  detail::require(!sets.empty(), "need at least one prime set");
  using Acc = std::vector<std::pair<std::int64_t, std::int64_t>>;
  std::vector<NaiveDegreeSums> out(sets.size());
  for (auto& o : out) {
    o.alladi.assign(static_cast<std::size_t>(n) + 1, 0);
    o.qsum.assign(static_cast<std::size_t>(n) + 1, 0);
  }
  for (int d = 1; d <= n; ++d) {
    Acc init(sets.size(), {0, 0});
    auto body = [&](Acc& acc, const MonicProfile& m) {
      for (std::size_t s = 0; s < sets.size(); ++s) {
        if (m.mu != 0 && m.p_min && sets[s].contains(*m.p_min)) acc[s].first -= m.mu;
        for (const auto& P : m.top_primes)
          if (sets[s].contains(P)) ++acc[s].second;
      }
    };
    auto merge = [](Acc a, Acc b) {
      for (std::size_t s = 0; s < a.size(); ++s) {
        a[s].first += b[s].first;
        a[s].second += b[s].second;
      }
      return a;
    };
    Acc r = reduce_over_monics(F, d, workers, init, body, merge, cache);
    for (std::size_t s = 0; s < sets.size(); ++s) {
      out[s].alladi[static_cast<std::size_t>(d)] = big_signed(r[s].first);
      out[s].qsum[static_cast<std::size_t>(d)] = big_signed(r[s].second);
    }
  }
  if (per_set) *per_set = out;
  return out.front();
}

/// T_1..T_n from per-degree brute-force sums.
inline std::vector<Rational> naive_partial_sums(std::uint64_t q, const NaiveDegreeSums& s, int n) {
  std::vector<Rational> out;
  Rational acc = 0;
  for (int d = 1; d <= n; ++d) {
    acc += make_rational(s.alladi[static_cast<std::size_t>(d)], ipow(q, static_cast<unsigned long>(d)));
    out.push_back(acc);
  }
  return out;
}

// --- progressions ----------------------------------------------------------------------

enum class SumMode { dp, naive };

/// T_1..T_n for S = {P = f mod g} over F_q[x], infinity excluded, with target 1/phi(g).
inline PartialSumReport alladi_progression(const ProgressionSet& set, int n, SumMode mode = SumMode::dp,
                                           unsigned workers = 1, IrreducibleCache* cache = nullptr) {
  detail::require(n >= 1, "n must be >= 1");
  const FieldSpec& F = set.modulus().field();
  const Rational target = make_rational(BigInt(1), euler_phi(set.modulus(), cache));
  const PrimeSet S = PrimeSet::progression(set);
  if (mode == SumMode::dp) {
    PlaceTable t = rational_table_for(F, n, S, false, cache);
    return convergence_report(t, n, target);
  }
  detail::require(ipow(F.cardinality(), static_cast<unsigned long>(n)) <= big(kNaiveBound),
                  "q^n exceeds the naive enumeration bound");
  const auto sums = naive_degree_sums(F, {S}, n, workers, nullptr, cache);
  return report_from_values(F.cardinality(), S.description(), naive_partial_sums(F.cardinality(), sums, n), target);
}

// --- the exact finite-level identity --------------------------------------------------

/// Both sides of  -sum_{1<=deg F<=n, F in D(q,S)} mu(F)/|F| = q^{-n} sum_{deg F = n} Q_S(F),
/// each by the generating-function engine and by brute force.
struct LevelIdentitySides {
  int n = 0;
  Rational lhs_dp, lhs_enum, rhs_dp, rhs_enum;
  bool holds() const { return lhs_dp == lhs_enum && rhs_dp == rhs_enum && lhs_dp == rhs_dp && lhs_enum == rhs_enum; }
};

/// Sides for every level 1..n_max, sharing one brute-force pass.
inline std::vector<LevelIdentitySides> exact_level_identity(const FieldSpec& F, const PrimeSet& S, int n_max,
                                                            unsigned workers = 1, IrreducibleCache* cache = nullptr) {
  const std::uint64_t q = F.cardinality();
  const PlaceTable t = rational_table_for(F, n_max, S, false, cache);
  const auto sums = naive_degree_sums(F, {S}, n_max, workers, nullptr, cache);
  const auto lhs_enum = naive_partial_sums(q, sums, n_max);
  std::vector<LevelIdentitySides> out;
  for (int n = 1; n <= n_max; ++n) {
    const BigInt qn = ipow(q, static_cast<unsigned long>(n));
    LevelIdentitySides s;
    s.n = n;
    s.lhs_dp = alladi_partial_sum(t, n);
    s.lhs_enum = lhs_enum[static_cast<std::size_t>(n - 1)];
    s.rhs_dp = make_rational(q_sum(t, n), qn);
    s.rhs_enum = make_rational(sums.qsum[static_cast<std::size_t>(n)], qn);
    out.push_back(std::move(s));
  }
  return out;
}

inline bool exact_level_identity_check(const FieldSpec& F, const PrimeSet& S, int n, unsigned workers = 1,
                                       IrreducibleCache* cache = nullptr) {
  return exact_level_identity(F, S, n, workers, cache).back().holds();
}

}  // namespace alladiff
