#pragma once

// Short Weierstrass curves y^2 = x^3 + a x + b in characteristic > 3: point
// counts, Frobenius traces over extensions, closed points, the function-field
// place tables they induce, and the trace-recovery sums.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "divisors.hpp"
#include "gf.hpp"

namespace alladiff {

class Curve {
 public:
  Curve(FieldSpec field, FieldElement a, FieldElement b) : field_(std::move(field)), a_(a), b_(b) {
    detail::require(field_.characteristic() > 3, "short Weierstrass model needs characteristic > 3");
    const auto& F = field_;
    const FieldElement a3 = F.mul(a_, F.mul(a_, a_));
    const FieldElement disc = F.add(F.mul(F.from_int(4), a3), F.mul(F.from_int(27), F.mul(b_, b_)));
    detail::require(disc != F.zero(), "singular curve: 4a^3 + 27b^2 = 0");
  }

  static Curve over_prime(std::uint64_t p, std::int64_t a, std::int64_t b) {
    FieldSpec F = make_field(p, 1);
    return Curve(F, F.from_int(a), F.from_int(b));
  }

  const FieldSpec& field() const { return field_; }
  FieldElement a() const { return a_; }
  FieldElement b() const { return b_; }
  std::uint64_t q() const { return field_.cardinality(); }

  FieldElement rhs(FieldElement x) const {
    const auto& F = field_;
    return F.add(F.mul(x, F.add(F.mul(x, x), a_)), b_);
  }

  std::string to_string() const {
    return "y^2 = x^3 + " + field_.element_to_string(a_) + "x + " + field_.element_to_string(b_) + " over " +
           field_.to_string();
  }

 private:
  FieldSpec field_;
  FieldElement a_;
  FieldElement b_;
};

/// #E(F_q), the point at infinity included.
inline std::uint64_t point_count(const Curve& E) {
  const FieldSpec& F = E.field();
  std::uint64_t n = 1;
  if (F.is_prime_field()) {
    const std::uint64_t p = F.characteristic();
    std::vector<std::uint32_t> roots(p, 0);
    for (std::uint64_t y = 0; y < p; ++y) ++roots[y * y % p];
    for (std::uint64_t x = 0; x < p; ++x) n += roots[E.rhs({static_cast<std::uint32_t>(x)}).code];
    return n;
  }
  for (const FieldElement x : F.elements()) n += F.num_sqrt(E.rhs(x));
  return n;
}

inline BigInt trace_of_frobenius(const Curve& E) { return big(E.q()) + 1 - big(point_count(E)); }

inline bool within_hasse(const BigInt& a, std::uint64_t q) { return a * a <= 4 * big(q); }

/// a_{q^0} .. a_{q^m_max}: a_{q^m} = a_q a_{q^{m-1}} - q a_{q^{m-2}}, a_{q^0} = 2.
inline std::vector<BigInt> ap_powers(const BigInt& a_q, std::uint64_t q, int m_max) {
  detail::require(m_max >= 0, "m_max must be >= 0");
  detail::require(within_hasse(a_q, q), "trace violates the Hasse bound");
  std::vector<BigInt> a{BigInt(2), a_q};
  for (int m = 2; m <= m_max; ++m) a.push_back(a_q * a[static_cast<std::size_t>(m - 1)] - big(q) * a[static_cast<std::size_t>(m - 2)]);
  a.resize(static_cast<std::size_t>(m_max) + 1);
  return a;
}

/// N_m = q^m + 1 - a_{q^m} for m = 1..m_max; index 0 unused.
inline std::vector<BigInt> point_counts_from_trace(const BigInt& a_q, std::uint64_t q, int m_max) {
  const auto a = ap_powers(a_q, q, m_max);
  std::vector<BigInt> N(static_cast<std::size_t>(m_max) + 1, 0);
  for (int m = 1; m <= m_max; ++m)
    N[static_cast<std::size_t>(m)] = ipow(q, static_cast<unsigned long>(m)) + 1 - a[static_cast<std::size_t>(m)];
  return N;
}

/// cp_d = (1/d) sum_{e | d} mu(e) N_{d/e}; index 0 unused.
inline std::vector<BigInt> closed_point_counts(const std::vector<BigInt>& N) {
  detail::require(N.size() >= 2, "need N_1 at least");
  std::vector<BigInt> cp(N.size(), 0);
  for (std::size_t d = 1; d < N.size(); ++d) {
    BigInt s = 0;
    for (std::size_t e = 1; e <= d; ++e)
      if (d % e == 0) s += mobius_int(e) * N[d / e];
    detail::ensure_consistent(mpz_divisible_ui_p(s.get_mpz_t(), d) != 0,
                              "closed-point count at degree " + std::to_string(d) + " is not integral");
    cp[d] = s / static_cast<unsigned long>(d);
    detail::ensure_consistent(cp[d] >= 0, "negative closed-point count at degree " + std::to_string(d));
  }
  return cp;
}

/// The same curve over F_{q^m}; a and b must lie in the prime field.
inline Curve base_change(const Curve& E, unsigned m, std::uint64_t bound = kDefaultFieldBound) {
  detail::require(m >= 1, "extension degree must be >= 1");
  const FieldSpec& F = E.field();
  detail::require(F.in_prime_field(E.a()) && F.in_prime_field(E.b()),
                  "base change needs coefficients in the prime field");
  FieldSpec G = make_field(F.characteristic(), F.degree() * m, bound);
  return Curve(G, G.from_int(E.a().code), G.from_int(E.b().code));
}

struct CurveCounts {
  std::uint64_t q = 0;
  std::vector<BigInt> N;   // N[m] = #E(F_{q^m}), index 0 unused
  std::vector<BigInt> a;   // a[m] = a_{q^m}, a[0] = 2
  std::vector<BigInt> cp;  // cp[d] = closed points of degree d, index 0 unused
};

inline CurveCounts curve_counts(const Curve& E, int m_max) {
  detail::require(m_max >= 1, "m_max must be >= 1");
  CurveCounts c;
  c.q = E.q();
  const BigInt aq = trace_of_frobenius(E);
  detail::ensure_consistent(within_hasse(aq, c.q), "point count violates the Hasse bound");
  c.a = ap_powers(aq, c.q, m_max);
  c.N = point_counts_from_trace(aq, c.q, m_max);
  c.cp = closed_point_counts(c.N);
  return c;
}

enum class CurveSMode { all, rational_points };

/// Places of the function field of E: counts[d] = cp_d; h = N_1, g = 1.
inline PlaceTable curve_place_table(const Curve& E, int n_max, CurveSMode mode = CurveSMode::all) {
  const CurveCounts c = curve_counts(E, n_max);
  PlaceTable t;
  t.q = c.q;
  t.counts = c.cp;
  t.counts[0] = 0;
  t.class_number = c.N[1];
  t.genus = 1;
  if (mode == CurveSMode::all) {
    t.s_counts = t.counts;
    t.s_description = "all places";
  } else {
    std::vector<BigInt> s(t.counts.size(), 0);
    s[1] = t.counts[1];
    t.s_counts = std::move(s);
    t.s_description = "rational points";
  }
  t.validate();
  return t;
}

// --- trace recovery ----------------------------------------------------------------

struct ApEstimate {
  int level = 0;
  Rational value;
  double approx = 0.0;
  Rational residual;
};

struct ApRecovery {
  CurveSMode mode = CurveSMode::all;
  BigInt target;  // a_q from point counting
  PartialSumReport sums;
  std::vector<ApEstimate> estimates;

  const ApEstimate& last() const {
    detail::require(!estimates.empty(), "empty recovery");
    return estimates.back();
  }
};

/// all:             a_q ~ 1 - N_1 + q T_n
/// rational points: a_q ~ q + 1 - N_1 + q T_n(S_1)
inline ApRecovery recover_ap(const Curve& E, int n, CurveSMode mode) {
  detail::require(n >= 1, "n must be >= 1");
  const PlaceTable t = curve_place_table(E, n, mode);
  ApRecovery r;
  r.mode = mode;
  r.target = trace_of_frobenius(E);
  const BigInt N1 = *t.class_number;
  const BigInt q = big(t.q);
  std::optional<Rational> density;
  if (mode == CurveSMode::all) density = Rational(1);
  r.sums = convergence_report(t, n, density);
  const BigInt base = (mode == CurveSMode::all ? BigInt(1) : q + 1) - N1;
  for (const auto& L : r.sums.levels) {
    ApEstimate e;
    e.level = L.level;
    e.value = Rational(base) + Rational(q) * L.value;
    e.value.canonicalize();
    e.approx = e.value.get_d();
    e.residual = abs(e.value - Rational(r.target));
    r.estimates.push_back(std::move(e));
  }
  return r;
}

inline ApRecovery recover_ap_all_places(const Curve& E, int n) { return recover_ap(E, n, CurveSMode::all); }
inline ApRecovery recover_ap_rational_points(const Curve& E, int n) { return recover_ap(E, n, CurveSMode::rational_points); }

/// a_{q^2} = a_q^2 - 2q, exactly from point counts and with both traces replaced
/// by their level-n recoveries over E and over E base-changed to F_{q^2}.
struct NewtonReport {
  BigInt a_q;
  BigInt a_q2_direct;     // from counting points over F_{q^2}
  BigInt a_q2_recurrence;  // a_q^2 - 2q
  bool exact_holds = false;
  std::vector<Rational> lhs;  // recovered a_{q^2} per level
  std::vector<Rational> rhs;  // (recovered a_q)^2 - 2q per level
};

inline NewtonReport newton_identity_report(const Curve& E, int n) {
  NewtonReport r;
  const std::uint64_t q = E.q();
  r.a_q = trace_of_frobenius(E);
  const Curve E2 = base_change(E, 2);
  r.a_q2_direct = trace_of_frobenius(E2);
  r.a_q2_recurrence = r.a_q * r.a_q - 2 * big(q);
  r.exact_holds = r.a_q2_direct == r.a_q2_recurrence;
  const auto base = recover_ap_all_places(E, n);
  const auto ext = recover_ap_all_places(E2, n);
  for (int i = 0; i < n; ++i) {
    r.lhs.push_back(ext.estimates[static_cast<std::size_t>(i)].value);
    const Rational& a = base.estimates[static_cast<std::size_t>(i)].value;
    Rational s = a * a - Rational(2 * big(q));
    s.canonicalize();
    r.rhs.push_back(s);
  }
  return r;
}

// --- curves over Q and the Sato-Tate scan --------------------------------------------

inline BigInt integer_discriminant_part(std::int64_t a, std::int64_t b) {
  const BigInt A = big_signed(a), B = big_signed(b);
  return 4 * A * A * A + 27 * B * B;
}

/// Primes 3 < p <= X not dividing 4a^3 + 27b^2.
inline std::vector<std::uint64_t> good_primes(std::int64_t a, std::int64_t b, std::uint64_t X) {
  const BigInt D = integer_discriminant_part(a, b);
  detail::require(D != 0, "singular curve over Q: 4a^3 + 27b^2 = 0");
  std::vector<std::uint64_t> out;
  if (X < 5) return out;
  std::vector<bool> composite(X + 1, false);
  for (std::uint64_t i = 2; i * i <= X; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= X; j += i) composite[j] = true;
  for (std::uint64_t p = 5; p <= X; ++p)
    if (!composite[p] && mpz_divisible_ui_p(D.get_mpz_t(), p) == 0) out.push_back(p);
  return out;
}

inline double semicircle_density(double x) {
  const double r = 1.0 - x * x / 4.0;
  return r > 0 ? std::sqrt(r) / std::numbers::pi : 0.0;
}

/// Integral of the semicircle density over [-2, x], composite Simpson with
/// step at most h.
inline double semicircle_cdf(double x, double h = 1e-3) {
  if (x <= -2.0) return 0.0;
  if (x >= 2.0) return 1.0;
  const double len = x + 2.0;
  auto m = static_cast<std::int64_t>(std::ceil(len / h));
  if (m % 2) ++m;
  if (m < 2) m = 2;
  const double step = len / static_cast<double>(m);
  double s = semicircle_density(-2.0) + semicircle_density(x);
  for (std::int64_t i = 1; i < m; ++i) s += (i % 2 ? 4.0 : 2.0) * semicircle_density(-2.0 + step * static_cast<double>(i));
  return s * step / 3.0;
}

struct HistogramBin {
  double left = 0, right = 0;
  std::uint64_t count = 0;
  double empirical_mass = 0, semicircle_mass = 0;
};

struct SatoTateSample {
  std::uint64_t p = 0;
  std::int64_t a_p = 0;
  double normalized = 0;
};

struct SatoTateReport {
  std::int64_t a = 0, b = 0;
  std::uint64_t X = 0;
  std::vector<SatoTateSample> samples;
  std::vector<HistogramBin> histogram;
  double sup_distance = 0;
  bool hasse_ok = true;
};

inline SatoTateReport sato_tate_scan(std::int64_t a, std::int64_t b, std::uint64_t X, int bins, unsigned workers = 1) {
  detail::require(bins >= 1, "need at least one bin");
  const auto primes = good_primes(a, b, X);
  detail::require(primes.size() >= 10, "fewer than 10 good primes up to X; raise X");
  SatoTateReport r;
  r.a = a;
  r.b = b;
  r.X = X;
  r.samples.resize(primes.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(primes.size())));
  auto run = [&](unsigned w) {
    for (std::size_t i = w; i < primes.size(); i += workers) {
      const std::uint64_t p = primes[i];
      const auto N = point_count(Curve::over_prime(p, a, b));
      const auto ap = static_cast<std::int64_t>(p + 1) - static_cast<std::int64_t>(N);
      r.samples[i] = {p, ap, static_cast<double>(ap) / std::sqrt(static_cast<double>(p))};
    }
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run, w);
    for (auto& t : pool) t.join();
  }
  for (const auto& s : r.samples)
    if (!within_hasse(big_signed(s.a_p), s.p)) r.hasse_ok = false;

  const double total = static_cast<double>(r.samples.size());
  r.histogram.resize(static_cast<std::size_t>(bins));
  for (int k = 0; k < bins; ++k) {
    auto& bin = r.histogram[static_cast<std::size_t>(k)];
    bin.left = -2.0 + 4.0 * k / bins;
    bin.right = -2.0 + 4.0 * (k + 1) / bins;
    bin.semicircle_mass = semicircle_cdf(bin.right) - semicircle_cdf(bin.left);
  }
  for (const auto& s : r.samples) {
    auto k = static_cast<int>(std::floor((s.normalized + 2.0) / 4.0 * bins));
    k = std::clamp(k, 0, bins - 1);
    ++r.histogram[static_cast<std::size_t>(k)].count;
  }
  for (auto& bin : r.histogram) bin.empirical_mass = static_cast<double>(bin.count) / total;

  std::vector<double> xs;
  for (const auto& s : r.samples) xs.push_back(s.normalized);
  std::sort(xs.begin(), xs.end());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double F = semicircle_cdf(xs[i]);
    r.sup_distance = std::max({r.sup_distance, std::abs(static_cast<double>(i + 1) / total - F),
                               std::abs(static_cast<double>(i) / total - F)});
  }
  return r;
}

}  // namespace alladiff
