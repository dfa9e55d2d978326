#include <alladiff/elliptic.hpp>

#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace alladiff;

namespace {

const Curve& example() {
  static const Curve E = Curve::over_prime(5, 1, 1);
  return E;
}

}  // namespace

TEST(Elliptic, PointCountExample) {
  EXPECT_EQ(point_count(example()), 9u);
  EXPECT_EQ(trace_of_frobenius(example()), -3);
}

TEST(Elliptic, PointCountsMatchPairEnumeration) {
  for (int p : {5, 7, 11, 13, 17, 101})
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        if (oracle::modp(4LL * a * a * a + 27LL * b * b, p) == 0) {
          EXPECT_THROW(Curve::over_prime(static_cast<std::uint64_t>(p), a, b), ValidationError);
          continue;
        }
        const Curve E = Curve::over_prime(static_cast<std::uint64_t>(p), a, b);
        EXPECT_EQ(static_cast<long long>(point_count(E)), oracle::count_points(a, b, p));
        EXPECT_TRUE(within_hasse(trace_of_frobenius(E), static_cast<std::uint64_t>(p)));
      }
}

TEST(Elliptic, ModelRestrictions) {
  EXPECT_THROW(Curve::over_prime(3, 1, 1), ValidationError);
  EXPECT_THROW(Curve::over_prime(2, 1, 1), ValidationError);
  EXPECT_THROW(Curve::over_prime(5, 0, 0), ValidationError);
}

TEST(Elliptic, TracePowersExamples) {
  const auto a = ap_powers(BigInt(-3), 5, 2);
  EXPECT_EQ(a[0], 2);
  EXPECT_EQ(a[1], -3);
  EXPECT_EQ(a[2], -1);
  EXPECT_EQ(ap_powers(BigInt(0), 7, 2)[2], -14);
  EXPECT_THROW(ap_powers(BigInt(5), 5, 2), ValidationError);
  EXPECT_EQ(point_counts_from_trace(BigInt(-3), 5, 2)[2], 27);
  EXPECT_EQ(oracle::count_points_extension(1, 1, 5, 2), 27);
}

TEST(Elliptic, ExtensionCountsMatchRecurrence) {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {0, 2}, {1, 0}}) {
    const Curve E = Curve::over_prime(5, a, b);
    const auto N = point_counts_from_trace(trace_of_frobenius(E), 5, 6);
    for (unsigned m = 1; m <= 6; ++m) EXPECT_EQ(big(point_count(base_change(E, m))), N[m]) << a << " " << b << " m=" << m;
    for (int m = 1; m <= 3; ++m) EXPECT_EQ(N[static_cast<std::size_t>(m)], big_signed(oracle::count_points_extension(a, b, 5, m)));
  }
}

TEST(Elliptic, SupersingularSquareTrace) {
  const Curve E = Curve::over_prime(7, 1, 0);
  EXPECT_EQ(trace_of_frobenius(E), 0);
  const auto r = newton_identity_report(E, 3);
  EXPECT_EQ(r.a_q2_direct, -14);
  EXPECT_TRUE(r.exact_holds);
}

TEST(Elliptic, ClosedPointExamples) {
  const auto c = curve_counts(example(), 6);
  EXPECT_EQ(c.cp[1], 9);
  EXPECT_EQ(c.cp[2], 9);
  EXPECT_EQ(c.cp[1] + 2 * c.cp[2], c.N[2]);
}

TEST(Elliptic, ClosedPointInversionIsConsistent) {
  for (std::uint64_t p : {5, 7, 11, 13})
    for (int a = 1; a < 4; ++a) {
      if ((4 * a * a * a + 108) % static_cast<int>(p) == 0) continue;
      const Curve E = Curve::over_prime(p, a, 2);
      const auto c = curve_counts(E, 10);
      for (int m = 1; m <= 10; ++m) {
        BigInt s = 0;
        for (int d = 1; d <= m; ++d)
          if (m % d == 0) s += d * c.cp[static_cast<std::size_t>(d)];
        EXPECT_EQ(s, c.N[static_cast<std::size_t>(m)]);
        EXPECT_GE(c.cp[static_cast<std::size_t>(m)], 0);
      }
    }
}

TEST(Elliptic, InconsistentCountsAreReported) {
  EXPECT_THROW(closed_point_counts({BigInt(0), BigInt(1), BigInt(2)}), InconsistencyError);
  EXPECT_THROW(closed_point_counts({BigInt(0), BigInt(5), BigInt(1)}), InconsistencyError);
}

TEST(Elliptic, PlaceTableExamples) {
  const PlaceTable t = curve_place_table(example(), 8);
  EXPECT_EQ(t.class_number, BigInt(9));
  EXPECT_EQ(t.genus, 1);
  EXPECT_EQ(count_bn(t, 1), 9);
  EXPECT_EQ(count_bn(t, 2), 54);
  for (int n = 1; n <= 8; ++n) EXPECT_EQ(count_bn(t, n), 9 * (ipow(5, static_cast<unsigned long>(n)) - 1) / 4);
  const PlaceTable r = curve_place_table(example(), 8, CurveSMode::rational_points);
  EXPECT_EQ(r.s_count(1), 9);
  for (int k = 2; k <= 8; ++k) EXPECT_EQ(r.s_count(k), 0);
  EXPECT_EQ(t.leading_constant(), Rational(9, 4));
}

TEST(Elliptic, BnClosedFormOnOtherCurves) {
  for (std::uint64_t p : {7, 11})
    for (int a = 1; a <= 3; ++a) {
      const Curve E = Curve::over_prime(p, a, 1);
      const PlaceTable t = curve_place_table(E, 8);
      const BigInt h = *t.class_number;
      for (int n = 1; n <= 8; ++n)
        EXPECT_EQ(count_bn(t, n), h * (ipow(p, static_cast<unsigned long>(n)) - 1) / big(p - 1));
    }
}

TEST(Elliptic, DualIdentityOnCurveTables) {
  for (auto mode : {CurveSMode::all, CurveSMode::rational_points}) {
    const PlaceTable t = curve_place_table(example(), 8, mode);
    for (int n = 1; n <= 8; ++n) EXPECT_TRUE(dual_identity_check(t, n, [](int k) -> std::int64_t { return k * (2 * k - 5); }));
    const PlaceTable labeled = with_index_labels(t, 5);
    for (int n = 1; n <= 5; ++n) {
      const auto s = dual_identity(labeled, n, [](int k) -> std::int64_t { return k; });
      EXPECT_TRUE(s.lhs_enum.has_value());
      EXPECT_TRUE(s.holds());
    }
  }
}

TEST(Elliptic, RecoveryAtLevelOne) {
  EXPECT_EQ(recover_ap_all_places(example(), 1).last().value, 1);
  EXPECT_EQ(recover_ap_rational_points(example(), 1).last().value, 6);
}

TEST(Elliptic, RecoveryApproachesTrace) {
  const auto all = recover_ap_all_places(example(), 12);
  EXPECT_EQ(all.target, -3);
  EXPECT_EQ(std::lround(all.last().approx), -3);
  const auto rat = recover_ap_rational_points(example(), 12);
  EXPECT_LT(rat.last().residual, Rational(1, 100));
  for (std::size_t i = 1; i < rat.estimates.size(); ++i) EXPECT_LE(rat.estimates[i].residual, rat.estimates[i - 1].residual);
}

TEST(Elliptic, NewtonExactSide) {
  const auto r = newton_identity_report(example(), 6);
  EXPECT_EQ(r.a_q, -3);
  EXPECT_EQ(r.a_q2_direct, -1);
  EXPECT_EQ(r.a_q2_recurrence, -1);
  EXPECT_TRUE(r.exact_holds);
  ASSERT_EQ(r.lhs.size(), 6u);
  EXPECT_EQ(r.lhs.front(), 1);
  EXPECT_EQ(r.rhs.front(), Rational(1 - 10));
}

TEST(Elliptic, BaseChangeNeedsPrimeFieldCoefficients) {
  const FieldSpec F = make_field(5, 2);
  const Curve E(F, F.from_code(7), F.one());
  EXPECT_THROW(base_change(E, 2), ValidationError);
}

TEST(Elliptic, GoodPrimes) {
  const auto ps = good_primes(1, 1, 200);
  EXPECT_EQ(std::count(ps.begin(), ps.end(), 31u), 0);
  EXPECT_EQ(ps.front(), 5u);
  for (std::size_t i = 0; i < ps.size(); ++i) {
    EXPECT_TRUE(oracle::is_prime(static_cast<long long>(ps[i])));
    if (i) {
      EXPECT_LT(ps[i - 1], ps[i]);
    }
  }
  std::size_t expect = 0;
  for (long long p = 5; p <= 200; ++p) expect += oracle::is_prime(p) && p != 31;
  EXPECT_EQ(ps.size(), expect);
  EXPECT_THROW(good_primes(0, 0, 100), ValidationError);
}

TEST(Elliptic, SemicircleCdf) {
  EXPECT_NEAR(semicircle_cdf(0.0), 0.5, 1e-6);
  EXPECT_DOUBLE_EQ(semicircle_cdf(-3.0), 0.0);
  EXPECT_DOUBLE_EQ(semicircle_cdf(2.0), 1.0);
  for (double x = -1.9; x < 2.0; x += 0.1) {
    EXPECT_NEAR(semicircle_cdf(x) + semicircle_cdf(-x), 1.0, 1e-5);
    const double closed = 0.5 + (x * std::sqrt(4 - x * x) / 4 + std::asin(x / 2)) / std::numbers::pi;
    EXPECT_NEAR(semicircle_cdf(x), closed, 1e-4) << x;
  }
}

TEST(Elliptic, SatoTateScanBasics) {
  const auto r = sato_tate_scan(1, 1, 1000, 16, 2);
  std::uint64_t mass = 0;
  double semicircle = 0;
  for (const auto& b : r.histogram) {
    mass += b.count;
    semicircle += b.semicircle_mass;
  }
  EXPECT_EQ(mass, r.samples.size());
  EXPECT_EQ(r.samples.size(), good_primes(1, 1, 1000).size());
  EXPECT_NEAR(semicircle, 1.0, 1e-9);
  for (const auto& s : r.samples) {
    EXPECT_GE(s.normalized, -2.0);
    EXPECT_LE(s.normalized, 2.0);
  }
  EXPECT_TRUE(r.hasse_ok);
  const auto single = sato_tate_scan(1, 1, 1000, 16, 1);
  EXPECT_EQ(single.sup_distance, r.sup_distance);
  EXPECT_THROW(sato_tate_scan(1, 1, 20, 4), ValidationError);
}
