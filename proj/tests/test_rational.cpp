#include <alladiff/rational.hpp>

#include <gtest/gtest.h>

#include <set>

#include "oracles.hpp"

using namespace alladiff;

namespace {

oracle::P to_oracle(const Poly& f) {
  oracle::P out;
  for (auto c : f.coeffs()) out.push_back(static_cast<int>(c.code));
  return out;
}

ProgressionSet prog(const FieldSpec& F, const std::string& f, const std::string& g) {
  return ProgressionSet(parse_poly(F, f), parse_poly(F, g));
}

}  // namespace

TEST(Rational, TableExamples) {
  const FieldSpec F2 = make_field(2, 1), F3 = make_field(3, 1);
  const PlaceTable with = build_rational_table(F2, 4, true);
  EXPECT_EQ(with.counts[1], 3);
  EXPECT_EQ(with.class_number, BigInt(1));
  EXPECT_EQ(with.genus, 0);
  EXPECT_EQ((*with.labels)[1].back(), "inf");
  EXPECT_EQ(build_rational_table(F2, 4, false).counts[1], 2);
  EXPECT_EQ(build_rational_table(F3, 4, false).counts[2], 3);
  EXPECT_TRUE(build_rational_table(F3, 6, false).labeled_through(6));
}

TEST(Rational, LargeTablesSkipLabels) {
  const PlaceTable t = build_rational_table(make_field(5, 1), 12, true);
  EXPECT_FALSE(t.labels.has_value());
  EXPECT_EQ(t.counts[12], count_irreducibles(5, 12));
}

TEST(Rational, CorrespondenceExamples) {
  const FieldSpec F = make_field(2, 1);
  const Divisor D = phi_correspondence(parse_poly(F, "x^2+1"));
  EXPECT_EQ(D, (Divisor{{Place{1, 1}, 2}}));
  EXPECT_TRUE(phi_correspondence(Poly::one(F)).is_zero());
  const Poly irr = parse_poly(F, "x^3+x+1");
  const Divisor E = phi_correspondence(irr);
  ASSERT_EQ(E.support().size(), 1u);
  EXPECT_EQ(E.support().begin()->second, 1);
  EXPECT_EQ(E.degree(), 3);
  EXPECT_THROW(phi_correspondence(parse_poly(make_field(3, 1), "2x+1")), ValidationError);
}

TEST(Rational, CorrespondenceIsBijectiveAndPreservesInvariants) {
  for (auto [p, nmax] : std::vector<std::pair<int, int>>{{2, 8}, {3, 6}}) {
    const FieldSpec F = make_field(static_cast<std::uint64_t>(p), 1);
    const PlaceTable t = build_rational_table(F, nmax, false);
    for (int n = 0; n <= nmax; ++n) {
      std::set<std::string> images;
      for (std::uint64_t code = 0; code < to_u64(ipow(F.cardinality(), static_cast<unsigned long>(n))); ++code) {
        const Poly f = monic_from_code(F, n, code);
        const Divisor D = phi_correspondence(f);
        EXPECT_EQ(D.degree(), n);
        images.insert(D.to_string());
        if (n == 0) continue;
        const auto fac = oracle::factor_by_trial(to_oracle(f), p);
        int mu = 1;
        for (const auto& [g, e] : fac) mu = e > 1 ? 0 : -mu;
        if (std::any_of(fac.begin(), fac.end(), [](const auto& pe) { return pe.second > 1; })) mu = 0;
        EXPECT_EQ(mobius(D), mu);
        EXPECT_EQ(d_minus(D), static_cast<int>(fac.front().first.size()) - 1);
      }
      std::set<std::string> expect;
      for_each_effective_divisor(t, n, [&](const Divisor& D) { expect.insert(D.to_string()); });
      EXPECT_EQ(images, expect) << p << " " << n;
    }
  }
}

TEST(Rational, ProgressionCountsExamples) {
  const FieldSpec F = make_field(3, 1);
  EXPECT_EQ(progression_s_counts(prog(F, "1", "x"), 1)[1], 1);
  EXPECT_EQ(progression_s_counts(prog(F, "2", "x"), 1)[1], 1);
  const auto s = progression_s_counts(prog(F, "1", "x"), 8);
  const PlaceTable t = build_rational_table(F, 8, false);
  for (int k = 1; k <= 8; ++k) EXPECT_LE(s[static_cast<std::size_t>(k)], t.counts[static_cast<std::size_t>(k)]);
}

TEST(Rational, ProgressionValidation) {
  const FieldSpec F = make_field(3, 1);
  EXPECT_THROW(prog(F, "0", "x"), ValidationError);
  EXPECT_THROW(prog(F, "x", "x^2"), ValidationError);
  EXPECT_THROW(prog(F, "1", "2x"), ValidationError);
  EXPECT_THROW(prog(F, "1", "1"), ValidationError);
  EXPECT_EQ(prog(F, "x+1", "x").residue(), Poly::one(F));
}

TEST(Rational, ProgressionTargetIsInverseTotient) {
  const FieldSpec F = make_field(3, 1);
  const auto r = alladi_progression(prog(F, "1", "x"), 4);
  EXPECT_EQ(*r.target, Rational(1, 2));
  const FieldSpec F2 = make_field(2, 1);
  EXPECT_EQ(*alladi_progression(prog(F2, "1", "x^2+x+1"), 3).target, Rational(1, 3));
}

TEST(Rational, ProgressionMatchesDivisorOracle) {
  for (auto [p, g, f] : std::vector<std::tuple<int, std::string, std::string>>{
           {3, "x", "1"}, {3, "x", "2"}, {2, "x^2+x+1", "1"}, {2, "x^2+x+1", "x"}, {3, "x+1", "1"}}) {
    const FieldSpec F = make_field(static_cast<std::uint64_t>(p), 1);
    const ProgressionSet set = prog(F, f, g);
    const oracle::P go = to_oracle(set.modulus()), fo = to_oracle(set.residue());
    const int n = p == 2 ? 8 : 6;
    const auto sums = oracle::divisor_sums(p, n, false, [&](const oracle::Prime& P) {
      return !P.infinity && oracle::rem(P.poly, go, p) == fo;
    });
    const auto dp = alladi_progression(set, n);
    Rational T = 0;
    for (int k = 1; k <= n; ++k) {
      T += make_rational(big_signed(sums.alladi[static_cast<std::size_t>(k)]),
                         ipow(static_cast<std::uint64_t>(p), static_cast<unsigned long>(k)));
      EXPECT_EQ(dp.levels[static_cast<std::size_t>(k - 1)].value, T);
    }
  }
}

TEST(Rational, NaiveAndDpAgree) {
  const FieldSpec F3 = make_field(3, 1), F2 = make_field(2, 1);
  for (const auto& set : {prog(F3, "1", "x"), prog(F3, "2", "x"), prog(F3, "2", "x+1"), prog(F2, "1", "x^2+x+1"),
                          prog(F2, "1", "x^3+x+1")}) {
    const int n = set.modulus().field().cardinality() == 2 ? 10 : 7;
    const auto dp = alladi_progression(set, n);
    const auto naive = alladi_progression(set, n, SumMode::naive, 3);
    ASSERT_EQ(dp.levels.size(), naive.levels.size());
    for (std::size_t i = 0; i < dp.levels.size(); ++i) EXPECT_EQ(dp.levels[i].value, naive.levels[i].value);
  }
}

TEST(Rational, NaiveModeRespectsBound) {
  const FieldSpec F = make_field(5, 1);
  EXPECT_THROW(alladi_progression(prog(F, "1", "x"), 11, SumMode::naive), ValidationError);
}

TEST(Rational, PartitionAdditivity) {
  const std::vector<std::pair<int, std::string>> cases{{3, "x"}, {3, "x+1"}, {2, "x^2+x+1"}, {2, "x^2"}, {3, "x^2+1"}};
  for (const auto& [p, gs] : cases) {
    const FieldSpec F = make_field(static_cast<std::uint64_t>(p), 1);
    const Poly g = parse_poly(F, gs);
    const int n = 10;
    std::vector<Rational> total(static_cast<std::size_t>(n), 0);
    for (std::uint64_t code = 0; code < to_u64(ipow(F.cardinality(), static_cast<unsigned long>(g.degree()))); ++code) {
      std::vector<FieldElement> c;
      std::uint64_t v = code;
      for (int i = 0; i < g.degree(); ++i) {
        c.push_back({static_cast<std::uint32_t>(v % F.cardinality())});
        v /= F.cardinality();
      }
      const Poly f(F, c);
      if (f.is_zero() || gcd(f, g).degree() != 0) continue;
      const auto r = alladi_progression(ProgressionSet(f, g), n);
      for (int k = 0; k < n; ++k) total[static_cast<std::size_t>(k)] += r.levels[static_cast<std::size_t>(k)].value;
    }
    const auto div = convergence_report(rational_table_for(F, n, PrimeSet::dividing(g), false), n, std::nullopt);
    const auto all = convergence_report(build_rational_table(F, n, false), n, std::nullopt);
    for (int k = 0; k < n; ++k)
      EXPECT_EQ(total[static_cast<std::size_t>(k)] + div.levels[static_cast<std::size_t>(k)].value,
                all.levels[static_cast<std::size_t>(k)].value)
          << p << " " << gs << " level " << k + 1;
  }
}

TEST(Rational, PartitionAdditivityByEnumeration) {
  const FieldSpec F = make_field(3, 1);
  const Poly g = Poly::x(F);
  const std::vector<PrimeSet> sets{PrimeSet::progression(prog(F, "1", "x")), PrimeSet::progression(prog(F, "2", "x")),
                                   PrimeSet::dividing(g), PrimeSet::all()};
  std::vector<NaiveDegreeSums> per;
  naive_degree_sums(F, sets, 7, 2, &per);
  for (int d = 1; d <= 7; ++d) {
    const auto i = static_cast<std::size_t>(d);
    EXPECT_EQ(per[0].alladi[i] + per[1].alladi[i] + per[2].alladi[i], per[3].alladi[i]);
    EXPECT_EQ(per[0].qsum[i] + per[1].qsum[i] + per[2].qsum[i], per[3].qsum[i]);
  }
}

TEST(Rational, ExactLevelIdentityAtLevelOne) {
  const FieldSpec F = make_field(3, 1);
  const auto s = exact_level_identity(F, PrimeSet::all(), 1).front();
  EXPECT_EQ(s.lhs_dp, Rational(1));
  EXPECT_EQ(s.rhs_enum, Rational(1));
  EXPECT_TRUE(s.holds());
}

TEST(Rational, ExactLevelIdentitySmallLevels) {
  const FieldSpec F2 = make_field(2, 1), F3 = make_field(3, 1);
  for (const auto& s : exact_level_identity(F2, PrimeSet::all(), 9)) EXPECT_TRUE(s.holds()) << s.n;
  for (const auto& s : exact_level_identity(F3, PrimeSet::progression(prog(F3, "1", "x")), 7)) EXPECT_TRUE(s.holds()) << s.n;
  for (const auto& s : exact_level_identity(F2, PrimeSet::progression(prog(F2, "1", "x+1")), 9)) EXPECT_TRUE(s.holds()) << s.n;
  EXPECT_TRUE(exact_level_identity_check(F2, PrimeSet::progression(prog(F2, "1", "x^2+x+1")), 8));
}

TEST(Rational, ExactLevelIdentityOverF4) {
  const FieldSpec F = make_field(2, 2);
  const Poly g = Poly::x(F);
  for (const auto& s : exact_level_identity(F, PrimeSet::progression(ProgressionSet(Poly::one(F), g)), 5, 2))
    EXPECT_TRUE(s.holds()) << s.n;
}

TEST(Rational, MembershipMatchesPrimeSet) {
  const FieldSpec F = make_field(3, 1);
  const PrimeSet S = PrimeSet::progression(prog(F, "2", "x"));
  const Membership in_s = rational_membership(F, S, 4);
  const PlaceTable t = rational_table_for(F, 4, S, false);
  for (int k = 1; k <= 4; ++k) {
    std::uint64_t c = 0;
    const auto irr = irreducibles_of_degree(F, k);
    for (std::uint64_t i = 0; i < irr.size(); ++i) {
      EXPECT_EQ(in_s({k, i}), S.contains(irr[i]));
      c += in_s({k, i});
    }
    EXPECT_EQ(big(c), t.s_count(k));
  }
  const PlaceTable ti = rational_table_for(F, 6, S, true);
  for (int n = 1; n <= 6; ++n)
    EXPECT_TRUE(dual_identity(ti, n, [](int k) -> std::int64_t { return k % 3; }, rational_membership(F, S, 6)).holds());
}
