#include <gtest/gtest.h>

#include "asf/zeta.hpp"
#include "property_checks.hpp"

using namespace asf;

namespace {

// Affine points by enumerating every y in F_{q^m} for every layer.
long long brute_affine(const AbelianASSpec& S, unsigned m) {
  const Field& F = S.F();
  const auto xs = F.subfield_elements(S.n * m);
  long long total = 0;
  for (Elem x0 : xs) {
    long long prod = 1;
    for (const auto& fi : S.f) {
      const auto v = fi.eval_at(x0);
      if (!v) {
        prod = 0;
        break;
      }
      long long sols = 0;
      for (Elem y : xs)
        sols += F.sub(F.frobenius(y, S.n), y) == *v;
      prod *= sols;
    }
    total += prod;
  }
  return total;
}

std::vector<long long> ints(const LPoly& L) {
  std::vector<long long> out;
  for (const auto& c : L.coeffs)
    out.push_back(c.convert_to<long long>());
  return out;
}

// N_m recomputed from L through the power sums of its reciprocal roots.
long long count_from_lpoly(const LPoly& L, unsigned m) {
  const int d = L.degree();
  std::vector<BigInt> s(m + 1, 0);
  for (unsigned k = 1; k <= m; ++k) {
    BigInt acc = k <= static_cast<unsigned>(d) ? BigInt(-static_cast<long long>(k)) * L.coeffs[k] : BigInt(0);
    for (unsigned j = 1; j < k; ++j)
      if (k - j <= static_cast<unsigned>(d))
        acc -= s[j] * L.coeffs[k - j];
    s[k] = acc;
  }
  BigInt qm = 1;
  for (unsigned i = 0; i < m; ++i)
    qm *= L.base;
  return (qm + 1 - s[m]).convert_to<long long>();
}

} // namespace

TEST(AffineCount, MatchesBruteForce) {
  for (const auto& [f, q, maxm] : std::vector<std::tuple<std::string, std::uint64_t, unsigned>>{
           {"zieve", 2, 4}, {"artin_mumford", 2, 4}, {"artin_mumford", 3, 2}, {"zieve", 3, 2}, {"zieve_extended", 3, 2},
           {"conic_mixed", 2, 2}, {"conic_parabola", 3, 2}}) {
    for (unsigned m = 1; m <= maxm; ++m) {
      const FamilySpec fs = build_family(f, q, {static_cast<std::uint32_t>(split_prime_power(q).n * m)});
      EXPECT_EQ(affine_count(*fs.spec, m), brute_affine(*fs.spec, m)) << f << " q=" << q << " m=" << m;
      EXPECT_EQ(affine_count(*fs.spec, m, 3), affine_count(*fs.spec, m, 1));
    }
  }
}

TEST(AffineCount, SmallExamples) {
  const FamilySpec z = build_family("zieve", 2, {}, {.full = false});
  EXPECT_EQ(affine_count(*z.spec, 1), 0);
  const FamilySpec am = build_family("artin_mumford", 2, {}, {.full = false});
  EXPECT_EQ(affine_count(*am.spec, 1), 0);
  EXPECT_THROW(affine_count(*z.spec, 2), InsufficientField);
}

TEST(SingerPlane, HistogramMatchesPairs) {
  for (auto [p, n, m] : std::vector<std::tuple<std::uint32_t, std::uint32_t, unsigned>>{
           {3, 1, 1}, {3, 1, 2}, {3, 1, 3}, {3, 1, 4}, {2, 1, 1}, {2, 1, 2}, {2, 1, 4}, {2, 2, 1}, {2, 2, 2}, {5, 1, 2}}) {
    const auto F = gf::build_ambient(p, {n * m});
    EXPECT_EQ(singer_plane_affine_count(*F, n, m), singer_plane_affine_count_pairs(*F, n, m)) << p << " " << n << " " << m;
    EXPECT_EQ(singer_plane_affine_count(*F, n, m, 2), singer_plane_affine_count(*F, n, m));
  }
  // q = 3, m = 1 by hand: s^3 = s and t^3 = t on F_3, so (s - t)(t - s) = -(s - t)^2 = 1 has no solution.
  const auto F3 = gf::build_ambient(3, {1});
  EXPECT_EQ(singer_plane_affine_count(*F3, 1, 1), 0);
}

TEST(CountSeries, DefinitionDegree) {
  EXPECT_EQ(definition_degree(build_family("zieve", 3)), 1u);
  EXPECT_EQ(definition_degree(build_family("conic_one_nonrational", 3)), 2u);
  EXPECT_EQ(definition_degree(build_family("conic_mixed", 3)), 2u);
  EXPECT_EQ(definition_degree(build_family("singer", 3)), 1u);
  const auto cs = count_series("conic_one_nonrational", 3, 1);
  EXPECT_EQ(cs.base, 9u);
}

TEST(CountSeries, ExampleCount730) {
  // Places over F_{3^6} = F_{9^3}.
  const auto cs = count_series("conic_one_nonrational", 3, 3);
  ASSERT_EQ(cs.counts.size(), 3u);
  EXPECT_EQ(cs.counts[2].second, 730);
  EXPECT_EQ(cs.counts[2].second, 729 + 1);
}

TEST(CountSeries, GenusZeroGivesTrivialL) {
  const auto cs = count_series("conic_parabola", 2, 5);
  for (const auto& [m, N] : cs.counts) {
    long long qm = 1;
    for (unsigned i = 0; i < m; ++i)
      qm *= static_cast<long long>(cs.base);
    EXPECT_EQ(N, qm + 1);
  }
  const LPoly L = lpoly_from_counts(cs, 0);
  EXPECT_EQ(ints(L), std::vector<long long>{1});
  EXPECT_EQ(invariants_from_lpoly(L, 2), (Invariants{0, 0}));
}

TEST(LPoly, ZieveTwo) {
  const auto cs = count_series("zieve", 2, 6);
  const LPoly L = lpoly_from_counts(cs, 3);
  EXPECT_EQ(L.degree(), 6);
  EXPECT_EQ(ints(L), (std::vector<long long>{1, 1, 5, 3, 10, 4, 8}));
  for (unsigned m = 1; m <= 6; ++m)
    EXPECT_EQ(count_from_lpoly(L, m), cs.counts[m - 1].second);
  EXPECT_EQ(invariants_from_lpoly(L, 2), (Invariants{3, 3}));
}

TEST(LPoly, WrongGenusIsRejected) {
  const auto cs = count_series("zieve", 2, 6);
  EXPECT_THROW(lpoly_from_counts(cs, 2), OracleInconsistency);
  EXPECT_THROW(lpoly_from_counts(cs, 7), UsageError);
  CountSeries bad = cs;
  bad.counts[4].second += 1;
  EXPECT_THROW(lpoly_from_counts(bad, 3), OracleInconsistency);
}

TEST(LPoly, InvariantsFromPolynomial) {
  LPoly one;
  one.base = 3;
  one.coeffs = {1};
  EXPECT_EQ(invariants_from_lpoly(one, 3), (Invariants{0, 0}));
  LPoly bad;
  bad.base = 3;
  bad.coeffs = {2, 1, 3};
  EXPECT_THROW(invariants_from_lpoly(bad, 3), DomainError);
}

TEST(ZetaReport, OracleCases) {
  struct Case {
    std::string f;
    std::uint64_t q;
    Invariants want;
  };
  for (const Case& c : std::vector<Case>{{"zieve", 2, {3, 3}},
                                         {"singer_even", 2, {3, 3}},
                                         {"artin_mumford", 2, {1, 1}},
                                         {"conic_parabola", 3, {3, 0}},
                                         {"artin_mumford", 3, {4, 4}},
                                         {"conic_mixed", 2, {2, 2}}}) {
    const FamilySpec fs = build_family(c.f, c.q);
    const auto inv = abelian_invariants(*fs.spec);
    const ZetaReport rep = zeta_report(c.f, c.q, inv.genus);
    ASSERT_TRUE(rep.invariants.has_value()) << c.f << ": " << rep.error;
    EXPECT_EQ(*rep.invariants, c.want) << c.f;
    EXPECT_EQ(rep.invariants->genus, inv.genus);
    EXPECT_EQ(rep.invariants->p_rank, inv.p_rank);
    EXPECT_TRUE(rep.weil_ok);
    EXPECT_TRUE(rep.mobius_ok);
  }
}

TEST(ZetaReport, ConicParabolaPolynomial) {
  const ZetaReport rep = zeta_report("conic_parabola", 3, 3);
  ASSERT_TRUE(rep.l_poly.has_value()) << rep.error;
  EXPECT_EQ(ints(*rep.l_poly), (std::vector<long long>{1, 6, 18, 36, 54, 54, 27}));
}

TEST(ZetaReport, SingerThreeToEight) {
  const ZetaReport rep = zeta_report("singer", 3, 8, 8, 1);
  ASSERT_TRUE(rep.invariants.has_value()) << rep.error;
  EXPECT_EQ(*rep.invariants, (Invariants{8, 8}));
  std::vector<long long> N;
  for (const auto& [m, n] : rep.series.counts)
    N.push_back(n);
  EXPECT_EQ(N, (std::vector<long long>{2, 38, 44, 110, 182, 506, 2354, 6878}));
}

TEST(ZetaReport, BudgetCapLeavesError) {
  const ZetaReport rep = zeta_report("zieve", 5, 76);
  EXPECT_FALSE(rep.l_poly.has_value());
  EXPECT_FALSE(rep.error.empty());
  EXPECT_TRUE(rep.weil_ok);
}
