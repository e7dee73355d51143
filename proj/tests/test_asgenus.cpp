#include <gtest/gtest.h>

#include <functional>
#include <set>

#include "asf/asgenus.hpp"
#include "property_checks.hpp"

using namespace asf;

namespace {

RatFun X(const Field& F) { return RatFun::x(F); }

AbelianASSpec make_spec(std::uint32_t p, std::uint32_t n, std::vector<std::function<RatFun(const Field&)>> layers,
                        std::uint32_t extra = 1) {
  AbelianASSpec S;
  const std::uint32_t r = static_cast<std::uint32_t>(layers.size());
  S.field = gf::build_ambient(p, {n * r, n * extra});
  S.p = p;
  S.n = n;
  S.q = gf::detail::ipow(p, n);
  for (auto& l : layers)
    S.f.push_back(l(*S.field));
  S.eta = gf::least_generator(*S.field, n, r);
  return S;
}

} // namespace

TEST(AsReduce, Examples) {
  const auto F = gf::build_ambient(3, {1});
  const Place zero = Place::finite(F->zero());
  const ReduceResult a = as_reduce(X(*F).pow(-3), zero);
  EXPECT_EQ(a.m, 1);
  EXPECT_EQ(a.shift, X(*F).inverse());

  const ReduceResult b = as_reduce((X(*F).pow(3) - X(*F)).inverse(), zero);
  EXPECT_EQ(b.m, 1);
  EXPECT_TRUE(b.shift.is_zero());

  const ReduceResult c = as_reduce(X(*F).pow(3), Place::infinity());
  EXPECT_EQ(c.m, 1);
  EXPECT_EQ(c.shift, X(*F));

  // x^9 at infinity reduces twice: x^9 -> x^3 -> x.
  EXPECT_EQ(as_reduce(X(*F).pow(9), Place::infinity()).m, 1);
  EXPECT_EQ(as_reduce(X(*F).pow(2), Place::infinity()).m, 2);
  EXPECT_EQ(as_reduce(X(*F).pow(3) - X(*F), Place::infinity()).m, 0);
}

TEST(AsReduce, PostconditionProperty) {
  const auto r = props::as_reduce_postcondition(500);
  EXPECT_TRUE(r.ok(450)) << r.first_failure;
}

TEST(DegreeP, Examples) {
  for (std::uint32_t p : {2u, 3u, 5u, 7u}) {
    const auto F = gf::build_ambient(p, {1});
    const RatFun f = (X(*F).pow(p) - X(*F)).inverse();
    const auto rep = degree_p_report(f, p);
    EXPECT_EQ(rep.ramified.size(), p);
    EXPECT_EQ(rep.genus, static_cast<long long>((p - 1) * (p - 1)));
    EXPECT_EQ(rep.p_rank, rep.genus);

    const auto one_pole = degree_p_report(X(*F).inverse(), p);
    EXPECT_EQ(one_pole.genus, 0);
    EXPECT_EQ(one_pole.p_rank, 0);
    EXPECT_FALSE(one_pole.is_trivial);

    EXPECT_TRUE(degree_p_report(X(*F).pow(p) - X(*F), p).is_trivial);
    EXPECT_THROW(degree_p_report(f, p == 2 ? 3 : 2), UsageError);
  }
}

TEST(DegreeP, RiemannHurwitzSamples) {
  // y^p - y = x^m with p not dividing m: genus (p-1)(m-1)/2, p-rank 0.
  for (std::uint32_t p : {2u, 3u, 5u})
    for (int m = 1; m < 12; ++m) {
      if (m % static_cast<int>(p) == 0)
        continue;
      const auto F = gf::build_ambient(p, {1});
      const auto rep = degree_p_report(X(*F).pow(m), p);
      EXPECT_EQ(rep.genus, static_cast<long long>(p - 1) * (m - 1) / 2);
      EXPECT_EQ(rep.p_rank, 0);
    }
}

TEST(Characters, Counts) {
  EXPECT_EQ(characters(*gf::build_ambient(2, {4}), 2, 2).size(), 15u);
  EXPECT_EQ(characters(*gf::build_ambient(3, {2}), 1, 2).size(), 4u);
  EXPECT_EQ(characters(*gf::build_ambient(3, {3}), 1, 3).size(), 13u);
  EXPECT_EQ(characters(*gf::build_ambient(5, {2}), 1, 2).size(), 6u);
}

TEST(Characters, CoefficientVectorsAreNotProportional) {
  // Distinct representatives give coefficient vectors that are not F_p-multiples of each other.
  for (auto [p, n, r] : std::vector<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t>>{
           {2, 1, 2}, {2, 2, 2}, {3, 1, 2}, {2, 1, 3}, {3, 1, 3}, {5, 1, 2}, {2, 2, 3}}) {
    AbelianASSpec S;
    S.field = gf::build_ambient(p, {n * r});
    S.p = p;
    S.n = n;
    S.q = gf::detail::ipow(p, n);
    S.f.assign(r, X(*S.field));
    S.eta = gf::least_generator(*S.field, n, r);
    std::set<std::vector<std::uint32_t>> seen;
    for (Elem mu : characters(*S.field, n, r)) {
      const auto a = subfield_coefficients(S, mu);
      bool nonzero = false;
      for (Elem c : a)
        nonzero = nonzero || c.rep;
      EXPECT_TRUE(nonzero);
      for (std::uint32_t s = 1; s < p; ++s) {
        std::vector<std::uint32_t> key;
        for (Elem c : a)
          key.push_back(S.F().mul(c, S.F().from_int(s)).rep);
        EXPECT_TRUE(seen.insert(key).second) << "p=" << p << " n=" << n << " r=" << r;
      }
      for (Elem c : a)
        EXPECT_TRUE(S.F().in_subfield(c, n));
    }
    EXPECT_EQ(seen.size(), S.q == 0 ? 0 : gf::detail::ipow(S.q, r) - 1);
  }
}

TEST(Invariants, ZieveTwo) {
  const auto S = make_spec(2, 1,
                           {[](const Field& F) { return (X(F).pow(2) - X(F)).inverse(); },
                            [](const Field& F) { return X(F).pow(3) / (X(F).pow(2) - X(F)); }});
  const auto inv = abelian_invariants(S);
  EXPECT_EQ(inv.genus, 3);
  EXPECT_EQ(inv.p_rank, 3);
  EXPECT_TRUE(inv.ordinary);
  EXPECT_TRUE(inv.irreducible);
  EXPECT_EQ(inv.per_character.size(), 3u);
}

TEST(Invariants, ArtinMumfordThree) {
  const auto S = make_spec(3, 1, {[](const Field& F) { return X(F); }, [](const Field& F) { return X(F).inverse(); }});
  const auto inv = abelian_invariants(S);
  EXPECT_EQ(inv.genus, 4);
  EXPECT_EQ(inv.p_rank, 4);
}

TEST(Invariants, ParallelMatchesSerial) {
  const auto S = make_spec(5, 1, {[](const Field& F) { return X(F); }, [](const Field& F) { return X(F).inverse(); }});
  const auto a = abelian_invariants(S, 1), b = abelian_invariants(S, 4);
  EXPECT_EQ(a.genus, b.genus);
  EXPECT_EQ(a.p_rank, b.p_rank);
  EXPECT_EQ(a.genus, 16);
}

TEST(Invariants, ReducibleWhenACharacterIsTrivial) {
  // f2 = f1 + (x^3 - x): the character picking f2 - f1 is trivial.
  const auto S = make_spec(3, 1,
                           {[](const Field& F) { return X(F).inverse(); },
                            [](const Field& F) { return X(F).inverse() + X(F).pow(3) - X(F); }});
  EXPECT_FALSE(abelian_invariants(S).irreducible);
}

TEST(Invariants, ValidationErrors) {
  auto S = make_spec(3, 1, {[](const Field& F) { return X(F); }, [](const Field& F) { return X(F).inverse(); }});
  auto bad = S;
  bad.eta = S.F().one();
  EXPECT_THROW(abelian_invariants(bad), UsageError);
  bad = S;
  bad.f[1] = RatFun(S.F());
  EXPECT_THROW(abelian_invariants(bad), UsageError);
  bad = S;
  bad.q = 9;
  EXPECT_THROW(abelian_invariants(bad), UsageError);
}

TEST(Invariants, ChoiceIndependenceProperty) {
  const auto r = props::invariants_choice_independence(220);
  EXPECT_TRUE(r.ok(200)) << r.first_failure;
}
