#include <gtest/gtest.h>

#include "asf/ratfun.hpp"
#include "property_checks.hpp"

using namespace asf;

namespace {

RatFun X(const Field& F) { return RatFun::x(F); }
RatFun C(const Field& F, long long c) { return RatFun::constant(F, F.from_int(c)); }
RatFun xq_minus_x(const Field& F, long long q) { return X(F).pow(q) - X(F); }

} // namespace

TEST(RatFunNormalize, MonicDenominatorCoprime) {
  const auto F = gf::build_ambient(3, {2});
  const RatFun f(Poly(*F, {F->from_int(2), F->from_int(2)}), Poly(*F, {F->from_int(1), F->from_int(2), F->from_int(1)}));
  // 2(x+1) / (x+1)^2 = 2/(x+1)
  EXPECT_TRUE(f.den().is_monic());
  EXPECT_EQ(f.den().degree(), 1);
  EXPECT_TRUE(Poly::gcd(f.num(), f.den()).is_constant());
  EXPECT_EQ(f, C(*F, 2) / (X(*F) + C(*F, 1)));
  EXPECT_THROW(RatFun(*F).inverse(), DomainError);
}

TEST(RatFunValuation, Examples) {
  const auto F2 = gf::build_ambient(2, {1});
  const RatFun z = X(*F2).pow(3) / xq_minus_x(*F2, 2);
  EXPECT_EQ(z.valuation_at(Place::infinity()), -1);
  const auto F3 = gf::build_ambient(3, {1});
  EXPECT_EQ(xq_minus_x(*F3, 3).inverse().valuation_at(Place::finite(F3->zero())), -1);
  EXPECT_EQ(X(*F3).valuation_at(Place::finite(F3->zero())), 1);
  EXPECT_EQ(RatFun(*F3).valuation_at(Place::infinity()), kInfiniteValuation);
}

TEST(RatFunValuation, UniformizersHaveValuationOne) {
  const auto F = gf::build_ambient(5, {2});
  for (std::uint32_t a = 0; a < F->size(); a += 3)
    EXPECT_EQ(RatFun(Poly::linear(*F, Elem{a})).valuation_at(Place::finite(Elem{a})), 1);
  EXPECT_EQ(X(*F).inverse().valuation_at(Place::infinity()), 1);
}

TEST(RatFunDivisor, Examples) {
  const auto F = gf::build_ambient(2, {1});
  const Divisor dx = X(*F).divisor();
  EXPECT_EQ(dx, (Divisor{{Place::finite(F->zero()), 1}, {Place::infinity(), -1}}));
  const Divisor d = xq_minus_x(*F, 2).inverse().divisor();
  EXPECT_EQ(d, (Divisor{{Place::finite(F->zero()), -1}, {Place::finite(F->one()), -1}, {Place::infinity(), 2}}));
  EXPECT_TRUE(C(*F, 1).divisor().empty());
  EXPECT_THROW(RatFun(*F).divisor(), DomainError);
}

TEST(RatFunDivisor, NonSplitDenominatorNeedsBiggerField) {
  const auto F = gf::build_ambient(2, {1});
  const RatFun f = (X(*F).pow(2) + X(*F) + C(*F, 1)).inverse();
  try {
    (void)f.divisor();
    FAIL() << "expected InsufficientField";
  } catch (const InsufficientField& e) {
    EXPECT_EQ(e.needed_degree(), 2u);
  }
}

TEST(RatFunLaurent, Examples) {
  const auto F = gf::build_ambient(3, {2});
  const Elem a = F->from_int(2);
  const LaurentSeries s = RatFun(Poly::linear(*F, a)).inverse().laurent_at(Place::finite(a), 4);
  EXPECT_EQ(s.v0, -1);
  EXPECT_EQ(s.coeffs, (std::vector<Elem>{F->one(), F->zero(), F->zero(), F->zero()}));

  const LaurentSeries t = X(*F).pow(2).laurent_at(Place::infinity(), 3);
  EXPECT_EQ(t.v0, -2);
  EXPECT_EQ(t.at(-2), F->one());

  // 1/(x^2 - x) at 0 in characteristic 2: -1/x * 1/(1 - x) = x^{-1} + 1 + x + ...
  const auto F2 = gf::build_ambient(2, {1});
  const LaurentSeries u = xq_minus_x(*F2, 2).inverse().laurent_at(Place::finite(F2->zero()), 3);
  EXPECT_EQ(u.v0, -1);
  EXPECT_EQ(u.coeffs, (std::vector<Elem>{F2->one(), F2->one(), F2->one()}));
}

TEST(RatFunEval, Examples) {
  const auto F2 = gf::build_ambient(2, {2});
  EXPECT_FALSE(xq_minus_x(*F2, 2).inverse().eval_at(F2->zero()).has_value());
  const Elem w = gf::least_outside(*F2, 1, 2);
  EXPECT_EQ(X(*F2).eval_at(w), w);
  const auto F3 = gf::build_ambient(3, {1});
  const RatFun g = (X(*F3).pow(2) + C(*F3, 1)) / (X(*F3) + C(*F3, 1));
  EXPECT_EQ(g.eval_at(F3->one()), F3->one());
}

TEST(RatFunEval, AgreesWithQuotientOfPolynomialValues) {
  props::Rng rng(21);
  const auto F = gf::build_ambient(5, {2});
  for (int i = 0; i < 200; ++i) {
    const Poly n = props::random_poly(*F, rng, 5), d = props::random_poly(*F, rng, 4);
    if (d.is_zero())
      continue;
    const RatFun f(n, d);
    const Elem a = props::random_elem(*F, rng);
    const auto v = f.eval_at(a);
    if (d.eval(a).rep) {
      EXPECT_EQ(v, F->div(n.eval(a), d.eval(a)));
    } else if (v) {
      // the common factor cancelled
      EXPECT_GE(f.valuation_at(Place::finite(a)), 0);
    }
  }
}

TEST(RatFunCompose, MobiusAndPowers) {
  const auto F = gf::build_ambient(3, {2});
  const RatFun x = X(*F);
  const RatFun f = x.pow(4) / (x.pow(3) - x);
  const RatFun inv = x.inverse();
  EXPECT_EQ(f.compose(inv).compose(inv), f);
  EXPECT_EQ(f.compose(x + C(*F, 1)), (x + C(*F, 1)).pow(4) / ((x + C(*F, 1)).pow(3) - x - C(*F, 1)));
  const auto m = (x + C(*F, 2)).inverse().as_mobius();
  ASSERT_TRUE(m.has_value());
  EXPECT_FALSE(f.as_mobius().has_value());
  EXPECT_EQ(f.pth_power(), f.pow(3));
}

TEST(RatFunProperties, DivisorAndValuation) {
  const auto r = props::divisor_and_valuation(300);
  EXPECT_TRUE(r.ok(300)) << r.first_failure;
}

TEST(RatFunProperties, LaurentTruncation) {
  const auto r = props::laurent_truncation(300);
  EXPECT_TRUE(r.ok(300)) << r.first_failure;
}
