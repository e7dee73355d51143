#include <gtest/gtest.h>

#include "property_checks.hpp"

using namespace asf;

TEST(Properties, TwoPointConicsAreOrdinary) {
  for (std::uint64_t q : {3u, 4u, 5u})
    for (ConicClass k : {ConicClass::TwoRational, ConicClass::RationalNonrational, ConicClass::TwoNonrational}) {
      const auto r = props::conic_classes(q, k, 100);
      EXPECT_TRUE(r.ok(100)) << "q=" << q << " " << to_string(k) << ": " << r.first_failure;
    }
}

TEST(Properties, OnePointConicPredictions) {
  for (std::uint64_t q : {3u, 5u})
    for (ConicClass k : {ConicClass::OneRational, ConicClass::OneNonrational}) {
      const auto r = props::conic_classes(q, k, 40);
      EXPECT_TRUE(r.ok(40)) << "q=" << q << " " << to_string(k) << ": " << r.first_failure;
    }
}

TEST(Properties, WeilBounds) {
  const auto r = props::weil_bounds();
  EXPECT_TRUE(r.ok(15)) << r.first_failure;
}

TEST(Properties, ClosureStructure) {
  const auto r = props::closure_properties();
  EXPECT_TRUE(r.ok(18)) << r.first_failure;
}

TEST(Properties, SeedsAreReproducible) {
  const auto a = props::divisor_and_valuation(50), b = props::divisor_and_valuation(50);
  EXPECT_EQ(a.cases, b.cases);
  EXPECT_EQ(a.failures, b.failures);
  props::Rng r1(7), r2(7);
  const auto F = gf::build_ambient(3, {2});
  EXPECT_EQ(props::random_split_ratfun(*F, r1, 4), props::random_split_ratfun(*F, r2, 4));
}
