#include "cfp/gallery.hpp"
#include "cfp/parser.hpp"
#include "cfp/range_set.hpp"

#include <gtest/gtest.h>

using namespace cfp;

namespace {

const Rational kThird(1, 3), kHalf(1, 2), kTwoThirds(2, 3), kFiveSixths(5, 6);

IntervalDomain iv(Rational a, bool ac, Rational b, bool bc) { return IntervalDomain::make(a, ac, b, bc); }
IntervalDomain pt(Rational a) { return IntervalDomain::point(a); }
IntervalDomain from(Rational a, bool ac) { return IntervalDomain::make(a, ac, std::nullopt, false); }

RangeSet exact(std::vector<IntervalDomain> c) { return RangeSet{std::move(c), true, {}}; }

RangeSet range_in_fixture(const std::string& id, const std::string& map) {
  Fixture fx = load_fixture(id);
  return range_of(map == "f" ? fx.pair.f : fx.pair.T, fx.pair.space);
}

}  // namespace

TEST(RangeSet, NormalizeMergesTouching) {
  auto n = normalize({iv(1, true, 2, false), iv(0, true, 1, false), pt(2), iv(5, false, 5, true)});
  ASSERT_EQ(n.size(), 1u);
  EXPECT_EQ(n[0], iv(0, true, 2, true));
  // (0, 1) and (1, 2) do not touch at 1
  EXPECT_EQ(normalize({iv(0, false, 1, false), iv(1, false, 2, false)}).size(), 2u);
}

TEST(RangeSet, SetAlgebra) {
  std::vector<IntervalDomain> a{iv(0, true, 1, true)}, b{iv(kHalf, false, 2, true)};
  EXPECT_EQ(set_intersection(a, b), (std::vector<IntervalDomain>{iv(kHalf, false, 1, true)}));
  EXPECT_EQ(set_difference(a, b), (std::vector<IntervalDomain>{iv(0, true, kHalf, true)}));
  auto c = set_complement(a);
  ASSERT_EQ(c.size(), 2u);
  EXPECT_FALSE(c[0].lo);
  EXPECT_FALSE(c[0].hi_closed);
  EXPECT_TRUE(set_difference(a, a).empty());
}

TEST(RangeSet, Representative) {
  EXPECT_EQ(representative(iv(kHalf, true, 1, true)), kHalf);
  EXPECT_EQ(representative(iv(0, false, 1, false)), kHalf);
  EXPECT_EQ(representative(from(3, false)), Rational(4));
}

TEST(RangeSet, ClosedRelativeToAmbient) {
  auto space = iv(kHalf, true, 1, true);
  EXPECT_EQ(is_closed(exact({iv(kTwoThirds, false, 1, true)}), space), false);
  EXPECT_EQ(is_closed(exact({iv(kTwoThirds, true, 1, true)}), space), true);
  // open end outside the ambient set does not matter: [0, 1) in [0, 1)
  EXPECT_EQ(is_closed(exact({iv(0, true, 1, false)}), iv(0, true, 1, false)), true);
  RangeSet approx{{iv(0, true, 1, true)}, false, {}};
  EXPECT_FALSE(is_closed(approx, space).has_value());
}

// Hand-derived images, branch by branch.
TEST(RangeOf, Fixtures) {
  EXPECT_EQ(range_in_fixture("EX1_3", "f"), exact({iv(kHalf, false, kTwoThirds, true)}));
  EXPECT_EQ(range_in_fixture("EX1_3", "T"), exact({iv(kThird, false, kTwoThirds, true)}));
  EXPECT_EQ(range_in_fixture("EX2_2", "f"), exact({pt(kThird), pt(kTwoThirds), pt(kFiveSixths)}));
  EXPECT_EQ(range_in_fixture("EX2_2", "T"), exact({pt(kTwoThirds), pt(kFiveSixths)}));
  EXPECT_EQ(range_in_fixture("EX3_4", "f"), exact({iv(kTwoThirds, true, 1, true)}));
  EXPECT_EQ(range_in_fixture("EX3_4", "T"), exact({iv(kHalf, true, kTwoThirds, true)}));
  EXPECT_EQ(range_in_fixture("EX3_5", "f"), exact({from(0, true)}));
  EXPECT_EQ(range_in_fixture("EX3_7", "f"), exact({pt(0), iv(kThird, true, 1, true)}));
  EXPECT_EQ(range_in_fixture("EX3_7", "T"), exact({pt(kThird), iv(kHalf, true, kFiveSixths, true)}));
  EXPECT_EQ(range_in_fixture("EX3_9", "f"), exact({iv(kTwoThirds, false, 1, true)}));
  EXPECT_EQ(range_in_fixture("EX3_9", "T"), exact({iv(kHalf, true, kTwoThirds, false)}));
  EXPECT_EQ(range_in_fixture("EX3_11", "f"), exact({pt(kTwoThirds), pt(1)}));
  EXPECT_EQ(range_in_fixture("EX3_11", "T"), exact({pt(kHalf), pt(kTwoThirds)}));
}

// x/(1 + x) increases on [0, inf) towards 1 without reaching it.
TEST(RangeOf, LinearFractionalIsExact) {
  EXPECT_EQ(range_in_fixture("EX3_5", "T"), exact({iv(0, true, 1, false)}));
  // decreasing: 1/(1 + x) on [0, 1] gives [1/2, 1]
  EXPECT_EQ(range_of(parse_map("piecewise x { [0, 1] -> 1/(1 + x); }")), exact({iv(kHalf, true, 1, true)}));
  // pole at x = 1 inside the domain: falls back to sampling
  EXPECT_FALSE(range_of(parse_map("piecewise x { [0, 2] -> 1/(x - 1) + 5; }")).exact);
  // (2x + 2)/(x + 1) is the constant 2
  EXPECT_EQ(range_of(parse_map("piecewise x { [0, 1] -> (2*x + 2)/(x + 1); }")), exact({pt(2)}));
}

TEST(RangeOf, NonlinearPieceIsApproximate) {
  RangeSet r = range_of(parse_map("piecewise x { [0, 2] -> x^2/(1 + x); }"));
  EXPECT_FALSE(r.exact);
  ASSERT_EQ(r.components.size(), 1u);
  EXPECT_EQ(*r.components.front().lo, 0);
  EXPECT_NEAR(to_double(*r.components.front().hi), 4.0 / 3.0, 1e-15);
}

TEST(RangeOf, ClosednessOfFixtureRanges) {
  Fixture ex39 = load_fixture("EX3_9");
  EXPECT_EQ(is_closed(range_of(ex39.pair.f, ex39.pair.space), ex39.pair.space.scalar_components()), false);
  Fixture ex22 = load_fixture("EX2_2");
  EXPECT_EQ(is_closed(range_of(ex22.pair.f, ex22.pair.space), ex22.pair.space.scalar_components()), true);
  Fixture ex13 = load_fixture("EX1_3");
  EXPECT_EQ(is_closed(range_of(ex13.pair.f, ex13.pair.space), ex13.pair.space.scalar_components()), false);
}
