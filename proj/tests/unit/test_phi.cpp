#include "cfp/parser.hpp"
#include "cfp/phi.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cfp;

namespace {

AlteringFunction phi(const std::string& pieces) { return AlteringFunction(parse_map("piecewise t { " + pieces + " }")); }

const char* kEx22 = "[0, 1/3] -> (3/2)*t^2; (1/3, inf) -> 2/(9*(1 + t));";

}  // namespace

TEST(AlteringFunction, MustCoverHalfLine) {
  EXPECT_THROW(phi("[0, 1] -> t;"), DomainError);
  EXPECT_THROW(phi("(0, inf) -> t;"), DomainError);
  EXPECT_NO_THROW(phi("[0, inf) -> t/2;"));
}

TEST(PhiMembership, AcceptsClassMembers) {
  for (const char* p : {"[0, inf) -> t/2;", "[0, inf) -> t^2/(1 + t);", "[0, inf) -> (3/2)*t^2;", kEx22}) {
    CheckReport r = check_phi_membership(phi(p), 200);
    EXPECT_EQ(r.verdict, Verdict::Pass) << p;
    ASSERT_TRUE(r.margin);
    EXPECT_GT(*r.margin, 0.0);
  }
}

TEST(PhiMembership, RejectsNonzeroAtOrigin) {
  auto f = phi("[0, inf) -> t + 1;");
  CheckReport r = check_phi_membership(f, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_TRUE(oracle::phi_witness_holds(f, r.witnesses.front()));
}

TEST(PhiMembership, RejectsVanishingOnPositiveTimes) {
  auto f = phi("[0, 1] -> 0; (1, inf) -> t - 1;");
  CheckReport r = check_phi_membership(f, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  for (const auto& w : r.witnesses) EXPECT_TRUE(oracle::phi_witness_holds(f, w)) << w.label;
}

TEST(PhiMembership, RejectsJumps) {
  auto f = phi("[0, 1] -> t; (1, inf) -> 2*t;");
  CheckReport r = check_phi_membership(f, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_EQ(r.witnesses.front().label, "discontinuity");
  EXPECT_EQ(r.witnesses.front().at("t"), Point(Rational(1)));
  EXPECT_TRUE(oracle::phi_witness_holds(f, r.witnesses.front()));
}

// phi(1/3) = 1/6 and phi(1) = 2/(9*2) = 1/9, so phi drops after 1/3.
TEST(BegAbbas, NonMonotoneExample) {
  auto f = phi(kEx22);
  EXPECT_EQ(f(Rational(1, 3)), Rational(1, 6));
  EXPECT_EQ(f(Rational(1)), Rational(1, 9));
  CheckReport r = check_beg_abbas_phi(f, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_EQ(r.witnesses.size(), 1u);
  const Witness& w = r.witnesses.front();
  EXPECT_EQ(w.label, "not monotone");
  EXPECT_EQ(w.at("t1"), Point(Rational(1, 3)));
  EXPECT_EQ(w.at("t2"), Point(Rational(1)));
  EXPECT_EQ(w.at("phi(t1)"), Point(Rational(1, 6)));
  EXPECT_EQ(w.at("phi(t2)"), Point(Rational(1, 9)));
  EXPECT_TRUE(oracle::phi_witness_holds(f, w));
}

TEST(BegAbbas, BoundedGrowthFails) {
  auto f = phi("[0, inf) -> t/(1 + t);");
  CheckReport r = check_beg_abbas_phi(f, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_EQ(r.witnesses.front().label, "bounded growth");
  EXPECT_TRUE(oracle::phi_witness_holds(f, r.witnesses.front()));
}

TEST(BegAbbas, UnboundedMonotonePasses) {
  EXPECT_EQ(check_beg_abbas_phi(phi("[0, inf) -> t^2/(1 + t);"), 200).verdict, Verdict::Pass);
  EXPECT_EQ(check_beg_abbas_phi(phi("[0, inf) -> t/2;"), 200).verdict, Verdict::Pass);
}

TEST(BegAbbas, UnknownOutsideClass) {
  EXPECT_EQ(check_beg_abbas_phi(phi("[0, inf) -> t + 1;"), 200).verdict, Verdict::Unknown);
}

TEST(PhiSamples, IncludeBreakpointsAndLadder) {
  auto pts = phi_sample_points(phi(kEx22), 20, 1e6);
  auto has = [&](const Rational& t) { return std::find(pts.begin(), pts.end(), t) != pts.end(); };
  EXPECT_TRUE(has(Rational(1, 3)));
  EXPECT_TRUE(has(Rational(0)));
  EXPECT_TRUE(has(Rational(1000000)));
  EXPECT_TRUE(has(Rational(500)));
  EXPECT_TRUE(std::is_sorted(pts.begin(), pts.end()));
}
