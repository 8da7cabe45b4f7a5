#include "cfp/gallery.hpp"
#include "cfp/parser.hpp"
#include "cfp/solver.hpp"

#include <gtest/gtest.h>

using namespace cfp;

namespace {

const Rational kTwoThirds(2, 3);

MapPair fixture_pair(const std::string& id, std::size_t dim = 8) { return load_fixture(id, dim).pair; }

}  // namespace

// From x0 = 0: T(0) = 5/6 = f(x1) for any x1 > 2/3, then T(x1) = 2/3 = f(2/3).
TEST(Jungck, Ex22ReachesTwoThirds) {
  SolveResult s = jungck_iterate(fixture_pair("EX2_2"), Point(Rational(0)), 1e-9);
  ASSERT_TRUE(s.fixed_point);
  EXPECT_EQ(*s.fixed_point, Point(kTwoThirds));
  EXPECT_EQ(s.trace.termination, Termination::Converged);
  EXPECT_LE(s.trace.steps, 50u);
  EXPECT_EQ(check_monotone_decrease(s.trace, 1e-9).verdict, Verdict::Pass);
  // y_n = T x_n = f x_{n+1}
  MapPair p = fixture_pair("EX2_2");
  for (std::size_t i = 0; i + 1 < s.trace.iterates.size(); ++i)
    EXPECT_EQ(s.trace.iterates[i].second, eval_map(p.f, s.trace.iterates[i + 1].first));
}

TEST(Jungck, PreimageMissing) {
  SolveResult s = jungck_iterate(fixture_pair("EX3_4"), Point(Rational(1, 2)), 1e-9);
  // T(1/2) = 1/2 is not a value of f on EX3_4
  EXPECT_FALSE(s.fixed_point);
  EXPECT_EQ(s.trace.termination, Termination::PreimageMissing);
  ASSERT_TRUE(s.trace.failed_at);
}

TEST(Jungck, MaxIters) {
  MapPair p = bind_pair(MetricSpace::interval(IntervalDomain::closed(0, 1)),
                        parse_map("piecewise x { [0, 1] -> x; }"), parse_map("piecewise x { [0, 1] -> 1 - x; }"));
  SolveResult s = jungck_iterate(p, Point(Rational(0)), 1e-9, 25);
  EXPECT_FALSE(s.fixed_point);
  EXPECT_EQ(s.trace.termination, Termination::MaxIters);
  EXPECT_EQ(s.trace.steps, 25u);
}

TEST(MonotoneDecrease, DetectsIncrease) {
  IterationTrace t;
  t.distances = {Rational(1), Rational(1, 2), Rational(3, 4)};
  t.steps = 3;
  CheckReport r = check_monotone_decrease(t, 1e-9);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_EQ(r.witnesses.front().at("n"), Point(Rational(1)));
}

TEST(Ea, Ex34SolvesFromBreakpointWitness) {
  Fixture fx = load_fixture("EX3_4");
  SolveResult s = ea_solve(fx.pair, *fx.witness, 1e-9);
  ASSERT_TRUE(s.fixed_point) << s.failure;
  EXPECT_EQ(*s.fixed_point, Point(kTwoThirds));
  ASSERT_TRUE(s.ea);
  EXPECT_EQ(s.ea->z, Point(kTwoThirds));
}

TEST(Ea, Ex39NotClosed) {
  Fixture fx = load_fixture("EX3_9");
  SolveResult s = ea_solve(fx.pair, *fx.witness, 1e-9);
  EXPECT_FALSE(s.fixed_point);
  EXPECT_EQ(s.failure, "f(X) not closed at limit 2/3");
}

TEST(Ea, Ex35NullVectorExactly) {
  for (std::size_t dim : {1u, 8u, 32u}) {
    Fixture fx = load_fixture("EX3_5", dim);
    auto w = SequenceDescriptor::constant_at(broadcast(0, dim), broadcast(0, dim));
    SolveResult s = ea_solve(fx.pair, w, 1e-9);
    ASSERT_TRUE(s.fixed_point) << dim;
    EXPECT_EQ(*s.fixed_point, broadcast(0, dim));
  }
}

// T(x) = 1/3 + x/2 on [1/3, 1]: the error halves every step.
TEST(Direct, Ex37ConvergesGeometrically) {
  Fixture fx = load_fixture("EX3_7");
  for (const Rational& x0 : {Rational(0), Rational(1, 3), Rational(1)}) {
    SolveResult s = direct_fixed_point(fx.pair.space, fx.pair.T, fx.pair.phi, Point(x0), 1e-9);
    ASSERT_TRUE(s.fixed_point);
    EXPECT_LE(abs(s.fixed_point->scalar() - kTwoThirds), from_double(1e-9));
    EXPECT_LE(s.trace.steps, 60u);
    EXPECT_EQ(check_monotone_decrease(s.trace, 1e-9).verdict, Verdict::Pass);
    for (std::size_t i = 1; i < s.trace.distances.size(); ++i)
      EXPECT_EQ(s.trace.distances[i], s.trace.distances[i - 1] / 2) << i;
  }
}

TEST(VerifyCommonFixedPoint, ResidualsAreExact) {
  MapPair p = fixture_pair("EX2_2");
  EXPECT_EQ(verify_common_fixed_point(p, Point(kTwoThirds), 1e-9).verdict, Verdict::Pass);
  CheckReport r = verify_common_fixed_point(p, Point(Rational(1, 3)), 1e-9);
  EXPECT_EQ(r.verdict, Verdict::Fail);
}

TEST(Uniqueness, SingleClusterOnFixtures) {
  for (const auto& id : fixture_ids()) EXPECT_EQ(check_uniqueness(fixture_pair(id), 100, 1e-9).verdict, Verdict::Pass) << id;
  MapPair id_pair = bind_pair(MetricSpace::interval(IntervalDomain::closed(0, 1)),
                              parse_map("piecewise x { [0, 1] -> x; }"), parse_map("piecewise x { [0, 1] -> x; }"));
  EXPECT_EQ(check_uniqueness(id_pair, 20, 1e-9).verdict, Verdict::Fail);
}

TEST(Solve, AutoCascade) {
  RunConfig c;
  SolveResult a = solve(fixture_pair("EX2_2"), std::nullopt, Point(Rational(0)), c);
  EXPECT_EQ(a.route, Route::Jungck);
  EXPECT_EQ(a.fixed_point, Point(kTwoThirds));

  SolveResult b = solve(fixture_pair("EX3_4"), std::nullopt, Point(Rational(1, 2)), c);
  EXPECT_EQ(b.route, Route::Ea);
  EXPECT_EQ(b.fixed_point, Point(kTwoThirds));

  SolveResult n = solve(fixture_pair("EX3_11"), std::nullopt, Point(Rational(4, 5)), c);
  EXPECT_FALSE(n.fixed_point);
  EXPECT_NE(n.failure.find("no witness found"), std::string::npos) << n.failure;
}

TEST(Solve, DirectNeedsIdentity) {
  RunConfig c;
  SolveResult s = solve(fixture_pair("EX2_2"), Route::Direct, Point(Rational(0)), c);
  EXPECT_FALSE(s.fixed_point);
  EXPECT_FALSE(s.failure.empty());
}

TEST(Solve, EveryFixedPointVerifiesIndependently) {
  RunConfig c;
  for (const auto& id : fixture_ids()) {
    Fixture fx = load_fixture(id);
    for (auto route : {std::optional<Route>{}, std::optional<Route>{Route::Jungck}, std::optional<Route>{Route::Ea}}) {
      SolveResult s = solve(fx.pair, route, fx.x0, c);
      if (!s.fixed_point) continue;
      EXPECT_EQ(verify_common_fixed_point(fx.pair, *s.fixed_point, 1e-9).verdict, Verdict::Pass) << id;
      if (s.trace.distances.size() >= 2) EXPECT_TRUE(check_monotone_decrease(s.trace, 1e-9).passed()) << id;
    }
  }
}

TEST(Route, Names) {
  for (auto r : {Route::Jungck, Route::Ea, Route::Direct}) EXPECT_EQ(parse_route(to_string(r)), r);
  EXPECT_THROW(parse_route("newton"), std::invalid_argument);
}
