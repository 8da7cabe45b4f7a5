#include "cfp/gallery.hpp"
#include "cfp/parser.hpp"
#include "cfp/verifiers.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

using namespace cfp;

namespace {

const Rational kTwoThirds(2, 3);

MapPair pair_from(const std::string& text) {
  MapFile f = parse_map_file(text);
  std::optional<AlteringFunction> phi;
  if (f.phi) phi = AlteringFunction(*f.phi);
  return bind_pair(f.space, f.map("f"), f.map("T"), phi);
}

MapPair fixture_pair(const std::string& id, std::size_t dim = 8) { return load_fixture(id, dim).pair; }

}  // namespace

TEST(BindPair, RejectsNonSelfmaps) {
  EXPECT_THROW(pair_from("space X = interval[0, 1]\nmap f = identity\nmap T = piecewise x { [0, 1] -> x + 1; }\n"),
               DomainError);
}

TEST(ProbePoints, IncludeBreakpointNeighbours) {
  MapPair p = fixture_pair("EX3_4");
  auto pts = scalar_probe_points(p, 10);
  auto has = [&](const Rational& t) { return std::find(pts.begin(), pts.end(), t) != pts.end(); };
  EXPECT_TRUE(has(kTwoThirds));
  EXPECT_TRUE(has(kTwoThirds - open_nudge()));
  EXPECT_TRUE(has(kTwoThirds + open_nudge()));
  for (const auto& t : pts) EXPECT_TRUE(p.space.contains_scalar(t));
}

// Equality at (x, y) = (0, 2/3): d(fx, fy) = 1/3, phi(1/3) = 1/6,
// d(Tx, Ty) = 1/6, so the best possible margin is exactly 0.
TEST(WeaklyContractive, Ex22MarginIsZero) {
  CheckReport r = check_weakly_contractive(fixture_pair("EX2_2"), 200);
  EXPECT_EQ(r.verdict, Verdict::Pass);
  ASSERT_TRUE(r.margin);
  EXPECT_EQ(*r.margin, 0.0);
}

TEST(WeaklyContractive, WithoutPhiViolationFails) {
  // EX1_3: at x = 2/3, y -> 1, d(fx, fy) -> 1/6, d(Tx, Ty) -> 1/3
  MapPair p = fixture_pair("EX1_3");
  CheckReport r = check_weakly_contractive(p, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_TRUE(oracle::pair_witness_holds(p, r.witnesses.front()));
}

TEST(WeaklyContractive, WithoutPhiNoViolationIsUnknown) {
  MapPair p = pair_from("space X = interval[0, 1]\nmap f = identity\nmap T = piecewise x { [0, 1] -> x/2; }\n");
  EXPECT_EQ(check_weakly_contractive(p, 50).verdict, Verdict::Unknown);
}

TEST(WeaklyContractive, PlainViolationWithPhi) {
  MapPair p = pair_from("space X = interval[0, 1]\nmap f = identity\nmap T = piecewise x { [0, 1] -> x; }\n"
                        "phi = piecewise t { [0, inf) -> t/2; }\n");
  CheckReport r = check_weakly_contractive(p, 50);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  std::string why;
  EXPECT_TRUE(oracle::failing_witnesses_hold(r, p, &why)) << why;
}

TEST(WeaklyContractive, PassesReverifyAtDoubleResolution) {
  for (const auto& id : fixture_ids()) {
    MapPair p = fixture_pair(id);
    CheckReport a = check_weakly_contractive(p, 100);
    if (a.verdict != Verdict::Pass) continue;
    CheckReport b = check_weakly_contractive(p, 200);
    EXPECT_EQ(b.verdict, Verdict::Pass) << id;
  }
}

TEST(WeaklyContractive, SeqSpaceAcrossDimensions) {
  for (std::size_t dim : {1u, 8u, 32u}) {
    CheckReport r = check_weakly_contractive(fixture_pair("EX3_5", dim), 100);
    EXPECT_EQ(r.verdict, Verdict::Pass) << dim;
    ASSERT_TRUE(r.margin);
    EXPECT_GE(*r.margin, -1e-9);
  }
}

TEST(BoydWong, Ex37AndRejectedPsi) {
  Fixture fx = load_fixture("EX3_7");
  ASSERT_TRUE(fx.psi);
  EXPECT_EQ(check_boyd_wong(fx.pair, *fx.psi, 200).verdict, Verdict::Pass);
  AlteringFunction id(parse_map("piecewise t { [0, inf) -> t; }"));
  CheckReport r = check_boyd_wong(fx.pair, id, 200);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  ASSERT_FALSE(r.witnesses.empty());
  EXPECT_EQ(r.witnesses.front().label, "psi(t) >= t");
}

TEST(Coincidences, ExactForAffinePieces) {
  EXPECT_EQ(scalar_coincidences(fixture_pair("EX2_2"), 200, 1e-9), (std::vector<Rational>{kTwoThirds}));
  EXPECT_EQ(scalar_coincidences(fixture_pair("EX3_4"), 200, 1e-9), (std::vector<Rational>{kTwoThirds}));
  EXPECT_TRUE(scalar_coincidences(fixture_pair("EX3_9"), 200, 1e-9).empty());
  EXPECT_TRUE(scalar_coincidences(fixture_pair("EX3_11"), 200, 1e-9).empty());
  // EX1_3: f = T = 2/3 on all of [0, 2/3), plus x = 2/3
  auto c = scalar_coincidences(fixture_pair("EX1_3"), 20, 1e-9);
  ASSERT_FALSE(c.empty());
  MapPair p = fixture_pair("EX1_3");
  for (const auto& x : c) EXPECT_EQ(p.f.eval(x), p.T.eval(x));
}

TEST(WeakCompatibility, VacuousAndCommuting) {
  CheckReport v = check_weak_compatibility(fixture_pair("EX3_9"), 1e-9);
  EXPECT_EQ(v.verdict, Verdict::Pass);
  EXPECT_TRUE(v.has_note("vacuous"));
  EXPECT_EQ(check_weak_compatibility(fixture_pair("EX2_2"), 1e-9).verdict, Verdict::Pass);
}

TEST(WeakCompatibility, NoncommutingCoincidence) {
  // f(0) = T(0) = 1 but T(f(0)) = T(1) = 0 and f(T(0)) = f(1) = 1/2
  MapPair p = pair_from("space X = interval[0, 1]\nmap f = piecewise x { [0, 1] -> 1 - x/2; }\n"
                        "map T = piecewise x { [0, 1] -> 1 - x; }\n");
  CheckReport r = check_weak_compatibility(p, 1e-9);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  std::string why;
  EXPECT_TRUE(oracle::failing_witnesses_hold(r, p, &why)) << why;
}

TEST(EaSearch, FindsBreakpointApproach) {
  EaSearch s = search_ea_witness(fixture_pair("EX3_4"), 1e-9, 100000);
  ASSERT_TRUE(s.witness);
  EXPECT_EQ(s.witness->limit, Point(kTwoThirds));
  EXPECT_EQ(s.report.verdict, Verdict::Pass);
}

TEST(EaSearch, WitnessIsSelfConsistent) {
  for (const auto& id : fixture_ids()) {
    MapPair p = fixture_pair(id);
    EaSearch s = search_ea_witness(p, 1e-9, 100000);
    if (!s.witness) continue;
    EXPECT_TRUE(contains(p.space, s.witness->limit)) << id;
    // both sequences approach the limit
    Point far = s.witness->term(100000);
    Rational lim_gap = distance(p.space, eval_map(p.f, far), s.witness->limit);
    Rational lim_gap_t = distance(p.space, eval_map(p.T, far), s.witness->limit);
    EXPECT_LT(to_double(lim_gap), 1e-4) << id << " " << s.witness->describe();
    EXPECT_LT(to_double(lim_gap_t), 1e-4) << id << " " << s.witness->describe();
  }
}

// On (2/3, 1] f = 2/3, T = 1/2; on [1/2, 2/3] f = 1, T = 2/3.
TEST(EaSearch, Ex311InfimumIsOneSixth) {
  EaSearch s = search_ea_witness(fixture_pair("EX3_11"), 1e-9, 100000);
  EXPECT_FALSE(s.witness);
  EXPECT_NEAR(to_double(s.infimum), 1.0 / 6.0, 1e-9);
  EXPECT_EQ(s.report.verdict, Verdict::Fail);
  EXPECT_TRUE(s.report.has_note("inf d(fx,Tx) ≈ 0.1667"));
}

TEST(SequenceDescriptor, Terms) {
  auto d = SequenceDescriptor::explicit_formula(Point(kTwoThirds), Point(Rational(1)), 4, Point(kTwoThirds));
  EXPECT_EQ(d.term(5), Point(kTwoThirds + Rational(1, 5)));
  auto c = SequenceDescriptor::constant_at(Point(Rational(1, 2)), Point(Rational(1, 2)));
  EXPECT_EQ(c.term(1000), Point(Rational(1, 2)));
  EXPECT_EQ(to_string(SequenceDescriptor::Kind::Recorded), "recorded");
}

// fTx_n = f(1 - x_n/2) = 1 and Tfx_n = T(x_n) = 1 - x_n/2 -> 2/3, so the
// commutator tends to 1/3.
TEST(Compatibility, Ex34NoncompatibleAlongBreakpointSequence) {
  Fixture fx = load_fixture("EX3_4");
  ASSERT_TRUE(fx.witness);
  CheckReport r = check_compatibility(fx.pair, *fx.witness, 100000);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  const Witness& w = r.witnesses.front();
  EXPECT_NEAR(to_double(w.at("tail_limit")[0]), 1.0 / 3.0, 1e-6);
  EXPECT_GE(to_double(w.at("tail_limit")[0]), 0.15);
  EXPECT_TRUE(r.has_note("noncompatible"));
}

TEST(Compatibility, Ex13CompatibleAlongApproach) {
  Fixture fx = load_fixture("EX1_3");
  ASSERT_TRUE(fx.witness);
  EXPECT_EQ(check_compatibility(fx.pair, *fx.witness, 100000).verdict, Verdict::Pass);
}

TEST(RangeInclusion, Ex34FailsBothWays) {
  MapPair p = fixture_pair("EX3_4");
  for (bool rev : {false, true}) {
    CheckReport r = check_range_inclusion(p, rev);
    EXPECT_EQ(r.verdict, Verdict::Fail) << rev;
    std::string why;
    EXPECT_TRUE(oracle::failing_witnesses_hold(r, p, &why)) << why;
  }
}

TEST(RangeInclusion, Ex22Holds) {
  CheckReport r = check_range_inclusion(fixture_pair("EX2_2"));
  EXPECT_EQ(r.verdict, Verdict::Pass);
  EXPECT_EQ(check_range_inclusion(fixture_pair("EX2_2"), true).check_name, "range_inclusion_reverse");
}

TEST(FRangeClosed, OpenEndAtTwoThirds) {
  MapPair p = fixture_pair("EX3_9");
  CheckReport r = check_f_range_closed(p);
  EXPECT_EQ(r.verdict, Verdict::Fail);
  EXPECT_EQ(r.witnesses.front().at("t"), Point(kTwoThirds));
  std::string why;
  EXPECT_TRUE(oracle::failing_witnesses_hold(r, p, &why)) << why;
}

TEST(FailingWitnesses, AllFixtureChecksReEvaluate) {
  RunConfig config;
  for (const auto& id : fixture_ids()) {
    Fixture fx = load_fixture(id);
    FixtureRun run = run_fixture(fx, config);
    for (const auto& r : run.reports) {
      std::string why;
      EXPECT_TRUE(oracle::failing_witnesses_hold(r, fx.pair, &why)) << id << " " << why;
    }
  }
}
