#include "cfp/gallery.hpp"

#include <gtest/gtest.h>

using namespace cfp;

class GalleryFixture : public ::testing::TestWithParam<std::string> {};

TEST_P(GalleryFixture, VerdictsMatchExpected) {
  RunConfig c;
  FixtureRun run = run_fixture(load_fixture(GetParam()), c);
  for (const auto& row : run.rows) EXPECT_EQ(row.actual, row.expected) << GetParam() << " " << row.check;
  EXPECT_TRUE(run.matches);
  EXPECT_TRUE(std::is_sorted(run.reports.begin(), run.reports.end(),
                             [](const auto& a, const auto& b) { return a.check_name < b.check_name; }));
}

INSTANTIATE_TEST_SUITE_P(All, GalleryFixture, ::testing::ValuesIn(fixture_ids()));

TEST(Gallery, Ex35DimensionIndependent) {
  RunConfig c;
  for (std::size_t dim : {1u, 8u, 32u}) {
    FixtureRun run = run_fixture(load_fixture("EX3_5", dim), c);
    EXPECT_TRUE(run.matches) << dim;
    ASSERT_TRUE(run.solve && run.solve->fixed_point);
    EXPECT_EQ(*run.solve->fixed_point, broadcast(0, dim));
  }
}

TEST(Gallery, ExpectedFixedPoints) {
  RunConfig c;
  for (const auto& id : fixture_ids()) {
    Fixture fx = load_fixture(id);
    FixtureRun run = run_fixture(fx, c);
    if (!fx.expected_fixed_point) {
      EXPECT_FALSE(run.solve->fixed_point) << id;
      continue;
    }
    ASSERT_TRUE(run.solve->fixed_point) << id;
    EXPECT_LE(distance(fx.pair.space, *run.solve->fixed_point, *fx.expected_fixed_point), from_double(1e-9)) << id;
  }
}

TEST(Gallery, UnknownId) { EXPECT_THROW(load_fixture("EX9_9"), std::invalid_argument); }

// x = 0, y = (t, 0, ...): d(Tx, Ty) = t/(1 + t) > k t iff t < (1 - k)/k.
TEST(NonContraction, WitnessesForEachK) {
  Fixture fx = load_fixture("EX3_5");
  for (double k : {0.5, 0.9, 0.99}) {
    auto w = non_contraction_witness(fx.pair.space, fx.pair.T, k);
    ASSERT_TRUE(w) << k;
    Rational t = w->second[0];
    EXPECT_LT(t, (1 - from_double(k)) / from_double(k));
    EXPECT_GT(distance(fx.pair.space, eval_map(fx.pair.T, w->first), eval_map(fx.pair.T, w->second)),
              from_double(k) * distance(fx.pair.space, w->first, w->second));
  }
  auto w5 = non_contraction_witness(fx.pair.space, fx.pair.T, 0.5);
  EXPECT_EQ(w5->second[0], Rational(1, 2));
  auto w9 = non_contraction_witness(fx.pair.space, fx.pair.T, 0.9);
  EXPECT_EQ(w9->second[0], Rational(1, 20));
  EXPECT_THROW(non_contraction_witness(fx.pair.space, fx.pair.T, 1.0), std::invalid_argument);
  EXPECT_THROW(non_contraction_witness(fx.pair.space, fx.pair.T, 0.0), std::invalid_argument);
}
