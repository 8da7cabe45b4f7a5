#include "cfp/cli.hpp"

#include <gtest/gtest.h>

#include <sstream>
#include <vector>

using namespace cfp;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation cli(std::vector<std::string> args) {
  args.insert(args.begin(), "cfp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string fixture(const std::string& stem) { return std::string(CFP_FIXTURE_DIR) + "/" + stem + ".map"; }

const nlohmann::json* find_report(const nlohmann::json& j, const std::string& name) {
  for (const auto& r : j.at("reports"))
    if (r.at("check") == name) return &r;
  return nullptr;
}

}  // namespace

TEST(Cli, VerifyEx22) {
  Invocation r = cli({"--format", "json", "verify", fixture("ex2_2")});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("tool_version"), kToolVersion);
  EXPECT_EQ(j.at("config").at("resolution"), 200);
  EXPECT_TRUE(j.at("solve").is_null());
  const auto* wc = find_report(j, "weakly_contractive");
  ASSERT_TRUE(wc);
  EXPECT_EQ(wc->at("verdict"), "pass");
  EXPECT_EQ(wc->at("margin").get<double>(), 0.0);
}

TEST(Cli, VerifyEx311Fails) {
  Invocation r = cli({"verify", fixture("ex3_11")});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.out.find("inf d(fx,Tx) ≈ 0.1667"), std::string::npos) << r.out;
}

TEST(Cli, UsageAndParseErrors) {
  EXPECT_EQ(cli({"verify", "nonexistent.map"}).code, kExitUsage);
  EXPECT_EQ(cli({}).code, kExitUsage);
  EXPECT_EQ(cli({"frobnicate"}).code, kExitUsage);
  EXPECT_EQ(cli({"--resolution", "1", "gallery"}).code, kExitUsage);
  EXPECT_EQ(cli({"--format", "xml", "gallery"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", fixture("ex2_2"), "--x0", "-1"}).code, kExitUsage);
  EXPECT_EQ(cli({"solve", fixture("ex2_2"), "--x0", "0", "--route", "newton"}).code, kExitUsage);
  EXPECT_EQ(cli({"--help"}).code, kExitOk);
}

TEST(Cli, SolveEx22) {
  Invocation r = cli({"solve", fixture("ex2_2"), "--x0", "0"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("fixed point: 2/3"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("route: jungck"), std::string::npos);
}

TEST(Cli, SolveEx39ExplainsFailure) {
  Invocation r = cli({"solve", fixture("ex3_9"), "--x0", "0.8"});
  EXPECT_EQ(r.code, kExitFailure);
  EXPECT_NE(r.out.find("f(X) not closed at limit 2/3"), std::string::npos) << r.out;
}

TEST(Cli, SolveEx37Direct) {
  Invocation r = cli({"--format", "json", "solve", fixture("ex3_7"), "--x0", "0", "--route", "direct"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  auto j = nlohmann::json::parse(r.out);
  Point z = point_from_json(j.at("solve").at("fixed_point"));
  EXPECT_LE(abs(z.scalar() - Rational(2, 3)), from_double(1e-9));
  EXPECT_EQ(j.at("solve").at("route"), "direct");
}

TEST(Cli, SolveVectorStart) {
  Invocation r = cli({"--seq-dim", "3", "solve", fixture("ex3_5"), "--x0", "(1, 1/2, 0)"});
  EXPECT_EQ(r.code, kExitOk) << r.err;
  EXPECT_NE(r.out.find("fixed point: (0, 0, 0)"), std::string::npos) << r.out;
}

TEST(Cli, Gallery) {
  Invocation all = cli({"gallery"});
  EXPECT_EQ(all.code, kExitOk);
  EXPECT_NE(all.out.find("7/7 fixtures pass"), std::string::npos);
  EXPECT_EQ(cli({"gallery", "--ids", "EX3_5", "--seq-dim", "32"}).code, kExitOk);
  EXPECT_EQ(cli({"gallery", "--ids", "BOGUS"}).code, kExitUsage);
}

TEST(Cli, GalleryOutputIsDeterministic) {
  EXPECT_EQ(cli({"--format", "json", "gallery"}).out, cli({"--format", "json", "gallery"}).out);
  // requested order does not matter
  EXPECT_EQ(cli({"gallery", "--ids", "EX3_9", "EX1_3"}).out, cli({"gallery", "--ids", "EX1_3", "EX3_9"}).out);
}

TEST(Cli, ReportsRoundTripThroughJson) {
  Invocation r = cli({"--format", "json", "verify", fixture("ex3_4")});
  auto j = nlohmann::json::parse(r.out);
  for (const auto& rep : j.at("reports")) {
    CheckReport back = report_from_json(rep);
    EXPECT_EQ(to_json(back), rep);
    EXPECT_EQ(report_from_json(to_json(back)), back);
  }
}

TEST(Cli, ParsePoint) {
  auto seq = MetricSpace::seq(3, IntervalDomain::closed(0, 1));
  EXPECT_EQ(parse_point("1/2", seq), broadcast(Rational(1, 2), 3));
  EXPECT_EQ(parse_point("(0, 0.5, 1)", seq), Point(std::vector<Rational>{0, Rational(1, 2), 1}));
  EXPECT_THROW(parse_point("(0, 1)", seq), std::invalid_argument);
  EXPECT_EQ(parse_point("0.8", MetricSpace::interval(IntervalDomain::closed(0, 1))), Point(Rational(4, 5)));
}

TEST(Cli, ConfigValidation) {
  RunConfig c;
  EXPECT_NO_THROW(c.validate());
  c.tol = 0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c = RunConfig{};
  c.resolution = 1;
  EXPECT_THROW(c.validate(), std::invalid_argument);
}
