#include "cfp/parser.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <string>

using namespace cfp;

namespace {

ParseError parse_error(const std::string& text) {
  try {
    parse_map_file(text);
  } catch (const ParseError& e) {
    return e;
  }
  ADD_FAILURE() << "no ParseError for:\n" << text;
  return ParseError("none", 0, 0);
}

std::string read_fixture(const std::string& stem) {
  std::ifstream in(std::string(CFP_FIXTURE_DIR) + "/" + stem + ".map");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST(Parser, SingleMap) {
  PiecewiseMap m = parse_map("piecewise x { [0, 2/3) -> 1/3; [2/3, 2/3] -> 2/3; (2/3, inf) -> 5/6; }");
  ASSERT_EQ(m.pieces().size(), 3u);
  EXPECT_EQ(m.eval(Rational(0)), Rational(1, 3));
  EXPECT_EQ(m.eval(Rational(2, 3)), Rational(2, 3));
  EXPECT_EQ(m.eval(Rational(100)), Rational(5, 6));
  EXPECT_FALSE(m.pieces()[2].domain.hi);
}

TEST(Parser, SpacesAndMaps) {
  MapFile f = parse_map_file(read_fixture("ex3_7"));
  EXPECT_EQ(f.space_name, "K");
  EXPECT_EQ(f.space.scalar_components().size(), 2u);
  EXPECT_TRUE(f.map("f").is_identity());
  EXPECT_TRUE(f.phi);
  EXPECT_TRUE(f.psi);
  EXPECT_THROW(f.map("g"), std::invalid_argument);

  MapFile s = parse_map_file(read_fixture("ex3_5"));
  EXPECT_TRUE(s.space.is_seq());
  EXPECT_EQ(s.space.dimension(), 8u);
  EXPECT_TRUE(s.map("T").coordinatewise());
}

TEST(Parser, EveryFixtureRoundTrips) {
  for (const char* stem : {"ex1_3", "ex2_2", "ex3_4", "ex3_5", "ex3_7", "ex3_9", "ex3_11"}) {
    MapFile a = parse_map_file(read_fixture(stem));
    MapFile b = parse_map_file(to_string(a));
    EXPECT_EQ(a.space, b.space) << stem;
    EXPECT_EQ(a.maps.size(), b.maps.size()) << stem;
    for (const auto& [name, m] : a.maps) EXPECT_EQ(m, b.map(name)) << stem << " " << name;
    EXPECT_EQ(a.phi.has_value(), b.phi.has_value());
    if (a.phi) EXPECT_EQ(*a.phi, *b.phi) << stem;
  }
}

TEST(Parser, CommentsAndWhitespace) {
  MapFile f = parse_map_file("# leading\nspace X = interval[0, 1] # trailing\n\nmap f = piecewise x {\n"
                             "  [0, 1] -> x; # id\n}\nmap T = piecewise y { [0, 1] -> y/2; }\n");
  EXPECT_EQ(f.map("T").eval(Rational(1)), Rational(1, 2));
}

TEST(Parser, ErrorsCarryPosition) {
  auto e = parse_error("space X = interval[0, 1]\nmap f = piecewise x { [0, 1] -> x +; }\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 36u);

  e = parse_error("space X = interval[0, 1]\nmap f = piecewise x { [0, 1/2] -> x; [1/2, 1] -> 1; }\n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_NE(std::string(e.what()).find("overlap"), std::string::npos) << e.what();

  e = parse_error("space X = interval[0, 1]\nmap f = piecewise x { [0, 1/2) -> x; }\n");
  EXPECT_NE(std::string(e.what()).find("coverage gap"), std::string::npos) << e.what();

  e = parse_error("space X = interval[0, 1]\nmap f = piecewise x { [0, 1] -> y; }\n");
  EXPECT_EQ(e.line(), 2u);

  e = parse_error("map f = identity\n");
  EXPECT_EQ(e.line(), 1u);

  // an unterminated block points at where it opened
  e = parse_error("space X = interval[0, 1]\nmap f = piecewise x { [0, 1] -> x; \n");
  EXPECT_EQ(e.line(), 2u);
  EXPECT_EQ(e.column(), 9u);

  e = parse_error("space X = interval[0, 1]\nmap f = piecewise x { [0, 1] -> x @ 2; }\n");
  EXPECT_EQ(e.line(), 2u);
}

TEST(Parser, InfinityOnlyAtOpenEnds) {
  EXPECT_THROW(parse_map("piecewise x { [0, inf] -> x; }"), ParseError);
  EXPECT_THROW(parse_map("piecewise x { (inf, 1) -> x; }"), ParseError);
  EXPECT_NO_THROW(parse_map("piecewise x { (-inf, inf) -> x; }"));
}

TEST(Parser, MissingFileIsRuntimeError) { EXPECT_THROW(load_map_file("/nonexistent/x.map"), std::runtime_error); }
