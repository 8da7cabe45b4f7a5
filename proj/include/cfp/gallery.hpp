#pragma once

#include "cfp/config.hpp"
#include "cfp/parser.hpp"
#include "cfp/solver.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cfp {

/// Bundled map files keyed by stem ("ex2_2"); generated at build time.
const std::vector<std::pair<std::string, std::string>>& embedded_fixture_sources();
/// Source text for a stem; throws std::invalid_argument when absent.
const std::string& fixture_source(const std::string& stem);

/// Ids in sorted order: EX1_3, EX2_2, EX3_4, EX3_5, EX3_7, EX3_9, EX3_11.
const std::vector<std::string>& fixture_ids();

struct Fixture {
  std::string id;
  MapFile file;
  MapPair pair;
  std::optional<AlteringFunction> psi;
  /// Witness sequence written down for the example, when there is one.
  std::optional<SequenceDescriptor> witness;
  std::map<std::string, Verdict> expected;
  std::optional<Point> expected_fixed_point;
  std::optional<Route> route;  // route the gallery exercises; nullopt = auto
  Point x0;
};

/// Throws std::invalid_argument for an unknown id. seq_dim only affects the
/// sequence-space example.
Fixture load_fixture(const std::string& id, std::size_t seq_dim = 8);

struct FixtureRow {
  std::string check;
  Verdict expected;
  Verdict actual;
  std::optional<double> margin;
};

struct FixtureRun {
  std::string id;
  std::vector<CheckReport> reports;
  std::optional<SolveResult> solve;
  std::vector<FixtureRow> rows;
  bool matches = true;
};

FixtureRun run_fixture(const Fixture& fixture, const RunConfig& config);

/// A pair (x, y) of the sequence space with d(Tx, Ty) > k·d(x, y): x = 0,
/// y = (t, 0, ...) for the first t in 1/2, 1/20, 1/200, ... below (1 − k)/k
/// that verifies exactly. Throws std::invalid_argument unless 0 < k < 1.
std::optional<std::pair<Point, Point>> non_contraction_witness(const MetricSpace& space, const PiecewiseMap& T,
                                                               double k);

}  // namespace cfp
