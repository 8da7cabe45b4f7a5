#pragma once

#include "cfp/errors.hpp"
#include "cfp/metric.hpp"
#include "cfp/piecewise.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace cfp {

/// Parses a single "piecewise <var> { <interval> -> <expr>; ... }" map.
/// Throws ParseError (syntax, overlapping pieces) with line/column.
PiecewiseMap parse_map(std::string_view text);

/// Contents of a map-definition file: one space, named maps, and optional
/// altering functions phi (weak contraction) and psi (Boyd–Wong bound).
struct MapFile {
  std::string space_name;
  MetricSpace space = MetricSpace::interval(IntervalDomain::closed(0, 1));
  std::map<std::string, PiecewiseMap> maps;
  std::optional<PiecewiseMap> phi;
  std::optional<PiecewiseMap> psi;

  const PiecewiseMap& map(const std::string& name) const;
};

/// Parses and binds a whole file: every map must cover the declared space
/// (coverage gaps are reported as ParseError at the map's position). Maps on
/// a sequence space are marked coordinatewise.
MapFile parse_map_file(std::string_view text);

/// Reads and parses a file from disk; I/O failures throw std::runtime_error.
MapFile load_map_file(const std::string& path);

/// Renders a MapFile back into the definition syntax.
std::string to_string(const MapFile& file);

}  // namespace cfp
