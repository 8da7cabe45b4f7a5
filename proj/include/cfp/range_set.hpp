#pragma once

#include "cfp/metric.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfp {

class PiecewiseMap;

/// Finite union of intervals and isolated points, kept sorted, disjoint and
/// merged. `exact` is false when some component came from sampling.
struct RangeSet {
  std::vector<IntervalDomain> components;
  bool exact = true;
  std::vector<std::string> notes;

  bool empty() const { return components.empty(); }
  bool contains(const Rational& x) const;

  friend bool operator==(const RangeSet& a, const RangeSet& b) {
    return a.components == b.components && a.exact == b.exact;
  }
};

std::string to_string(const RangeSet& r);

/// Sorts, drops empty pieces and merges overlapping or touching intervals.
std::vector<IntervalDomain> normalize(std::vector<IntervalDomain> parts);

IntervalDomain intersect(const IntervalDomain& a, const IntervalDomain& b);
std::vector<IntervalDomain> set_intersection(const std::vector<IntervalDomain>& a,
                                             const std::vector<IntervalDomain>& b);
std::vector<IntervalDomain> set_complement(const std::vector<IntervalDomain>& a);
std::vector<IntervalDomain> set_difference(const std::vector<IntervalDomain>& a,
                                           const std::vector<IntervalDomain>& b);

/// A deterministic member of a nonempty interval: its closed lower end if
/// any, else the midpoint, else lower end + 1.
Rational representative(const IntervalDomain& d);

/// Image of the map over the given scalar domain (per coordinate for
/// coordinatewise maps). Affine pieces are imaged exactly with endpoint
/// closedness carried over; other pieces are sampled and mark the result
/// approximate.
RangeSet range_of(const PiecewiseMap& map, const std::vector<IntervalDomain>& domain);
/// Image over the map's own piece domains.
RangeSet range_of(const PiecewiseMap& map);
/// Image over the scalar domain of the space.
RangeSet range_of(const PiecewiseMap& map, const MetricSpace& space);

/// Closedness of the range relative to the ambient set: false iff some open
/// finite endpoint is itself an ambient point. nullopt for approximate ranges.
std::optional<bool> is_closed(const RangeSet& r, const std::vector<IntervalDomain>& within);
std::optional<bool> is_closed(const RangeSet& r, const IntervalDomain& within);

}  // namespace cfp
