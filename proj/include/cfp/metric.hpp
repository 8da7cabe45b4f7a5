#pragma once

#include "cfp/errors.hpp"
#include "cfp/rational.hpp"

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace cfp {

/// An interval of the real line. A missing bound means infinity on that side;
/// an infinite side is never closed. lo == hi with both sides closed is an
/// isolated point.
struct IntervalDomain {
  std::optional<Rational> lo;
  std::optional<Rational> hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static IntervalDomain closed(Rational a, Rational b) { return {std::move(a), std::move(b), true, true}; }
  static IntervalDomain point(const Rational& a) { return {a, a, true, true}; }
  static IntervalDomain make(Rational a, bool a_closed, std::optional<Rational> b, bool b_closed);

  bool empty() const;
  bool contains(const Rational& x) const;
  bool contains(double x) const;
  bool bounded() const { return lo.has_value() && hi.has_value(); }
  bool is_point() const { return lo && hi && *lo == *hi && lo_closed && hi_closed; }

  friend bool operator==(const IntervalDomain&, const IntervalDomain&) = default;
};

std::string to_string(const IntervalDomain& d);

/// A point of a space: one coordinate for interval spaces, `dimension`
/// coordinates for the truncated sequence space.
struct Point {
  std::vector<Rational> coords;

  Point() = default;
  explicit Point(Rational scalar) : coords{std::move(scalar)} {}
  explicit Point(std::vector<Rational> c) : coords(std::move(c)) {}

  std::size_t size() const { return coords.size(); }
  const Rational& operator[](std::size_t i) const { return coords[i]; }
  Rational& operator[](std::size_t i) { return coords[i]; }
  const Rational& scalar() const;
  std::vector<double> approx() const;

  friend bool operator==(const Point&, const Point&) = default;
};

Point broadcast(const Rational& value, std::size_t dimension);
std::string to_string(const Point& p);

/// Subset of the real line made of finitely many disjoint intervals. Used
/// for interval spaces such as {0} ∪ [1/3, 1].
struct IntervalSpace {
  std::vector<IntervalDomain> components;
  friend bool operator==(const IntervalSpace&, const IntervalSpace&) = default;
};

/// Finite truncation of the sequence space with the sup metric.
struct SeqSpace {
  std::size_t dimension = 8;
  IntervalDomain coordinate_domain;
  friend bool operator==(const SeqSpace&, const SeqSpace&) = default;
};

class MetricSpace {
 public:
  static constexpr std::size_t kMaxSeqDimension = 64;

  static MetricSpace interval(IntervalDomain d);
  static MetricSpace interval_union(std::vector<IntervalDomain> components);
  static MetricSpace seq(std::size_t dimension, IntervalDomain coordinate_domain);

  bool is_seq() const { return std::holds_alternative<SeqSpace>(kind_); }
  std::size_t dimension() const;
  /// Components of the scalar domain (the coordinate domain for SeqSpace).
  const std::vector<IntervalDomain>& scalar_components() const { return scalar_components_; }
  const SeqSpace& seq_space() const { return std::get<SeqSpace>(kind_); }

  /// Same space with a different truncation dimension (SeqSpace only).
  MetricSpace with_dimension(std::size_t dimension) const;

  bool contains_scalar(const Rational& x) const;
  bool contains_scalar(double x) const;
  bool bounded() const;

  friend bool operator==(const MetricSpace&, const MetricSpace&) = default;

 private:
  std::variant<IntervalSpace, SeqSpace> kind_;
  std::vector<IntervalDomain> scalar_components_;
};

std::string to_string(const MetricSpace& s);

inline constexpr double kOpenEndpointNudge = 1e-9;
inline constexpr long kDefaultSpan = 10;
inline constexpr std::size_t kMaxGridPoints = 100000;

Rational open_nudge();

Rational distance(const MetricSpace& space, const Point& p, const Point& q);
double distance_approx(const MetricSpace& space, const Point& p, const Point& q);
bool contains(const MetricSpace& space, const Point& p);

struct Grid {
  std::vector<Point> points;
  bool truncated = false;     // unbounded side sampled over [lo, lo + 10]
  bool low_discrepancy = false;
};

/// Deterministic sample of the space. Closed endpoints are included, open
/// endpoints are replaced by endpoint ∓ 1e-9.
Grid sample_grid(const MetricSpace& space, std::size_t resolution);

/// Deterministic sample of a scalar domain (one space component).
std::vector<Rational> sample_interval(const IntervalDomain& d, std::size_t resolution, bool* truncated = nullptr);

/// The sampled window of a possibly unbounded domain.
IntervalDomain sampling_window(const IntervalDomain& d);

struct PairSample {
  std::vector<std::vector<double>> first;
  std::vector<std::vector<double>> second;
  bool truncated = false;
};

/// Deterministic pairs of points of a SeqSpace: a few structured anchors
/// (the lower corner against axis and diagonal points) followed by a
/// low-discrepancy sequence in the product space. The sample for count n is
/// a prefix of the sample for any larger count.
PairSample sample_pairs(const MetricSpace& space, std::size_t count);

}  // namespace cfp
