#pragma once

#include "cfp/expr.hpp"
#include "cfp/metric.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cfp {

struct Piece {
  IntervalDomain domain;
  Expr body;
};

/// A selfmap given by ordered, pairwise disjoint (interval, expression)
/// pieces. On a sequence space it acts coordinatewise.
class PiecewiseMap {
 public:
  /// Throws DomainError on empty or overlapping piece domains.
  PiecewiseMap(std::string variable, std::vector<Piece> pieces, bool coordinatewise = false);

  /// x ↦ x on every component of the given space.
  static PiecewiseMap identity(const MetricSpace& space, std::string variable = "x");

  const std::string& variable() const { return variable_; }
  const std::vector<Piece>& pieces() const { return pieces_; }
  bool coordinatewise() const { return coordinatewise_; }
  PiecewiseMap with_coordinatewise(bool flag) const;

  /// Index of the piece whose domain contains x, if any.
  std::optional<std::size_t> piece_index(const Rational& x) const;

  Rational eval(const Rational& x) const;
  double eval(double x) const;

  /// out[i] = map(xs[i]) on doubles; throws DomainError when some xs[i] lies
  /// outside every piece.
  void eval_batch(std::span<const double> xs, std::span<double> out,
                  const simd::KernelTable& k = simd::active_kernels()) const;

  /// Every piece body is affine in the variable.
  bool all_affine() const;
  /// Every piece body is literally the variable.
  bool is_identity() const;

  /// Finite piece endpoints, sorted and deduplicated.
  std::vector<Rational> breakpoints() const;

  /// Limit of the map as x → b from the right (side > 0) or left (side < 0),
  /// evaluated exactly on the piece adjacent to b on that side.
  std::optional<Rational> one_sided_limit(const Rational& b, int side) const;

  friend bool operator==(const PiecewiseMap& a, const PiecewiseMap& b);

 private:
  std::string variable_;
  std::vector<Piece> pieces_;
  bool coordinatewise_;
  std::vector<Program> programs_;
};

/// Pretty-prints in the map-definition syntax: "piecewise x { [0, 1) -> x; }".
std::string to_string(const PiecewiseMap& m);
std::string domain_syntax(const IntervalDomain& d);

/// Applies the map to a point of the space (coordinatewise on SeqSpace).
Point eval_map(const PiecewiseMap& map, const Point& p);

/// Throws DomainError unless the pieces cover every point of the space.
void check_coverage(const PiecewiseMap& map, const MetricSpace& space);

inline constexpr double kDefaultPreimageTol = 1e-12;

/// Some x with |map(x) − y| ≤ tol on one coordinate. Among all solutions the
/// one closest to `prev` wins; without prev the smallest. A piece that is
/// constant at y contributes its point closest to prev (its midpoint without
/// prev; its lower end when unbounded).
std::optional<Rational> preimage_scalar(const PiecewiseMap& map, const Rational& y,
                                        const std::optional<Rational>& prev, double tol = kDefaultPreimageTol);

/// Coordinatewise preimage of a point.
std::optional<Point> preimage(const PiecewiseMap& map, const Point& y, const std::optional<Point>& prev,
                              double tol = kDefaultPreimageTol);

}  // namespace cfp
