#pragma once

#include "cfp/phi.hpp"
#include "cfp/range_set.hpp"
#include "cfp/report.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cfp {

/// A selfmap pair (f, T) bound to one space, plus an optional φ.
struct MapPair {
  MetricSpace space;
  PiecewiseMap f;
  PiecewiseMap T;
  std::optional<AlteringFunction> phi;
};

/// Checks coverage of both maps and that f and T map sampled points back
/// into the space; throws DomainError otherwise. Maps on a sequence space are
/// made coordinatewise.
MapPair bind_pair(const MetricSpace& space, const PiecewiseMap& f, const PiecewiseMap& T,
                  std::optional<AlteringFunction> phi = std::nullopt);

inline constexpr double kDefaultTol = 1e-9;
inline constexpr double kDefaultSeqTol = 1e-6;
inline constexpr std::size_t kDefaultHorizon = 100000;
inline constexpr std::size_t kDefaultResolution = 200;

/// Scalar sample points of the space used by the pair checks: the grid at
/// the given resolution plus every breakpoint of f and T inside the space
/// and its neighbours at ±1e-9.
std::vector<Rational> scalar_probe_points(const MapPair& pair, std::size_t resolution, bool* truncated = nullptr);

/// slack(x, y) = d(fx, fy) − φ(d(fx, fy)) − d(Tx, Ty) over grid pairs; pass
/// iff min slack ≥ −1e-9. Without φ only d(Tx, Ty) ≤ d(fx, fy) is testable:
/// a violation fails, otherwise the verdict is unknown.
CheckReport check_weakly_contractive(const MapPair& pair, std::size_t resolution);

/// d(Tx, Ty) ≤ ψ(d(fx, fy)) + 1e-9 over grid pairs, after checking ψ ∈ Φ and
/// ψ(t) < t on samples t > 0.
CheckReport check_boyd_wong(const MapPair& pair, const AlteringFunction& psi, std::size_t resolution);

/// Points with d(fx, Tx) ≤ tol: exact roots for affine piece pairs, grid
/// points and bisection refinements otherwise. A whole interval of
/// coincidences contributes its grid points and closed ends.
std::vector<Point> find_coincidence_points(const MapPair& pair, std::size_t resolution, double tol);

/// Scalar coincidences of the coordinate maps (the points themselves for an
/// interval space).
std::vector<Rational> scalar_coincidences(const MapPair& pair, std::size_t resolution, double tol);

/// The point (r) of an interval space, or the constant vector (r, ..., r).
Point lift_scalar(const MetricSpace& space, const Rational& r);

CheckReport check_weak_compatibility(const MapPair& pair, double tol, std::size_t resolution = kDefaultResolution);

/// Sequences x_n used as (E.A) witnesses.
struct SequenceDescriptor {
  enum class Kind { ExplicitFormula, Constant, Recorded };
  Kind kind = Kind::Constant;
  Point base;                   // explicit: x_n = base + direction / n
  Point direction;
  std::size_t first_index = 1;  // explicit: n starts here
  Point constant;               // constant: x_n = constant
  std::vector<Point> recorded;  // recorded: x_n = recorded[min(n, size − 1)]
  Point limit;                  // common limit of f x_n and T x_n

  Point term(std::size_t n) const;
  std::string describe() const;

  static SequenceDescriptor explicit_formula(Point base, Point direction, std::size_t first_index, Point limit);
  static SequenceDescriptor constant_at(Point c, Point limit);

  friend bool operator==(const SequenceDescriptor&, const SequenceDescriptor&) = default;
};

std::string to_string(SequenceDescriptor::Kind k);

struct EaSearch {
  std::optional<SequenceDescriptor> witness;
  /// Smallest d(f x, T x) (or one-sided limit gap) seen by any strategy.
  Rational infimum = 0;
  std::string strategy;
  CheckReport report;
};

/// Best-effort search for a property-(E.A) sequence: approaches to interior
/// breakpoints, then coincidence points, then grid descent, then approaches
/// to the ends of the space.
EaSearch search_ea_witness(const MapPair& pair, double tol, std::size_t horizon,
                           std::size_t resolution = kDefaultResolution);

/// c_n = d(f T x_n, T f x_n) for n up to the horizon; pass iff the max over
/// the last 10% of terms is ≤ seq_tol.
CheckReport check_compatibility(const MapPair& pair, const SequenceDescriptor& witness, std::size_t horizon,
                                double seq_tol = kDefaultSeqTol);

/// T(X) ⊆ f(X), exactly when both ranges are exact. With reverse = true the
/// check is f(X) ⊆ T(X) and is named "range_inclusion_reverse".
CheckReport check_range_inclusion(const MapPair& pair, bool reverse = false, std::size_t resolution = kDefaultResolution,
                                  double tol = kDefaultTol);

/// Closedness of f(X) relative to the space.
CheckReport check_f_range_closed(const MapPair& pair);

/// Residual-style helpers shared with the solver.
Rational coincidence_gap(const MapPair& pair, const Point& x);

}  // namespace cfp
