#pragma once

#include "cfp/piecewise.hpp"
#include "cfp/report.hpp"

namespace cfp {

/// A candidate altering distance function φ: [0, ∞) → [0, ∞). Construction
/// only checks that the pieces cover [0, ∞); membership in Φ is a separate,
/// reported check.
class AlteringFunction {
 public:
  /// Throws DomainError when the pieces leave part of [0, ∞) uncovered.
  explicit AlteringFunction(PiecewiseMap map);

  const PiecewiseMap& map() const { return map_; }
  Rational operator()(const Rational& t) const { return map_.eval(t); }
  double operator()(double t) const { return map_.eval(t); }
  void eval_batch(std::span<const double> ts, std::span<double> out,
                  const simd::KernelTable& k = simd::active_kernels()) const {
    map_.eval_batch(ts, out, k);
  }

  friend bool operator==(const AlteringFunction&, const AlteringFunction&) = default;

 private:
  PiecewiseMap map_;
};

inline constexpr double kContinuityTol = 1e-9;
inline constexpr double kBegAbbasTMax = 1e6;
inline constexpr double kBegAbbasGrowth = 1e3;

/// Sample points of [0, ∞) used by the φ checks: a uniform grid on [0, 10],
/// the integers up to 10, the piece endpoints and a 1-2-5 ladder up to t_max.
std::vector<Rational> phi_sample_points(const AlteringFunction& phi, std::size_t resolution, double t_max);

/// φ(0) = 0 exactly, φ(t) > 0 on samples t > 0, and one-sided limits agree
/// with the value at every piece boundary.
CheckReport check_phi_membership(const AlteringFunction& phi, std::size_t resolution);

/// Sampled monotone nondecreasing on [0, t_max] and φ(t_max) ≥ growth.
/// A monotonicity failure carries (t1 < t2, φ(t1) > φ(t2)).
CheckReport check_beg_abbas_phi(const AlteringFunction& phi, std::size_t resolution, double t_max = kBegAbbasTMax,
                                double growth = kBegAbbasGrowth);

}  // namespace cfp
