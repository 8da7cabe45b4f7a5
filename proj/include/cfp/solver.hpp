#pragma once

#include "cfp/config.hpp"
#include "cfp/verifiers.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cfp {

enum class Termination {
  Converged,
  PreimageMissing,
  MaxIters,
  Diverged,
  Unverified,  // a coincidence was reached but the candidate failed verification
};

std::string to_string(Termination t);

struct IterationTrace {
  /// (x_n, y_n = T x_n). Very long orbits keep only the head and tail.
  std::vector<std::pair<Point, Point>> iterates;
  std::vector<Rational> distances;  // d(f x_n, f x_{n+1}); size == steps
  Termination termination = Termination::MaxIters;
  std::optional<Point> limit;             // converged(z)
  std::optional<std::size_t> failed_at;   // preimage_missing(at_step)
  std::size_t steps = 0;
  std::size_t dropped_iterates = 0;
};

enum class Route { Jungck, Ea, Direct };

std::string to_string(Route r);

struct EaRecord {
  SequenceDescriptor witness;
  Point z;
  std::optional<Point> u;
};

struct SolveResult {
  Route route = Route::Jungck;
  std::optional<Point> fixed_point;
  IterationTrace trace;
  std::optional<EaRecord> ea;
  std::optional<std::pair<Rational, Rational>> residuals;  // (d(fz, z), d(Tz, z))
  std::string failure;
  std::vector<std::string> notes;
};

inline constexpr std::size_t kJungckMaxIters = 10000;
inline constexpr std::size_t kDirectMaxIters = 1000000;

/// x_{n+1} = preimage(f, T x_n, prev = x_n) until d(f x, T x) ≤ tol; then the
/// weak-compatibility step at the coincidence and verification of z = f x.
SolveResult jungck_iterate(const MapPair& pair, const Point& x0, double tol, std::size_t max_iters = kJungckMaxIters);

/// d_{n+1} ≤ d_n + 1e-12 for every n, and the last distance ≤ tol when the
/// trace converged.
CheckReport check_monotone_decrease(const IterationTrace& trace, double tol);

/// z = witness limit, u = preimage(f, z), requires d(T u, z) ≤ tol, then the
/// weak-compatibility step f z = T z and verification.
SolveResult ea_solve(const MapPair& pair, const SequenceDescriptor& witness, double tol);

/// Picard iteration x_{n+1} = T x_n until d(T x, x) ≤ tol; the last iterate
/// is returned. Distances are d(x_n, x_{n+1}).
SolveResult direct_fixed_point(const MetricSpace& space, const PiecewiseMap& T,
                               const std::optional<AlteringFunction>& phi, const Point& x0, double tol,
                               std::size_t max_iters = kDirectMaxIters);

/// max(d(f z, z), d(T z, z)) ≤ tol.
CheckReport verify_common_fixed_point(const MapPair& pair, const Point& z, double tol);

/// Common fixed points among grid, coincidence and breakpoint candidates,
/// grouped into clusters of diameter ≤ 10·tol; pass iff at most one cluster.
CheckReport check_uniqueness(const MapPair& pair, std::size_t resolution, double tol);

/// Route selection. With no explicit route: Jungck when T(X) ⊆ f(X), then
/// the (E.A) route when a witness exists, then direct iteration when f is the
/// identity; the first route that yields a verified fixed point wins.
/// `notes` of the result explain skipped routes.
SolveResult solve(const MapPair& pair, std::optional<Route> route, const Point& x0, const RunConfig& config);

/// Inverse of to_string(Route); throws std::invalid_argument.
Route parse_route(const std::string& s);

}  // namespace cfp
