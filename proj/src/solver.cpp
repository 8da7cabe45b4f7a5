#include "cfp/solver.hpp"

#include <algorithm>

namespace cfp {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::Converged:
      return "converged";
    case Termination::PreimageMissing:
      return "preimage_missing";
    case Termination::MaxIters:
      return "max_iters";
    case Termination::Diverged:
      return "diverged";
    case Termination::Unverified:
      return "unverified";
  }
  return "max_iters";
}

std::string to_string(Route r) {
  switch (r) {
    case Route::Jungck:
      return "jungck";
    case Route::Ea:
      return "ea";
    case Route::Direct:
      return "direct";
  }
  return "jungck";
}

namespace {

constexpr std::size_t kKeepIterates = 1000;
constexpr double kDivergenceBound = 1e12;

void record(IterationTrace& t, Point x, Point y) {
  t.iterates.emplace_back(std::move(x), std::move(y));
  if (t.iterates.size() > 2 * kKeepIterates) {
    t.iterates.erase(t.iterates.begin() + kKeepIterates);
    ++t.dropped_iterates;
  }
}

Point compact_point(Point p) {
  for (auto& c : p.coords) c = compact(c);
  return p;
}

bool diverged(const Point& p) {
  const Rational bound = from_double(kDivergenceBound);
  return std::any_of(p.coords.begin(), p.coords.end(), [&](const Rational& c) { return abs(c) > bound; });
}

// Weak-compatibility step at a coincidence u followed by verification of
// z = f u. Fills residuals and the fixed point when everything holds.
void finish_at_coincidence(const MapPair& pair, const Point& u, double tol, SolveResult& out) {
  const Rational rtol = from_double(tol);
  Point z = eval_map(pair.f, u);
  Point tfu = eval_map(pair.T, z);
  Point ftu = eval_map(pair.f, eval_map(pair.T, u));
  if (distance(pair.space, tfu, ftu) > rtol) {
    out.trace.termination = Termination::Unverified;
    out.failure = "weak compatibility fails at the coincidence " + to_string(u) + ": T(f u) = " + to_string(tfu) +
                  ", f(T u) = " + to_string(ftu);
    return;
  }
  Rational rf = distance(pair.space, eval_map(pair.f, z), z);
  Rational rt = distance(pair.space, eval_map(pair.T, z), z);
  out.residuals = std::make_pair(rf, rt);
  if (rf <= rtol && rt <= rtol) {
    out.fixed_point = z;
    out.trace.termination = Termination::Converged;
    out.trace.limit = z;
  } else {
    out.trace.termination = Termination::Unverified;
    out.failure = "candidate " + to_string(z) + " is not a common fixed point";
  }
}

}  // namespace

SolveResult jungck_iterate(const MapPair& pair, const Point& x0, double tol, std::size_t max_iters) {
  if (!contains(pair.space, x0)) throw DomainError("x0 = " + to_string(x0) + " is not in the space");
  SolveResult out;
  out.route = Route::Jungck;
  const Rational rtol = from_double(tol);
  IterationTrace& tr = out.trace;
  Point x = x0;
  for (std::size_t it = 0;; ++it) {
    Point fx = eval_map(pair.f, x), tx = eval_map(pair.T, x);
    record(tr, x, tx);
    Rational gap = distance(pair.space, fx, tx);
    if (gap <= rtol) {
      // x_{n+1} = x_n solves f x_{n+1} = T x_n up to the gap.
      if (!tr.distances.empty()) tr.distances.push_back(gap);
      tr.steps = tr.distances.size();
      finish_at_coincidence(pair, x, tol, out);
      return out;
    }
    if (it >= max_iters) {
      tr.termination = Termination::MaxIters;
      out.failure = "no coincidence within " + std::to_string(max_iters) + " iterations";
      break;
    }
    auto next = preimage(pair.f, tx, x);
    if (!next) {
      tr.termination = Termination::PreimageMissing;
      tr.failed_at = tr.distances.size();
      out.failure = "T x_n = " + to_string(tx) + " has no preimage under f (T(X) is not contained in f(X))";
      break;
    }
    tr.distances.push_back(distance(pair.space, fx, eval_map(pair.f, *next)));
    x = compact_point(std::move(*next));
    if (diverged(x)) {
      tr.termination = Termination::Diverged;
      out.failure = "orbit left every bounded window";
      break;
    }
  }
  tr.steps = tr.distances.size();
  return out;
}

CheckReport check_monotone_decrease(const IterationTrace& trace, double tol) {
  CheckReport r;
  r.check_name = "monotone_decrease";
  r.verdict = Verdict::Pass;
  const auto& d = trace.distances;
  if (d.size() < 2) r.notes.push_back("fewer than two distances");
  const Rational slack = from_double(1e-12);
  std::optional<Rational> worst;
  for (std::size_t n = 0; n + 1 < d.size(); ++n) {
    Rational s = d[n] - d[n + 1];
    if (!worst || s < *worst) worst = s;
    if (d[n + 1] > d[n] + slack && r.verdict == Verdict::Pass) {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(Witness{"distance increased", {}}
                                .add("n", Rational(static_cast<long>(n)))
                                .add("d_n", d[n])
                                .add("d_n+1", d[n + 1]));
    }
  }
  if (worst) r.margin = to_double(*worst);
  if (trace.termination == Termination::Converged && !d.empty() && d.back() > from_double(tol)) {
    r.verdict = Verdict::Fail;
    r.witnesses.push_back(Witness{"final distance above tol", {}}.add("d_last", d.back()));
  }
  return r;
}

SolveResult ea_solve(const MapPair& pair, const SequenceDescriptor& witness, double tol) {
  SolveResult out;
  out.route = Route::Ea;
  const Rational rtol = from_double(tol);
  const Point& z = witness.limit;
  out.ea = EaRecord{witness, z, std::nullopt};
  out.trace.termination = Termination::Unverified;
  if (!contains(pair.space, z)) {
    out.failure = "witness limit " + to_string(z) + " is not in the space";
    return out;
  }
  const RangeSet fx = range_of(pair.f, pair.space);
  const auto closed = is_closed(fx, pair.space.scalar_components());
  auto u = preimage(pair.f, z, std::nullopt, tol);
  if (!u) {
    out.failure = closed && !*closed ? "f(X) not closed at limit " + to_string(z)
                                     : "limit " + to_string(z) + " has no preimage under f";
    return out;
  }
  if (closed && !*closed) out.notes.push_back("f(X) is not closed, but the limit has a preimage");
  if (!closed) out.notes.push_back("closedness of f(X) unknown (approximate range)");
  out.ea->u = *u;
  Point tu = eval_map(pair.T, *u);
  Rational r = distance(pair.space, tu, z);
  if (r > rtol) {
    out.failure = "d(T u, z) = " + display_string(r) + " exceeds tol";
    return out;
  }
  finish_at_coincidence(pair, *u, tol, out);
  if (out.fixed_point) out.trace.steps = 0;
  return out;
}

SolveResult direct_fixed_point(const MetricSpace& space, const PiecewiseMap& T,
                               const std::optional<AlteringFunction>& phi, const Point& x0, double tol,
                               std::size_t max_iters) {
  if (!contains(space, x0)) throw DomainError("x0 = " + to_string(x0) + " is not in the space");
  SolveResult out;
  out.route = Route::Direct;
  if (!phi) out.notes.push_back("no phi supplied");
  const PiecewiseMap map = T.with_coordinatewise(space.is_seq());
  const Rational rtol = from_double(tol);
  IterationTrace& tr = out.trace;
  Point x = x0;
  for (std::size_t it = 0;; ++it) {
    Point tx = eval_map(map, x);
    record(tr, x, tx);
    Rational d = distance(space, x, tx);
    if (d <= rtol) {
      if (!tr.distances.empty()) tr.distances.push_back(d);
      tr.steps = tr.distances.size();
      Point z = compact_point(tx);
      Rational rt = distance(space, eval_map(map, z), z);
      out.residuals = std::make_pair(Rational(0), rt);
      if (rt <= rtol) {
        out.fixed_point = z;
        tr.limit = z;
        tr.termination = Termination::Converged;
      } else {
        tr.termination = Termination::Unverified;
        out.failure = "residual d(Tz, z) = " + display_string(rt) + " exceeds tol";
      }
      return out;
    }
    if (it >= max_iters) {
      tr.termination = Termination::MaxIters;
      out.failure = "no convergence within " + std::to_string(max_iters) + " iterations";
      break;
    }
    tr.distances.push_back(d);
    x = compact_point(std::move(tx));
    if (diverged(x)) {
      tr.termination = Termination::Diverged;
      out.failure = "orbit left every bounded window";
      break;
    }
  }
  tr.steps = tr.distances.size();
  return out;
}

CheckReport verify_common_fixed_point(const MapPair& pair, const Point& z, double tol) {
  CheckReport r;
  r.check_name = "common_fixed_point";
  if (!contains(pair.space, z)) {
    r.verdict = Verdict::Fail;
    r.witnesses.push_back(Witness{"not in the space", {}}.add("z", z));
    return r;
  }
  Point fz = eval_map(pair.f, z), tz = eval_map(pair.T, z);
  Rational rf = distance(pair.space, fz, z), rt = distance(pair.space, tz, z);
  Rational worst = std::max(rf, rt);
  r.margin = -to_double(worst);
  Witness w{"residuals", {}};
  w.add("z", z).add("f(z)", fz).add("T(z)", tz).add("d(fz,z)", rf).add("d(Tz,z)", rt);
  r.witnesses.push_back(std::move(w));
  r.verdict = worst <= from_double(tol) ? Verdict::Pass : Verdict::Fail;
  return r;
}

CheckReport check_uniqueness(const MapPair& pair, std::size_t resolution, double tol) {
  CheckReport r;
  r.check_name = "uniqueness";
  std::vector<Rational> cand = scalar_probe_points(pair, resolution);
  for (const auto& c : scalar_coincidences(pair, resolution, tol)) cand.push_back(c);
  std::sort(cand.begin(), cand.end());
  cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
  const Rational rtol = from_double(tol), width = 10 * rtol;
  std::vector<std::vector<Rational>> clusters;
  for (const auto& z : cand) {
    if (!pair.space.contains_scalar(z)) continue;
    if (abs(pair.f.eval(z) - z) > rtol || abs(pair.T.eval(z) - z) > rtol) continue;
    if (clusters.empty() || z - clusters.back().front() > width) clusters.emplace_back();
    clusters.back().push_back(z);
  }
  r.notes.push_back(std::to_string(clusters.size()) + " cluster(s) of common fixed points" +
                    (pair.space.is_seq() ? " per coordinate" : ""));
  for (std::size_t i = 0; i < clusters.size() && i < 3; ++i)
    r.witnesses.push_back(Witness{"cluster", {}}.add("z", lift_scalar(pair.space, clusters[i].front())));
  r.verdict = clusters.size() <= 1 ? Verdict::Pass : Verdict::Fail;
  return r;
}

Route parse_route(const std::string& s) {
  if (s == "jungck") return Route::Jungck;
  if (s == "ea") return Route::Ea;
  if (s == "direct") return Route::Direct;
  throw std::invalid_argument("unknown route '" + s + "'");
}

SolveResult solve(const MapPair& pair, std::optional<Route> route, const Point& x0, const RunConfig& config) {
  auto run_jungck = [&] { return jungck_iterate(pair, x0, config.tol, config.max_iters.value_or(kJungckMaxIters)); };
  auto run_direct = [&] {
    return direct_fixed_point(pair.space, pair.T, pair.phi, x0, config.tol, config.max_iters.value_or(kDirectMaxIters));
  };
  auto run_ea = [&](const EaSearch& s) {
    if (!s.witness) {
      SolveResult r;
      r.route = Route::Ea;
      r.failure = "no (E.A) witness found; " + s.report.notes.back();
      return r;
    }
    return ea_solve(pair, *s.witness, config.tol);
  };

  if (route == Route::Jungck) return run_jungck();
  if (route == Route::Ea) return run_ea(search_ea_witness(pair, config.tol, config.horizon, config.resolution));
  if (route == Route::Direct) {
    if (!pair.f.is_identity()) {
      SolveResult r;
      r.route = Route::Direct;
      r.failure = "direct route needs f = identity";
      return r;
    }
    return run_direct();
  }

  std::vector<std::string> skipped;
  std::optional<SolveResult> last;
  if (check_range_inclusion(pair, false, config.resolution, config.tol).passed()) {
    SolveResult r = run_jungck();
    if (r.fixed_point) return r;
    skipped.push_back("jungck: " + r.failure);
    last = std::move(r);
  } else {
    skipped.push_back("jungck skipped: T(X) is not contained in f(X)");
  }
  EaSearch s = search_ea_witness(pair, config.tol, config.horizon, config.resolution);
  if (s.witness) {
    SolveResult r = run_ea(s);
    if (r.fixed_point) {
      r.notes.insert(r.notes.begin(), skipped.begin(), skipped.end());
      return r;
    }
    skipped.push_back("ea: " + r.failure);
    last = std::move(r);
  } else {
    skipped.push_back("ea skipped: " + s.report.notes.back());
  }
  if (pair.f.is_identity()) {
    SolveResult r = run_direct();
    if (r.fixed_point) {
      r.notes.insert(r.notes.begin(), skipped.begin(), skipped.end());
      return r;
    }
    skipped.push_back("direct: " + r.failure);
    last = std::move(r);
  } else {
    skipped.push_back("direct skipped: f is not the identity");
  }
  SolveResult r = last ? std::move(*last) : SolveResult{};
  if (!last) {
    r.failure = "no route applicable";
    for (const auto& why : skipped) r.failure += (&why == &skipped.front() ? ": " : "; ") + why;
  }
  r.notes = skipped;
  return r;
}

}  // namespace cfp
