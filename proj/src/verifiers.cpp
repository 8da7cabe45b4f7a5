#include "cfp/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfp {

namespace {

void sort_unique(std::vector<Rational>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

constexpr double kSlackTol = 1e-9;
// Pairs whose floating slack is within this of zero are re-evaluated exactly.
constexpr double kCandidateBand = 1e-9;
constexpr std::size_t kMaxCandidates = 20000;
constexpr std::size_t kMaxSeqPairs = 1000000;

enum class BoundKind { Weak, BoydWong, NoPhi };

struct Slack {
  double value;
  std::size_t i, j;
};

void keep_lowest(std::vector<Slack>& c) {
  if (c.size() <= kMaxCandidates) return;
  std::nth_element(c.begin(), c.begin() + kMaxCandidates, c.end(),
                   [](const Slack& a, const Slack& b) { return a.value < b.value; });
  c.resize(kMaxCandidates);
}

// bound(dF) − dT for one of the three inequality forms.
Rational exact_slack(BoundKind kind, const PiecewiseMap* g, const Rational& dF, const Rational& dT) {
  switch (kind) {
    case BoundKind::Weak:
      return dF - g->eval(dF) - dT;
    case BoundKind::BoydWong:
      return g->eval(dF) - dT;
    case BoundKind::NoPhi:
      return dF - dT;
  }
  return 0;
}

void float_slack(BoundKind kind, const PiecewiseMap* g, std::span<const double> dF, std::span<const double> dT,
                 std::span<double> gbuf, std::span<double> out) {
  const auto& k = simd::active_kernels();
  const std::size_t n = dF.size();
  switch (kind) {
    case BoundKind::Weak:
      g->eval_batch(dF, gbuf, k);
      k.sub(dF.data(), gbuf.data(), out.data(), n);
      k.sub(out.data(), dT.data(), out.data(), n);
      break;
    case BoundKind::BoydWong:
      g->eval_batch(dF, gbuf, k);
      k.sub(gbuf.data(), dT.data(), out.data(), n);
      break;
    case BoundKind::NoPhi:
      k.sub(dF.data(), dT.data(), out.data(), n);
      break;
  }
}

struct PairScan {
  std::optional<Rational> min_exact;
  double min_float = std::numeric_limits<double>::infinity();
  Witness worst;
  bool truncated = false;
  std::size_t pairs = 0;
};

// All unordered grid pairs (including x = y) of an interval space; f and T
// are evaluated exactly once per point, only the bound runs in floating point.
PairScan scan_interval_pairs(const MapPair& pair, std::size_t resolution, BoundKind kind, const PiecewiseMap* g) {
  PairScan out;
  const auto xs = scalar_probe_points(pair, resolution, &out.truncated);
  const std::size_t n = xs.size();
  std::vector<Rational> F(n), T(n);
  std::vector<double> fd(n), td(n);
  for (std::size_t i = 0; i < n; ++i) {
    F[i] = pair.f.eval(xs[i]);
    T[i] = pair.T.eval(xs[i]);
    fd[i] = to_double(F[i]);
    td[i] = to_double(T[i]);
  }
  const auto& k = simd::active_kernels();
  std::vector<double> dF(n), dT(n), gbuf(n), s(n);
  std::vector<Slack> cand;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t m = n - i;
    k.abs_diff_scalar(fd.data() + i, fd[i], dF.data(), m);
    k.abs_diff_scalar(td.data() + i, td[i], dT.data(), m);
    float_slack(kind, g, std::span<const double>(dF.data(), m), std::span<const double>(dT.data(), m),
                std::span<double>(gbuf.data(), m), std::span<double>(s.data(), m));
    out.pairs += m;
    for (std::size_t j = 0; j < m; ++j) {
      if (s[j] <= kCandidateBand) {
        cand.push_back({s[j], i, i + j});
      } else {
        out.min_float = std::min(out.min_float, s[j]);
      }
    }
    keep_lowest(cand);
  }
  for (const auto& c : cand) {
    Rational dFx = abs(F[c.i] - F[c.j]);
    Rational dTx = abs(T[c.i] - T[c.j]);
    Rational v = exact_slack(kind, g, dFx, dTx);
    if (!out.min_exact || v < *out.min_exact) {
      out.min_exact = v;
      out.worst = Witness{"worst pair", {}};
      out.worst.add("x", xs[c.i]).add("y", xs[c.j]);
      out.worst.add("f(x)", F[c.i]).add("f(y)", F[c.j]).add("T(x)", T[c.i]).add("T(y)", T[c.j]);
      out.worst.add("slack", v);
    }
  }
  return out;
}

PairScan scan_seq_pairs(const MapPair& pair, std::size_t resolution, BoundKind kind, const PiecewiseMap* g) {
  PairScan out;
  const std::size_t count = std::min(kMaxSeqPairs, resolution * resolution);
  const PairSample ps = sample_pairs(pair.space, count);
  out.truncated = ps.truncated;
  const std::size_t dim = pair.space.dimension();
  const std::size_t n = ps.first.size();
  std::vector<double> a(n * dim), b(n * dim);
  for (std::size_t p = 0; p < n; ++p) {
    std::copy(ps.first[p].begin(), ps.first[p].end(), a.begin() + p * dim);
    std::copy(ps.second[p].begin(), ps.second[p].end(), b.begin() + p * dim);
  }
  std::vector<double> fa(n * dim), fb(n * dim), ta(n * dim), tb(n * dim);
  pair.f.eval_batch(a, fa);
  pair.f.eval_batch(b, fb);
  pair.T.eval_batch(a, ta);
  pair.T.eval_batch(b, tb);
  const auto& k = simd::active_kernels();
  std::vector<double> dF(n), dT(n), gbuf(n), s(n);
  for (std::size_t p = 0; p < n; ++p) {
    dF[p] = k.max_abs_diff(fa.data() + p * dim, fb.data() + p * dim, dim);
    dT[p] = k.max_abs_diff(ta.data() + p * dim, tb.data() + p * dim, dim);
  }
  float_slack(kind, g, dF, dT, gbuf, s);
  out.pairs = n;
  std::vector<Slack> cand;
  for (std::size_t p = 0; p < n; ++p) {
    if (s[p] <= kCandidateBand) {
      cand.push_back({s[p], p, p});
    } else {
      out.min_float = std::min(out.min_float, s[p]);
    }
  }
  keep_lowest(cand);
  auto exact_point = [](const std::vector<double>& v) {
    std::vector<Rational> c;
    c.reserve(v.size());
    for (double d : v) c.push_back(from_double(d));
    return Point(std::move(c));
  };
  for (const auto& c : cand) {
    Point x = exact_point(ps.first[c.i]), y = exact_point(ps.second[c.i]);
    Point fx = eval_map(pair.f, x), fy = eval_map(pair.f, y), tx = eval_map(pair.T, x), ty = eval_map(pair.T, y);
    Rational v = exact_slack(kind, g, distance(pair.space, fx, fy), distance(pair.space, tx, ty));
    if (!out.min_exact || v < *out.min_exact) {
      out.min_exact = v;
      out.worst = Witness{"worst pair", {}};
      out.worst.add("x", x).add("y", y).add("f(x)", fx).add("f(y)", fy).add("T(x)", tx).add("T(y)", ty);
      out.worst.add("slack", v);
    }
  }
  return out;
}

PairScan scan_pairs(const MapPair& pair, std::size_t resolution, BoundKind kind, const PiecewiseMap* g) {
  return pair.space.is_seq() ? scan_seq_pairs(pair, resolution, kind, g)
                             : scan_interval_pairs(pair, resolution, kind, g);
}

double scan_margin(const PairScan& s) {
  double m = s.min_float;
  if (s.min_exact) m = std::min(m, to_double(*s.min_exact));
  return m;
}

void add_sampling_notes(CheckReport& r, const MapPair& pair, const PairScan& s) {
  r.notes.push_back(std::to_string(s.pairs) + (pair.space.is_seq() ? " deterministic sample pairs" : " grid pairs"));
  if (s.truncated) r.notes.push_back("domain truncated to [lo, lo + 10] for sampling");
}

}  // namespace

Point lift_scalar(const MetricSpace& space, const Rational& r) {
  return space.is_seq() ? broadcast(r, space.dimension()) : Point(r);
}

MapPair bind_pair(const MetricSpace& space, const PiecewiseMap& f, const PiecewiseMap& T,
                  std::optional<AlteringFunction> phi) {
  check_coverage(f, space);
  check_coverage(T, space);
  MapPair pair{space, f.with_coordinatewise(space.is_seq()), T.with_coordinatewise(space.is_seq()), std::move(phi)};
  for (const auto& x : scalar_probe_points(pair, kDefaultResolution)) {
    for (const auto* m : {&pair.f, &pair.T}) {
      Rational y = m->eval(x);
      if (!space.contains_scalar(y))
        throw DomainError(std::string(m == &pair.f ? "f" : "T") + " maps " + display_string(x) + " to " +
                          display_string(y) + ", outside the space");
    }
  }
  return pair;
}

std::vector<Rational> scalar_probe_points(const MapPair& pair, std::size_t resolution, bool* truncated) {
  std::vector<Rational> xs;
  bool trunc = false;
  for (const auto& c : pair.space.scalar_components()) {
    bool t = false;
    auto s = sample_interval(c, resolution, &t);
    trunc = trunc || t;
    xs.insert(xs.end(), s.begin(), s.end());
  }
  const Rational nudge = open_nudge();
  for (const auto* m : {&pair.f, &pair.T}) {
    for (const auto& b : m->breakpoints()) {
      for (const Rational& x : {Rational(b - nudge), b, Rational(b + nudge)})
        if (pair.space.contains_scalar(x)) xs.push_back(x);
    }
  }
  sort_unique(xs);
  if (truncated) *truncated = trunc;
  return xs;
}

CheckReport check_weakly_contractive(const MapPair& pair, std::size_t resolution) {
  CheckReport r;
  r.check_name = "weakly_contractive";
  if (!pair.phi) {
    PairScan s = scan_pairs(pair, resolution, BoundKind::NoPhi, nullptr);
    r.margin = scan_margin(s);
    add_sampling_notes(r, pair, s);
    if (s.min_exact && *s.min_exact < 0) {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(s.worst);
      r.notes.push_back("no phi given; d(Tx, Ty) > d(fx, fy) rules out every phi");
    } else {
      r.verdict = Verdict::Unknown;
      r.notes.push_back("no phi given; only d(Tx, Ty) <= d(fx, fy) was tested");
    }
    return r;
  }
  if (!check_phi_membership(*pair.phi, resolution).passed()) {
    r.verdict = Verdict::Unknown;
    r.notes.push_back("precondition: phi is not in the altering class");
    return r;
  }
  PairScan s = scan_pairs(pair, resolution, BoundKind::Weak, &pair.phi->map());
  r.margin = scan_margin(s);
  add_sampling_notes(r, pair, s);
  if (r.margin >= -kSlackTol) {
    r.verdict = Verdict::Pass;
  } else {
    r.verdict = Verdict::Fail;
    r.witnesses.push_back(s.worst);
  }
  return r;
}

CheckReport check_boyd_wong(const MapPair& pair, const AlteringFunction& psi, std::size_t resolution) {
  CheckReport r;
  r.check_name = "boyd_wong";
  if (!check_phi_membership(psi, resolution).passed()) {
    r.verdict = Verdict::Fail;
    r.notes.push_back("precondition failed: psi is not in the altering class");
    return r;
  }
  for (const auto& t : phi_sample_points(psi, resolution, kBegAbbasTMax)) {
    if (t == 0) continue;
    Rational v = psi(t);
    if (v >= t) {
      r.verdict = Verdict::Fail;
      r.margin = to_double(t - v);
      r.witnesses.push_back(Witness{"psi(t) >= t", {}}.add("t", t).add("psi(t)", v));
      r.notes.push_back("precondition failed: psi(t) < t violated");
      return r;
    }
  }
  PairScan s = scan_pairs(pair, resolution, BoundKind::BoydWong, &psi.map());
  r.margin = scan_margin(s);
  add_sampling_notes(r, pair, s);
  if (r.margin >= -kSlackTol) {
    r.verdict = Verdict::Pass;
  } else {
    r.verdict = Verdict::Fail;
    r.witnesses.push_back(s.worst);
  }
  return r;
}

namespace {

constexpr std::size_t kRootScan = 1000;
constexpr int kRootBisections = 200;

// Roots of f − T on one shared piece domain when a body is not affine.
void nonaffine_roots(const Expr& fb, const Expr& tb, const IntervalDomain& d, std::size_t resolution, double tol,
                     std::vector<Rational>& out) {
  auto xs = sample_interval(d, std::max(resolution, kRootScan));
  std::vector<double> g(xs.size());
  std::vector<bool> ok(xs.size(), true);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    try {
      Rational v = fb.eval(xs[i]) - tb.eval(xs[i]);
      if (abs(v) <= from_double(tol)) out.push_back(xs[i]);
      g[i] = to_double(v);
    } catch (const DomainError&) {
      ok[i] = false;
    }
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if (!ok[i] || !ok[i + 1] || g[i] == 0.0 || g[i + 1] == 0.0) continue;
    if (std::signbit(g[i]) == std::signbit(g[i + 1])) continue;
    double lo = to_double(xs[i]), hi = to_double(xs[i + 1]), glo = g[i];
    for (int it = 0; it < kRootBisections && hi - lo > 0; ++it) {
      double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      double gm = fb.eval(mid) - tb.eval(mid);
      if (gm == 0.0) {
        lo = hi = mid;
        break;
      }
      if (std::signbit(gm) == std::signbit(glo)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    for (double c : {lo, hi}) {
      Rational x = from_double(c);
      if (!d.contains(x)) continue;
      try {
        if (abs(fb.eval(x) - tb.eval(x)) <= from_double(tol)) {
          out.push_back(x);
          break;
        }
      } catch (const DomainError&) {
      }
    }
  }
}

}  // namespace

std::vector<Rational> scalar_coincidences(const MapPair& pair, std::size_t resolution, double tol) {
  std::vector<Rational> out;
  for (const auto& comp : pair.space.scalar_components()) {
    for (const auto& pf : pair.f.pieces()) {
      IntervalDomain a = intersect(comp, pf.domain);
      if (a.empty()) continue;
      for (const auto& pt : pair.T.pieces()) {
        IntervalDomain d = intersect(a, pt.domain);
        if (d.empty()) continue;
        auto af = as_affine(pf.body), at = as_affine(pt.body);
        if (af && at) {
          Rational slope = af->slope - at->slope, rhs = at->intercept - af->intercept;
          if (slope == 0) {
            if (abs(rhs) <= from_double(tol)) {
              auto xs = sample_interval(d, resolution);
              out.insert(out.end(), xs.begin(), xs.end());
              if (d.lo && d.lo_closed) out.push_back(*d.lo);
              if (d.hi && d.hi_closed) out.push_back(*d.hi);
            }
          } else {
            Rational x = rhs / slope;
            if (d.contains(x)) out.push_back(x);
          }
        } else {
          nonaffine_roots(pf.body, pt.body, d, resolution, tol, out);
        }
      }
    }
  }
  sort_unique(out);
  return out;
}

std::vector<Point> find_coincidence_points(const MapPair& pair, std::size_t resolution, double tol) {
  std::vector<Point> out;
  // Coordinatewise maps coincide at a vector iff they coincide in every
  // coordinate; the diagonal lift represents each scalar solution.
  for (const auto& c : scalar_coincidences(pair, resolution, tol)) out.push_back(lift_scalar(pair.space, c));
  return out;
}

CheckReport check_weak_compatibility(const MapPair& pair, double tol, std::size_t resolution) {
  CheckReport r;
  r.check_name = "weak_compatibility";
  const auto cs = scalar_coincidences(pair, resolution, tol);
  if (cs.empty()) {
    r.verdict = Verdict::Pass;
    r.notes.push_back("vacuous: no coincidence points (trivially weakly compatible)");
    return r;
  }
  r.verdict = Verdict::Pass;
  Rational worst = 0;
  const Rational rtol = from_double(tol);
  for (const auto& c : cs) {
    Rational fc = pair.f.eval(c), tc = pair.T.eval(c);
    if (!pair.space.contains_scalar(fc) || !pair.space.contains_scalar(tc)) {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(
          Witness{"leaves the space", {}}.add("c", lift_scalar(pair.space, c)).add("f(c)", lift_scalar(pair.space, fc)).add("T(c)", lift_scalar(pair.space, tc)));
      continue;
    }
    Rational tf = pair.T.eval(fc), ft = pair.f.eval(tc);
    Rational d = abs(tf - ft);
    worst = std::max(worst, d);
    if (d > rtol) {
      if (r.verdict != Verdict::Fail)
        r.witnesses.push_back(Witness{"Tfc != fTc", {}}
                                  .add("c", lift_scalar(pair.space, c))
                                  .add("T(f(c))", lift_scalar(pair.space, tf))
                                  .add("f(T(c))", lift_scalar(pair.space, ft)));
      r.verdict = Verdict::Fail;
    }
  }
  r.margin = -to_double(worst);
  r.notes.push_back(std::to_string(cs.size()) + " coincidence point(s) checked");
  if (pair.space.is_seq()) r.notes.push_back("coordinatewise maps: checked per coordinate");
  return r;
}

CheckReport check_range_inclusion(const MapPair& pair, bool reverse, std::size_t resolution, double tol) {
  CheckReport r;
  r.check_name = reverse ? "range_inclusion_reverse" : "range_inclusion";
  const PiecewiseMap& inner = reverse ? pair.f : pair.T;
  const PiecewiseMap& outer = reverse ? pair.T : pair.f;
  const char* inner_name = reverse ? "f" : "T";
  RangeSet a = range_of(inner, pair.space), b = range_of(outer, pair.space);
  if (a.exact && b.exact) {
    auto gap = set_difference(a.components, b.components);
    r.notes.push_back(std::string(inner_name) + "(X) = " + to_string(a) + ", " + (reverse ? "T" : "f") +
                      "(X) = " + to_string(b));
    if (gap.empty()) {
      r.verdict = Verdict::Pass;
    } else {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(Witness{"outside the other range", {}}.add("y", lift_scalar(pair.space, representative(gap.front()))));
    }
    return r;
  }
  r.notes.push_back("sampled: ranges are not exact");
  bool trunc = false;
  for (const auto& x : scalar_probe_points(pair, resolution, &trunc)) {
    Rational y = inner.eval(x);
    if (!preimage_scalar(outer, y, std::nullopt, tol)) {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(
          Witness{"no preimage", {}}.add("x", lift_scalar(pair.space, x)).add("y", lift_scalar(pair.space, y)));
      return r;
    }
  }
  if (trunc) r.notes.push_back("domain truncated to [lo, lo + 10] for sampling");
  r.verdict = Verdict::Pass;
  return r;
}

CheckReport check_f_range_closed(const MapPair& pair) {
  CheckReport r;
  r.check_name = "f_range_closed";
  RangeSet fx = range_of(pair.f, pair.space);
  const auto& ambient = pair.space.scalar_components();
  r.notes.push_back("f(X) = " + to_string(fx));
  auto closed = is_closed(fx, ambient);
  if (!closed) {
    r.verdict = Verdict::Unknown;
    r.notes.push_back("range is approximate");
    return r;
  }
  if (*closed) {
    r.verdict = Verdict::Pass;
    r.notes.push_back("completeness inherited from ambient space");
    return r;
  }
  r.verdict = Verdict::Fail;
  auto inside = [&](const Rational& v) { return pair.space.contains_scalar(v); };
  for (const auto& c : fx.components) {
    if (c.lo && !c.lo_closed && inside(*c.lo)) {
      r.witnesses.push_back(Witness{"limit point not attained", {}}.add("t", lift_scalar(pair.space, *c.lo)));
      break;
    }
    if (c.hi && !c.hi_closed && inside(*c.hi)) {
      r.witnesses.push_back(Witness{"limit point not attained", {}}.add("t", lift_scalar(pair.space, *c.hi)));
      break;
    }
  }
  return r;
}

Rational coincidence_gap(const MapPair& pair, const Point& x) {
  return distance(pair.space, eval_map(pair.f, x), eval_map(pair.T, x));
}

}  // namespace cfp
