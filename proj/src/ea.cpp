#include "cfp/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace cfp {

std::string to_string(SequenceDescriptor::Kind k) {
  switch (k) {
    case SequenceDescriptor::Kind::ExplicitFormula:
      return "explicit_formula";
    case SequenceDescriptor::Kind::Constant:
      return "constant";
    case SequenceDescriptor::Kind::Recorded:
      return "recorded";
  }
  return "constant";
}

SequenceDescriptor SequenceDescriptor::explicit_formula(Point base, Point direction, std::size_t first_index,
                                                        Point limit) {
  SequenceDescriptor s;
  s.kind = Kind::ExplicitFormula;
  s.base = std::move(base);
  s.direction = std::move(direction);
  s.first_index = std::max<std::size_t>(first_index, 1);
  s.limit = std::move(limit);
  return s;
}

SequenceDescriptor SequenceDescriptor::constant_at(Point c, Point limit) {
  SequenceDescriptor s;
  s.kind = Kind::Constant;
  s.constant = std::move(c);
  s.limit = std::move(limit);
  return s;
}

Point SequenceDescriptor::term(std::size_t n) const {
  switch (kind) {
    case Kind::ExplicitFormula: {
      Point p = base;
      for (std::size_t i = 0; i < p.size(); ++i) p[i] += direction[i] / Rational(static_cast<long>(n));
      return p;
    }
    case Kind::Constant:
      return constant;
    case Kind::Recorded:
      if (recorded.empty()) throw DomainError("empty recorded sequence");
      return recorded[std::min(n, recorded.size() - 1)];
  }
  return constant;
}

std::string SequenceDescriptor::describe() const {
  switch (kind) {
    case Kind::ExplicitFormula:
      return "x_n = " + to_string(base) + " + " + to_string(direction) + "/n, n >= " + std::to_string(first_index) +
             "; limit " + to_string(limit);
    case Kind::Constant:
      return "x_n = " + to_string(constant) + "; limit " + to_string(limit);
    case Kind::Recorded:
      return "recorded sequence of " + std::to_string(recorded.size()) + " points; limit " + to_string(limit);
  }
  return "";
}

namespace {

struct Approach {
  Rational b;
  int side;
  std::size_t first_index;
  Rational limit;
  Rational gap;
};

// Sequence b + side/n, n >= n0, staying inside one space component and one
// piece of each map. Returns the one-sided limits when they exist.
std::optional<Approach> approach(const MapPair& pair, const std::vector<Rational>& cuts, const Rational& b, int side) {
  const IntervalDomain* comp = nullptr;
  for (const auto& c : pair.space.scalar_components()) {
    bool reaches = side > 0 ? ((!c.lo || *c.lo <= b) && (!c.hi || *c.hi > b))
                            : ((!c.hi || *c.hi >= b) && (!c.lo || *c.lo < b));
    if (reaches) {
      comp = &c;
      break;
    }
  }
  if (!comp) return std::nullopt;
  std::optional<Rational> gap;
  for (const auto& x : cuts) {
    Rational g = side > 0 ? x - b : b - x;
    if (g > 0 && (!gap || g < *gap)) gap = g;
  }
  const auto& end = side > 0 ? comp->hi : comp->lo;
  if (end) {
    Rational g = side > 0 ? *end - b : b - *end;
    if (!gap || g < *gap) gap = g;
  }
  std::size_t n0 = 1;
  if (gap) {
    Rational inv = 1 / *gap;
    boost::multiprecision::mpz_int q = numerator(inv) / denominator(inv);
    if (q > 1000000000) return std::nullopt;
    n0 = q.convert_to<std::size_t>() + 1;
  }
  auto lf = pair.f.one_sided_limit(b, side), lt = pair.T.one_sided_limit(b, side);
  if (!lf || !lt) return std::nullopt;
  return Approach{b, side, n0, *lf, abs(*lf - *lt)};
}

}  // namespace

EaSearch search_ea_witness(const MapPair& pair, double tol, std::size_t horizon, std::size_t resolution) {
  EaSearch out;
  out.report.check_name = "ea_witness";
  const Rational rtol = from_double(tol);
  const auto& space = pair.space;
  std::optional<Rational> inf;
  auto see = [&](const Rational& v) {
    if (!inf || v < *inf) inf = v;
  };

  std::vector<Rational> cuts = pair.f.breakpoints();
  for (const auto& b : pair.T.breakpoints()) cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  auto is_component_end = [&](const Rational& b) {
    for (const auto& c : space.scalar_components())
      if ((c.lo && *c.lo == b) || (c.hi && *c.hi == b)) return true;
    return false;
  };

  auto try_approaches = [&](bool interior) -> bool {
    std::vector<Rational> targets;
    for (const auto& b : cuts)
      if (is_component_end(b) != interior) targets.push_back(b);
    if (!interior)
      for (const auto& c : space.scalar_components()) {
        if (c.lo) targets.push_back(*c.lo);
        if (c.hi) targets.push_back(*c.hi);
      }
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    for (const auto& b : targets) {
      for (int side : {+1, -1}) {
        auto a = approach(pair, cuts, b, side);
        if (!a) continue;
        see(a->gap);
        if (a->gap <= rtol && space.contains_scalar(a->limit)) {
          out.witness = SequenceDescriptor::explicit_formula(lift_scalar(space, b), lift_scalar(space, Rational(side)),
                                                             a->first_index, lift_scalar(space, a->limit));
          out.strategy = interior ? "breakpoint approach" : "boundary approach";
          return true;
        }
      }
    }
    return false;
  };

  bool found = try_approaches(true);

  if (!found) {
    for (const auto& c : scalar_coincidences(pair, resolution, tol)) {
      Rational fc = pair.f.eval(c);
      see(abs(fc - pair.T.eval(c)));
      if (space.contains_scalar(fc)) {
        out.witness = SequenceDescriptor::constant_at(lift_scalar(space, c), lift_scalar(space, fc));
        out.strategy = "coincidence point";
        found = true;
        break;
      }
    }
  }

  if (!found) {
    // Grid scan, then local descent around the best grid point.
    const auto xs = scalar_probe_points(pair, resolution);
    std::size_t best = 0;
    std::vector<Rational> gaps(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      gaps[i] = abs(pair.f.eval(xs[i]) - pair.T.eval(xs[i]));
      if (gaps[i] < gaps[best]) best = i;
    }
    if (!xs.empty()) {
      see(gaps[best]);
      Rational x = xs[best];
      Rational h = xs.size() > 1 ? abs(xs[std::min(best + 1, xs.size() - 1)] - xs[best > 0 ? best - 1 : 0]) : Rational(1);
      std::vector<Point> trail{lift_scalar(space, x)};
      Rational g = gaps[best];
      for (int round = 0; round < 40 && g > rtol; ++round) {
        bool moved = false;
        for (int k = -10; k <= 10; ++k) {
          Rational y = x + h * k / 10;
          if (!space.contains_scalar(y)) continue;
          Rational gy = abs(pair.f.eval(y) - pair.T.eval(y));
          if (gy < g) {
            g = gy;
            x = y;
            moved = true;
          }
        }
        if (moved) trail.push_back(lift_scalar(space, x));
        h /= 4;
      }
      see(g);
      Rational fx = pair.f.eval(x);
      if (g <= rtol && space.contains_scalar(fx)) {
        SequenceDescriptor s;
        s.kind = SequenceDescriptor::Kind::Recorded;
        s.recorded = std::move(trail);
        s.limit = lift_scalar(space, fx);
        out.witness = std::move(s);
        out.strategy = "grid descent";
        found = true;
      }
    }
  }

  if (!found) found = try_approaches(false);

  out.infimum = inf.value_or(Rational(0));
  CheckReport& r = out.report;
  if (found) {
    r.verdict = Verdict::Pass;
    r.margin = 0.0;
    Witness w{out.strategy, {}};
    if (out.witness->kind == SequenceDescriptor::Kind::ExplicitFormula) {
      w.add("base", out.witness->base).add("direction", out.witness->direction);
    } else if (out.witness->kind == SequenceDescriptor::Kind::Constant) {
      w.add("x", out.witness->constant);
    } else {
      w.add("x_last", out.witness->recorded.back());
    }
    w.add("limit", out.witness->limit);
    r.witnesses.push_back(std::move(w));
    r.notes.push_back(to_string(out.witness->kind) + ": " + out.witness->describe());
  } else {
    r.verdict = Verdict::Fail;
    r.margin = to_double(out.infimum);
    r.witnesses.push_back(Witness{"infimum of d(fx, Tx)", {}}.add("inf", lift_scalar(space, out.infimum)));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", to_double(out.infimum));
    r.notes.push_back(std::string("no witness found (inf d(fx,Tx) ≈ ") + buf + ")");
  }
  (void)horizon;
  return out;
}

CheckReport check_compatibility(const MapPair& pair, const SequenceDescriptor& witness, std::size_t horizon,
                                double seq_tol) {
  CheckReport r;
  r.check_name = "compatibility";
  const auto& space = pair.space;

  auto exact_c = [&](const Point& x) -> std::optional<Rational> {
    if (!contains(space, x)) return std::nullopt;
    Point fx = eval_map(pair.f, x), tx = eval_map(pair.T, x);
    if (!contains(space, fx) || !contains(space, tx)) return std::nullopt;
    return distance(space, eval_map(pair.f, tx), eval_map(pair.T, fx));
  };

  if (witness.kind != SequenceDescriptor::Kind::ExplicitFormula) {
    // Constant and recorded sequences are short: evaluate every term exactly.
    std::vector<Point> terms =
        witness.kind == SequenceDescriptor::Kind::Constant ? std::vector<Point>{witness.constant} : witness.recorded;
    std::optional<Rational> last;
    Rational tail = 0;
    const std::size_t tail_from = terms.size() - std::max<std::size_t>(1, terms.size() / 10);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      auto c = exact_c(terms[i]);
      if (!c) {
        r.verdict = Verdict::Unknown;
        r.notes.push_back("composition leaves the space at term " + std::to_string(i));
        return r;
      }
      if (i >= tail_from) tail = std::max(tail, *c);
      last = c;
    }
    r.margin = -to_double(tail);
    r.verdict = to_double(tail) <= seq_tol ? Verdict::Pass : Verdict::Fail;
    r.witnesses.push_back(Witness{"tail", {}}.add("tail_limit", lift_scalar(space, *last)));
  } else {
    const std::size_t dim = space.dimension();
    const std::size_t n0 = witness.first_index;
    const std::size_t N = std::max<std::size_t>(horizon, 2);
    std::vector<double> cmax(N, 0.0);
    std::vector<double> xs(N), fx(N), tx(N), ftx(N), tfx(N), diff(N);
    const auto& k = simd::active_kernels();
    for (std::size_t i = 0; i < dim; ++i) {
      const double b = to_double(witness.base[i]), d = to_double(witness.direction[i]);
      for (std::size_t j = 0; j < N; ++j) xs[j] = b + d / static_cast<double>(n0 + j);
      try {
        for (double x : xs)
          if (!space.contains_scalar(x)) throw DomainError("term outside the space");
        pair.f.eval_batch(xs, fx, k);
        pair.T.eval_batch(xs, tx, k);
        for (std::size_t j = 0; j < N; ++j)
          if (!space.contains_scalar(fx[j]) || !space.contains_scalar(tx[j])) throw DomainError("image outside the space");
        pair.f.eval_batch(tx, ftx, k);
        pair.T.eval_batch(fx, tfx, k);
      } catch (const DomainError& e) {
        r.verdict = Verdict::Unknown;
        r.notes.push_back(std::string("composition leaves the space: ") + e.what());
        return r;
      }
      k.abs_diff(ftx.data(), tfx.data(), diff.data(), N);
      for (std::size_t j = 0; j < N; ++j) cmax[j] = std::max(cmax[j], diff[j]);
    }
    const std::size_t tail_from = N - std::max<std::size_t>(1, N / 10);
    double tail = 0.0;
    for (std::size_t j = tail_from; j < N; ++j) tail = std::max(tail, cmax[j]);
    r.margin = -tail;
    r.verdict = tail <= seq_tol ? Verdict::Pass : Verdict::Fail;

    // Exact values at the last term and at half the horizon; the Richardson
    // combination 2 c_N − c_{N/2} removes a 1/n term. Reporting only.
    const std::size_t nN = n0 + N - 1, nH = n0 + N / 2 - 1;
    auto cN = exact_c(witness.term(nN)), cH = exact_c(witness.term(nH));
    Witness w{"tail", {}};
    w.add("n", Rational(static_cast<long>(nN)));
    if (cN) w.add("c_n", lift_scalar(space, *cN));
    if (cN && cH) {
      Rational rich = 2 * *cN - *cH;
      w.add("tail_limit", lift_scalar(space, rich < 0 ? Rational(0) : rich));
    }
    r.witnesses.push_back(std::move(w));
    r.notes.push_back("horizon " + std::to_string(N) + " terms, tail window last 10%");
  }
  r.notes.push_back(r.verdict == Verdict::Pass ? "compatible along tested witnesses"
                                               : "noncompatible: nonzero limit along the witness");
  r.notes.push_back("witness: " + witness.describe());
  return r;
}

}  // namespace cfp
