#include "cfp/piecewise.hpp"

#include "cfp/range_set.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfp {

PiecewiseMap::PiecewiseMap(std::string variable, std::vector<Piece> pieces, bool coordinatewise)
    : variable_(std::move(variable)), pieces_(std::move(pieces)), coordinatewise_(coordinatewise) {
  if (pieces_.empty()) throw DomainError("a piecewise map needs at least one piece");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].domain.empty()) throw DomainError("empty piece domain " + to_string(pieces_[i].domain));
    for (std::size_t j = 0; j < i; ++j) {
      if (!intersect(pieces_[i].domain, pieces_[j].domain).empty())
        throw DomainError("overlapping pieces " + to_string(pieces_[j].domain) + " and " +
                          to_string(pieces_[i].domain));
    }
  }
  programs_.reserve(pieces_.size());
  for (const auto& p : pieces_) programs_.emplace_back(p.body);
}

PiecewiseMap PiecewiseMap::identity(const MetricSpace& space, std::string variable) {
  std::vector<Piece> pieces;
  for (const auto& c : space.scalar_components()) pieces.push_back({c, Expr::variable()});
  return PiecewiseMap(std::move(variable), std::move(pieces), space.is_seq());
}

PiecewiseMap PiecewiseMap::with_coordinatewise(bool flag) const {
  PiecewiseMap m = *this;
  m.coordinatewise_ = flag;
  return m;
}

std::optional<std::size_t> PiecewiseMap::piece_index(const Rational& x) const {
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].domain.contains(x)) return i;
  return std::nullopt;
}

Rational PiecewiseMap::eval(const Rational& x) const {
  auto i = piece_index(x);
  if (!i) throw DomainError("x = " + display_string(x) + " lies outside every piece");
  return pieces_[*i].body.eval(x);
}

double PiecewiseMap::eval(double x) const {
  double out = 0.0;
  eval_batch(std::span<const double>(&x, 1), std::span<double>(&out, 1));
  return out;
}

void PiecewiseMap::eval_batch(std::span<const double> xs, std::span<double> out, const simd::KernelTable& k) const {
  const std::size_t n = xs.size();
  std::vector<std::uint8_t> covered(n, 0), mask(n);
  std::vector<double> gathered;
  std::vector<std::size_t> where;
  std::vector<double> values;
  constexpr double inf = std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < pieces_.size(); ++p) {
    const IntervalDomain& d = pieces_[p].domain;
    k.interval_mask(xs.data(), n, d.lo ? to_double(*d.lo) : -inf, d.hi ? to_double(*d.hi) : inf, d.lo_closed,
                    d.hi_closed, mask.data());
    gathered.clear();
    where.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask[i] && !covered[i]) {
        gathered.push_back(xs[i]);
        where.push_back(i);
        covered[i] = 1;
      }
    }
    if (gathered.empty()) continue;
    values.resize(gathered.size());
    programs_[p].run(gathered, values, k);
    for (std::size_t j = 0; j < where.size(); ++j) out[where[j]] = values[j];
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!covered[i]) throw DomainError("x = " + std::to_string(xs[i]) + " lies outside every piece");
}

bool PiecewiseMap::all_affine() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Piece& p) { return as_affine(p.body).has_value(); });
}

bool PiecewiseMap::is_identity() const {
  return std::all_of(pieces_.begin(), pieces_.end(),
                     [](const Piece& p) { return p.body.kind() == Expr::Kind::Variable; });
}

std::vector<Rational> PiecewiseMap::breakpoints() const {
  std::vector<Rational> out;
  for (const auto& p : pieces_) {
    if (p.domain.lo) out.push_back(*p.domain.lo);
    if (p.domain.hi) out.push_back(*p.domain.hi);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::optional<Rational> PiecewiseMap::one_sided_limit(const Rational& b, int side) const {
  for (const auto& p : pieces_) {
    const IntervalDomain& d = p.domain;
    bool adjacent = side > 0 ? ((!d.lo || *d.lo <= b) && (!d.hi || *d.hi > b))
                             : ((!d.hi || *d.hi >= b) && (!d.lo || *d.lo < b));
    if (!adjacent) continue;
    try {
      return p.body.eval(b);
    } catch (const DomainError&) {
      return std::nullopt;
    }
  }
  return std::nullopt;
}

bool operator==(const PiecewiseMap& a, const PiecewiseMap& b) {
  if (a.variable_ != b.variable_ || a.coordinatewise_ != b.coordinatewise_ || a.pieces_.size() != b.pieces_.size())
    return false;
  for (std::size_t i = 0; i < a.pieces_.size(); ++i)
    if (!(a.pieces_[i].domain == b.pieces_[i].domain) || !(a.pieces_[i].body == b.pieces_[i].body)) return false;
  return true;
}

std::string domain_syntax(const IntervalDomain& d) {
  std::string s;
  s += d.lo && d.lo_closed ? "[" : "(";
  s += d.lo ? exact_string(*d.lo) : "-inf";
  s += ", ";
  s += d.hi ? exact_string(*d.hi) : "inf";
  s += d.hi && d.hi_closed ? "]" : ")";
  return s;
}

std::string to_string(const PiecewiseMap& m) {
  std::string s = "piecewise " + m.variable() + " {";
  for (const auto& p : m.pieces()) s += " " + domain_syntax(p.domain) + " -> " + to_string(p.body, m.variable()) + ";";
  return s + " }";
}

Point eval_map(const PiecewiseMap& map, const Point& p) {
  std::vector<Rational> out;
  out.reserve(p.size());
  if (p.size() != 1 && !map.coordinatewise()) throw DomainError("map is not coordinatewise");
  for (const auto& c : p.coords) out.push_back(map.eval(c));
  return Point(std::move(out));
}

void check_coverage(const PiecewiseMap& map, const MetricSpace& space) {
  std::vector<IntervalDomain> domains;
  for (const auto& p : map.pieces()) domains.push_back(p.domain);
  auto gap = set_difference(space.scalar_components(), domains);
  if (!gap.empty()) throw DomainError("pieces leave " + to_string(gap.front()) + " of the space uncovered");
}

namespace {

constexpr std::size_t kScanResolution = 10000;
constexpr int kBisectionIters = 200;

// Point of d closest to target, staying inside open ends by the standard nudge.
Rational clamp_into(const IntervalDomain& d, const Rational& target) {
  if (d.contains(target)) return target;
  const Rational nudge = open_nudge();
  const bool narrow = d.lo && d.hi && (*d.hi - *d.lo) <= 2 * nudge;
  if (narrow) return (*d.lo + *d.hi) / 2;
  if (d.lo && target <= *d.lo) return d.lo_closed ? *d.lo : Rational(*d.lo + nudge);
  return d.hi_closed ? *d.hi : Rational(*d.hi - nudge);
}

Rational constant_piece_representative(const IntervalDomain& d, const std::optional<Rational>& prev) {
  if (prev) return clamp_into(d, *prev);
  if (d.bounded()) return (*d.lo + *d.hi) / 2;
  return clamp_into(d, *d.lo);
}

void scan_window(const Expr& body, const Program& prog, double a, double b, double y, double tol,
                 std::vector<Rational>& found) {
  std::vector<double> xs(kScanResolution + 1), g(kScanResolution + 1);
  for (std::size_t i = 0; i <= kScanResolution; ++i)
    xs[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(kScanResolution);
  xs.back() = b;
  prog.run(xs, g);
  for (auto& v : g) v -= y;
  for (std::size_t i = 0; i <= kScanResolution; ++i) {
    if (std::fabs(g[i]) <= tol) found.push_back(from_double(xs[i]));
    if (i == kScanResolution || g[i] == 0.0 || g[i + 1] == 0.0) continue;
    if (std::signbit(g[i]) == std::signbit(g[i + 1])) continue;
    double lo = xs[i], hi = xs[i + 1];
    double glo = g[i];
    for (int it = 0; it < kBisectionIters; ++it) {
      double mid = lo + (hi - lo) / 2;
      if (mid <= lo || mid >= hi) break;
      double gm = body.eval(mid) - y;
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
    double best = std::fabs(body.eval(lo) - y) <= std::fabs(body.eval(hi) - y) ? lo : hi;
    found.push_back(from_double(best));
  }
}

void solve_piece(const Piece& piece, const Program& prog, const Rational& y, double tol,
                 const std::optional<Rational>& prev, std::vector<Rational>& out) {
  const IntervalDomain& d = piece.domain;
  if (auto a = as_affine(piece.body)) {
    if (a->slope == 0) {
      if (abs(Rational(a->intercept - y)) <= from_double(tol)) out.push_back(constant_piece_representative(d, prev));
      return;
    }
    Rational x = (y - a->intercept) / a->slope;
    if (d.contains(x)) {
      out.push_back(std::move(x));
      return;
    }
    // A closed end may still attain y within tolerance.
    std::optional<Rational> end;
    if (d.lo && x < *d.lo && d.lo_closed) end = *d.lo;
    if (d.hi && x > *d.hi && d.hi_closed) end = *d.hi;
    if (end && abs(Rational(piece.body.eval(*end) - y)) <= from_double(tol)) out.push_back(*end);
    return;
  }
  // Non-affine: scan on doubles, refine sign changes by bisection, keep
  // candidates that pass an exact residual test or sit on a collapsed bracket.
  const double yd = to_double(y);
  const Rational nudge = open_nudge();
  auto lo_pt = [&]() { return to_double(d.lo_closed ? *d.lo : Rational(*d.lo + nudge)); };
  std::vector<Rational> found;
  try {
    if (d.bounded()) {
      double a = lo_pt();
      double b = to_double(d.hi_closed ? *d.hi : Rational(*d.hi - nudge));
      if (a > b) a = b = to_double((*d.lo + *d.hi) / 2);
      scan_window(piece.body, prog, a, b, yd, tol, found);
    } else {
      double a = lo_pt();
      for (double span = kDefaultSpan; found.empty() && span <= 1e12; span *= 10) {
        double b = to_double(*d.lo) + span;
        scan_window(piece.body, prog, a, b, yd, tol, found);
        a = b;
      }
    }
  } catch (const DomainError&) {
    // A pole inside the scanned window: this piece reports no preimage.
    found.clear();
  }
  for (auto& x : found) {
    if (!d.contains(x)) continue;
    try {
      double residual = std::fabs(to_double(piece.body.eval(x) - y));
      if (residual <= std::max(tol, 4 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::fabs(yd))))
        out.push_back(x);
    } catch (const DomainError&) {
    }
  }
}

}  // namespace

std::optional<Rational> preimage_scalar(const PiecewiseMap& map, const Rational& y, const std::optional<Rational>& prev,
                                        double tol) {
  std::vector<Rational> candidates;
  for (std::size_t i = 0; i < map.pieces().size(); ++i) {
    Program prog(map.pieces()[i].body);
    solve_piece(map.pieces()[i], prog, y, tol, prev, candidates);
  }
  if (candidates.empty()) return std::nullopt;
  auto better = [&](const Rational& a, const Rational& b) {
    if (!prev) return a < b;
    Rational da = abs(Rational(a - *prev));
    Rational db = abs(Rational(b - *prev));
    return da != db ? da < db : a < b;
  };
  return *std::min_element(candidates.begin(), candidates.end(), better);
}

std::optional<Point> preimage(const PiecewiseMap& map, const Point& y, const std::optional<Point>& prev, double tol) {
  if (y.size() != 1 && !map.coordinatewise()) throw DomainError("map is not coordinatewise");
  std::vector<Rational> out;
  out.reserve(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    std::optional<Rational> p;
    if (prev) p = (*prev)[i];
    auto x = preimage_scalar(map, y[i], p, tol);
    if (!x) return std::nullopt;
    out.push_back(std::move(*x));
  }
  return Point(std::move(out));
}

}  // namespace cfp
