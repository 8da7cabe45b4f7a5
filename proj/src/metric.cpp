#include "cfp/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace cfp {

IntervalDomain IntervalDomain::make(Rational a, bool a_closed, std::optional<Rational> b, bool b_closed) {
  IntervalDomain d{std::move(a), std::move(b), a_closed, b_closed};
  if (!d.hi) d.hi_closed = false;
  return d;
}

bool IntervalDomain::empty() const {
  if (!lo || !hi) return false;
  if (*lo > *hi) return true;
  if (*lo == *hi) return !(lo_closed && hi_closed);
  return false;
}

bool IntervalDomain::contains(const Rational& x) const {
  if (lo && (lo_closed ? x < *lo : x <= *lo)) return false;
  if (hi && (hi_closed ? x > *hi : x >= *hi)) return false;
  return true;
}

bool IntervalDomain::contains(double x) const {
  if (!std::isfinite(x)) return false;
  return contains(from_double(x));
}

std::string to_string(const IntervalDomain& d) {
  std::ostringstream os;
  if (d.is_point()) {
    os << "{" << display_string(*d.lo) << "}";
    return os.str();
  }
  os << (d.lo && d.lo_closed ? '[' : '(') << (d.lo ? display_string(*d.lo) : "-inf") << ", "
     << (d.hi ? display_string(*d.hi) : "inf") << (d.hi && d.hi_closed ? ']' : ')');
  return os.str();
}

const Rational& Point::scalar() const {
  if (coords.size() != 1) throw DomainError("point is not scalar");
  return coords.front();
}

std::vector<double> Point::approx() const {
  std::vector<double> out;
  out.reserve(coords.size());
  for (const auto& c : coords) out.push_back(to_double(c));
  return out;
}

Point broadcast(const Rational& value, std::size_t dimension) {
  return Point(std::vector<Rational>(dimension, value));
}

std::string to_string(const Point& p) {
  if (p.size() == 1) return display_string(p[0]);
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += display_string(p[i]);
  }
  return s + ")";
}

namespace {

void validate_domain(const IntervalDomain& d) {
  if (!d.lo) throw DomainError("space domains need a finite lower bound");
  if (d.empty()) throw DomainError("empty domain " + to_string(d));
  if (!d.hi && d.hi_closed) throw DomainError("infinite side cannot be closed");
}

}  // namespace

MetricSpace MetricSpace::interval(IntervalDomain d) { return interval_union({std::move(d)}); }

MetricSpace MetricSpace::interval_union(std::vector<IntervalDomain> components) {
  if (components.empty()) throw DomainError("space needs at least one component");
  for (const auto& c : components) validate_domain(c);
  std::sort(components.begin(), components.end(),
            [](const IntervalDomain& a, const IntervalDomain& b) { return *a.lo < *b.lo; });
  for (std::size_t i = 1; i < components.size(); ++i) {
    const auto& prev = components[i - 1];
    const auto& cur = components[i];
    if (!prev.hi || *prev.hi > *cur.lo || (*prev.hi == *cur.lo && prev.hi_closed && cur.lo_closed))
      throw DomainError("space components overlap");
  }
  MetricSpace s;
  s.kind_ = IntervalSpace{components};
  s.scalar_components_ = std::move(components);
  return s;
}

MetricSpace MetricSpace::seq(std::size_t dimension, IntervalDomain coordinate_domain) {
  if (dimension < 1 || dimension > kMaxSeqDimension)
    throw DomainError("sequence space dimension must be in [1, 64]");
  validate_domain(coordinate_domain);
  MetricSpace s;
  s.kind_ = SeqSpace{dimension, coordinate_domain};
  s.scalar_components_ = {std::move(coordinate_domain)};
  return s;
}

std::size_t MetricSpace::dimension() const { return is_seq() ? seq_space().dimension : 1; }

MetricSpace MetricSpace::with_dimension(std::size_t dimension) const {
  if (!is_seq()) throw DomainError("only sequence spaces have a truncation dimension");
  return seq(dimension, seq_space().coordinate_domain);
}

bool MetricSpace::contains_scalar(const Rational& x) const {
  return std::any_of(scalar_components_.begin(), scalar_components_.end(),
                     [&](const IntervalDomain& d) { return d.contains(x); });
}

bool MetricSpace::contains_scalar(double x) const {
  if (!std::isfinite(x)) return false;
  return contains_scalar(from_double(x));
}

bool MetricSpace::bounded() const {
  return std::all_of(scalar_components_.begin(), scalar_components_.end(),
                     [](const IntervalDomain& d) { return d.bounded(); });
}

std::string to_string(const MetricSpace& s) {
  if (s.is_seq())
    return "seq(dim=" + std::to_string(s.dimension()) + ", " + to_string(s.seq_space().coordinate_domain) + ")";
  std::string out;
  for (const auto& c : s.scalar_components()) {
    if (!out.empty()) out += " ∪ ";
    out += to_string(c);
  }
  return out;
}

Rational open_nudge() { return Rational(1, 1000000000); }

namespace {

void check_dims(const MetricSpace& space, const Point& p, const Point& q) {
  if (p.size() != space.dimension() || q.size() != space.dimension())
    throw DomainError("point dimension does not match the space");
}

}  // namespace

Rational distance(const MetricSpace& space, const Point& p, const Point& q) {
  check_dims(space, p, q);
  Rational best = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rational d = abs(Rational(p[i] - q[i]));
    if (d > best) best = d;
  }
  return best;
}

double distance_approx(const MetricSpace& space, const Point& p, const Point& q) {
  return to_double(distance(space, p, q));
}

bool contains(const MetricSpace& space, const Point& p) {
  if (p.size() != space.dimension()) return false;
  return std::all_of(p.coords.begin(), p.coords.end(), [&](const Rational& c) { return space.contains_scalar(c); });
}

IntervalDomain sampling_window(const IntervalDomain& d) {
  if (d.hi) return d;
  return IntervalDomain{d.lo, *d.lo + kDefaultSpan, d.lo_closed, true};
}

std::vector<Rational> sample_interval(const IntervalDomain& d, std::size_t resolution, bool* truncated) {
  if (resolution < 2) throw DomainError("grid resolution must be at least 2");
  if (d.is_point()) return {*d.lo};
  if (!d.hi && truncated) *truncated = true;
  const IntervalDomain w = sampling_window(d);
  const Rational& lo = *w.lo;
  const Rational& hi = *w.hi;
  const Rational width = hi - lo;
  const Rational nudge = open_nudge();
  std::vector<Rational> out;
  out.reserve(resolution);
  for (std::size_t k = 0; k < resolution; ++k) {
    Rational x = lo + width * Rational(static_cast<long>(k), static_cast<long>(resolution - 1));
    if (k == 0 && !w.lo_closed) x = width > 2 * nudge ? Rational(lo + nudge) : Rational((lo + hi) / 2);
    if (k + 1 == resolution && !w.hi_closed) x = width > 2 * nudge ? Rational(hi - nudge) : Rational((lo + hi) / 2);
    out.push_back(std::move(x));
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

// Additive recurrence with the generalized golden ratio: low discrepancy in
// any dimension, deterministic, and prefix-stable.
class RSequence {
 public:
  explicit RSequence(std::size_t dim) : alpha_(dim) {
    double phi = 2.0;
    for (int i = 0; i < 64; ++i) phi = std::pow(1.0 + phi, 1.0 / static_cast<double>(dim + 1));
    double inv = 1.0 / phi;
    double a = inv;
    for (std::size_t j = 0; j < dim; ++j) {
      alpha_[j] = a;
      a *= inv;
    }
  }

  double at(std::size_t index, std::size_t j) const {
    static constexpr double kSeed = 0.5;
    double v = kSeed + alpha_[j] * static_cast<double>(index + 1);
    return v - std::floor(v);
  }

 private:
  std::vector<double> alpha_;
};

// Sampling window with its ends already in floating point.
struct Window {
  double lo, hi;
  bool lo_closed, hi_closed;
  explicit Window(const IntervalDomain& w)
      : lo(to_double(*w.lo)), hi(to_double(*w.hi)), lo_closed(w.lo_closed), hi_closed(w.hi_closed) {}
};

double lerp_window(const Window& w, double u) {
  double x = w.lo + (w.hi - w.lo) * u;
  if (!w.lo_closed) x = std::max(x, w.lo + kOpenEndpointNudge);
  if (!w.hi_closed) x = std::min(x, w.hi - kOpenEndpointNudge);
  return x;
}

}  // namespace

Grid sample_grid(const MetricSpace& space, std::size_t resolution) {
  if (resolution < 2) throw DomainError("grid resolution must be at least 2");
  Grid grid;
  if (!space.is_seq()) {
    for (const auto& c : space.scalar_components())
      for (auto& x : sample_interval(c, resolution, &grid.truncated)) grid.points.emplace_back(std::move(x));
    return grid;
  }
  const std::size_t dim = space.dimension();
  const auto axis = sample_interval(space.seq_space().coordinate_domain, resolution, &grid.truncated);
  double total = std::pow(static_cast<double>(axis.size()), static_cast<double>(dim));
  if (total <= static_cast<double>(kMaxGridPoints)) {
    std::vector<std::size_t> idx(dim, 0);
    for (;;) {
      std::vector<Rational> coords;
      coords.reserve(dim);
      for (std::size_t j = 0; j < dim; ++j) coords.push_back(axis[idx[j]]);
      grid.points.emplace_back(std::move(coords));
      std::size_t j = dim;
      while (j > 0) {
        --j;
        if (++idx[j] < axis.size()) break;
        idx[j] = 0;
        if (j == 0) return grid;
      }
    }
  }
  grid.low_discrepancy = true;
  const Window w(sampling_window(space.seq_space().coordinate_domain));
  const std::size_t count = std::min<std::size_t>(kMaxGridPoints, resolution * resolution);
  RSequence seq(dim);
  grid.points.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    std::vector<Rational> coords;
    coords.reserve(dim);
    for (std::size_t j = 0; j < dim; ++j) coords.push_back(from_double(lerp_window(w, seq.at(i, j))));
    grid.points.emplace_back(std::move(coords));
  }
  return grid;
}

PairSample sample_pairs(const MetricSpace& space, std::size_t count) {
  if (!space.is_seq()) throw DomainError("pair sampling is defined for sequence spaces");
  const std::size_t dim = space.dimension();
  const IntervalDomain& cd = space.seq_space().coordinate_domain;
  const Window w(sampling_window(cd));
  PairSample out;
  out.truncated = !cd.hi.has_value();
  out.first.reserve(count);
  out.second.reserve(count);

  const double lo = lerp_window(w, 0.0);
  static constexpr double kAnchorFractions[] = {1.0, 0.5, 0.1, 0.01, 0.001, 0.0001};
  for (double frac : kAnchorFractions) {
    if (out.first.size() >= count) break;
    std::vector<double> corner(dim, lo);
    std::vector<double> axis_point = corner;
    axis_point[0] = lerp_window(w, frac);
    out.first.push_back(corner);
    out.second.push_back(std::move(axis_point));
    if (out.first.size() >= count) break;
    out.first.push_back(corner);
    out.second.push_back(std::vector<double>(dim, lerp_window(w, frac)));
  }

  RSequence seq(2 * dim);
  for (std::size_t i = 0; out.first.size() < count; ++i) {
    std::vector<double> a(dim), b(dim);
    for (std::size_t j = 0; j < dim; ++j) {
      a[j] = lerp_window(w, seq.at(i, j));
      b[j] = lerp_window(w, seq.at(i, dim + j));
    }
    out.first.push_back(std::move(a));
    out.second.push_back(std::move(b));
  }
  return out;
}

}  // namespace cfp
