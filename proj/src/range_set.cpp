#include "cfp/range_set.hpp"

#include "cfp/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cfp {

namespace {

// Lower ends ordered by the set of points they admit: -inf first; at equal
// values a closed end admits more and sorts first.
bool lower_less(const IntervalDomain& a, const IntervalDomain& b) {
  if (!a.lo || !b.lo) return !a.lo && b.lo;
  if (*a.lo != *b.lo) return *a.lo < *b.lo;
  return a.lo_closed && !b.lo_closed;
}

// Does interval `a` (ending at a.hi) reach or touch `b` (starting at b.lo)?
bool joins(const IntervalDomain& a, const IntervalDomain& b) {
  if (!a.hi || !b.lo) return true;
  if (*a.hi > *b.lo) return true;
  if (*a.hi == *b.lo) return a.hi_closed || b.lo_closed;
  return false;
}

// True when the upper end of a extends past the upper end of b.
bool upper_greater(const IntervalDomain& a, const IntervalDomain& b) {
  if (!a.hi || !b.hi) return !a.hi && b.hi;
  if (*a.hi != *b.hi) return *a.hi > *b.hi;
  return a.hi_closed && !b.hi_closed;
}

}  // namespace

bool RangeSet::contains(const Rational& x) const {
  return std::any_of(components.begin(), components.end(), [&](const IntervalDomain& d) { return d.contains(x); });
}

std::string to_string(const RangeSet& r) {
  if (r.components.empty()) return "∅";
  std::vector<std::string> points;
  bool all_points = std::all_of(r.components.begin(), r.components.end(),
                                [](const IntervalDomain& d) { return d.is_point(); });
  std::string out;
  if (all_points) {
    out = "{";
    for (std::size_t i = 0; i < r.components.size(); ++i) {
      if (i) out += ", ";
      out += display_string(*r.components[i].lo);
    }
    out += "}";
  } else {
    for (const auto& c : r.components) {
      if (!out.empty()) out += " ∪ ";
      out += to_string(c);
    }
  }
  if (!r.exact) out += " (approximate)";
  return out;
}

std::vector<IntervalDomain> normalize(std::vector<IntervalDomain> parts) {
  std::erase_if(parts, [](const IntervalDomain& d) { return d.empty(); });
  std::sort(parts.begin(), parts.end(), lower_less);
  std::vector<IntervalDomain> out;
  for (auto& p : parts) {
    if (!out.empty() && joins(out.back(), p)) {
      if (upper_greater(p, out.back())) {
        out.back().hi = p.hi;
        out.back().hi_closed = p.hi_closed;
      }
    } else {
      out.push_back(std::move(p));
    }
  }
  return out;
}

IntervalDomain intersect(const IntervalDomain& a, const IntervalDomain& b) {
  IntervalDomain r;
  if (!a.lo) {
    r.lo = b.lo;
    r.lo_closed = b.lo_closed;
  } else if (!b.lo) {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed;
  } else if (*a.lo != *b.lo) {
    const IntervalDomain& w = *a.lo > *b.lo ? a : b;
    r.lo = w.lo;
    r.lo_closed = w.lo_closed;
  } else {
    r.lo = a.lo;
    r.lo_closed = a.lo_closed && b.lo_closed;
  }
  if (!a.hi) {
    r.hi = b.hi;
    r.hi_closed = b.hi_closed;
  } else if (!b.hi) {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed;
  } else if (*a.hi != *b.hi) {
    const IntervalDomain& w = *a.hi < *b.hi ? a : b;
    r.hi = w.hi;
    r.hi_closed = w.hi_closed;
  } else {
    r.hi = a.hi;
    r.hi_closed = a.hi_closed && b.hi_closed;
  }
  if (!r.lo) r.lo_closed = false;
  if (!r.hi) r.hi_closed = false;
  return r;
}

std::vector<IntervalDomain> set_intersection(const std::vector<IntervalDomain>& a,
                                             const std::vector<IntervalDomain>& b) {
  std::vector<IntervalDomain> out;
  for (const auto& x : a)
    for (const auto& y : b) {
      IntervalDomain i = intersect(x, y);
      if (!i.empty()) out.push_back(std::move(i));
    }
  return normalize(std::move(out));
}

std::vector<IntervalDomain> set_complement(const std::vector<IntervalDomain>& a) {
  const auto parts = normalize(a);
  std::vector<IntervalDomain> out;
  IntervalDomain gap{std::nullopt, std::nullopt, false, false};
  for (const auto& p : parts) {
    if (p.lo) {
      gap.hi = p.lo;
      gap.hi_closed = !p.lo_closed;
      if (!gap.empty()) out.push_back(gap);
    }
    if (!p.hi) return normalize(std::move(out));
    gap = IntervalDomain{p.hi, std::nullopt, !p.hi_closed, false};
  }
  out.push_back(gap);
  return normalize(std::move(out));
}

std::vector<IntervalDomain> set_difference(const std::vector<IntervalDomain>& a,
                                           const std::vector<IntervalDomain>& b) {
  return set_intersection(a, set_complement(b));
}

Rational representative(const IntervalDomain& d) {
  if (d.lo && d.lo_closed) return *d.lo;
  if (d.lo && d.hi) return (*d.lo + *d.hi) / 2;
  if (d.lo) return *d.lo + 1;
  if (d.hi) return d.hi_closed ? *d.hi : Rational(*d.hi - 1);
  return 0;
}

namespace {

constexpr std::size_t kRangeSamples = 2001;

void image_of_piece(const Piece& piece, const IntervalDomain& dom, std::vector<IntervalDomain>& out, bool& exact,
                    std::vector<std::string>& notes) {
  if (auto a = as_affine(piece.body)) {
    if (a->slope == 0) {
      out.push_back(IntervalDomain::point(a->intercept));
      return;
    }
    auto map_end = [&](const std::optional<Rational>& v) -> std::optional<Rational> {
      if (!v) return std::nullopt;
      return a->slope * *v + a->intercept;
    };
    IntervalDomain img;
    if (a->slope > 0) {
      img.lo = map_end(dom.lo);
      img.lo_closed = dom.lo_closed && dom.lo.has_value();
      img.hi = map_end(dom.hi);
      img.hi_closed = dom.hi_closed && dom.hi.has_value();
    } else {
      img.lo = map_end(dom.hi);
      img.lo_closed = dom.hi_closed && dom.hi.has_value();
      img.hi = map_end(dom.lo);
      img.hi_closed = dom.lo_closed && dom.lo.has_value();
    }
    out.push_back(std::move(img));
    return;
  }
  if (auto m = as_linear_fractional(piece.body); m && m->c != 0) {
    // Monotone between poles; the pole -d/c must stay off the closed hull.
    const Rational pole = -m->d / m->c;
    const bool pole_inside = (!dom.lo || pole >= *dom.lo) && (!dom.hi || pole <= *dom.hi);
    if (!pole_inside) {
      auto at = [&](const std::optional<Rational>& v) -> Rational {
        return v ? Rational((m->a * *v + m->b) / (m->c * *v + m->d)) : Rational(m->a / m->c);
      };
      const Rational det = m->a * m->d - m->b * m->c;
      if (det == 0) {
        out.push_back(IntervalDomain::point(m->a / m->c));
        return;
      }
      // an infinite end is approached, never attained
      const bool lo_att = dom.lo && dom.lo_closed, hi_att = dom.hi && dom.hi_closed;
      if (det > 0) {
        out.push_back(IntervalDomain{at(dom.lo), at(dom.hi), lo_att, hi_att});
      } else {
        out.push_back(IntervalDomain{at(dom.hi), at(dom.lo), hi_att, lo_att});
      }
      return;
    }
  }
  exact = false;
  if (!dom.hi) notes.push_back("non-affine piece sampled over truncated window");
  std::vector<Rational> xs = dom.lo ? sample_interval(dom, kRangeSamples)
                                    : std::vector<Rational>{};
  if (xs.empty()) return;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& x : xs) {
    double v;
    try {
      v = to_double(piece.body.eval(x));
    } catch (const DomainError&) {
      continue;  // a pole on the sample grid
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  if (lo <= hi) out.push_back(IntervalDomain::closed(from_double(lo), from_double(hi)));
}

}  // namespace

RangeSet range_of(const PiecewiseMap& map, const std::vector<IntervalDomain>& domain) {
  RangeSet r;
  std::vector<IntervalDomain> parts;
  for (const auto& piece : map.pieces()) {
    for (const auto& d : set_intersection({piece.domain}, domain)) image_of_piece(piece, d, parts, r.exact, r.notes);
  }
  r.components = normalize(std::move(parts));
  return r;
}

RangeSet range_of(const PiecewiseMap& map) {
  std::vector<IntervalDomain> domain;
  for (const auto& p : map.pieces()) domain.push_back(p.domain);
  return range_of(map, normalize(std::move(domain)));
}

RangeSet range_of(const PiecewiseMap& map, const MetricSpace& space) {
  return range_of(map, space.scalar_components());
}

std::optional<bool> is_closed(const RangeSet& r, const std::vector<IntervalDomain>& within) {
  if (!r.exact) return std::nullopt;
  auto ambient = [&](const Rational& v) {
    return std::any_of(within.begin(), within.end(), [&](const IntervalDomain& d) { return d.contains(v); });
  };
  for (const auto& c : r.components) {
    if (c.lo && !c.lo_closed && ambient(*c.lo)) return false;
    if (c.hi && !c.hi_closed && ambient(*c.hi)) return false;
  }
  return true;
}

std::optional<bool> is_closed(const RangeSet& r, const IntervalDomain& within) {
  return is_closed(r, std::vector<IntervalDomain>{within});
}

}  // namespace cfp
