#include "cfp/phi.hpp"

#include <algorithm>

namespace cfp {

namespace {

const std::vector<IntervalDomain>& half_line() {
  static const std::vector<IntervalDomain> d{IntervalDomain{Rational(0), std::nullopt, true, false}};
  return d;
}

}  // namespace

AlteringFunction::AlteringFunction(PiecewiseMap map) : map_(std::move(map)) {
  check_coverage(map_, MetricSpace::interval(half_line().front()));
}

std::vector<Rational> phi_sample_points(const AlteringFunction& phi, std::size_t resolution, double t_max) {
  std::vector<Rational> ts = sample_interval(IntervalDomain::closed(0, kDefaultSpan), resolution);
  for (int i = 1; i <= kDefaultSpan; ++i) ts.emplace_back(i);
  for (const auto& b : phi.map().breakpoints())
    if (b >= 0) ts.push_back(b);
  const Rational top = from_double(t_max);
  for (Rational scale = 1; scale <= top; scale *= 10)
    for (int m : {1, 2, 5})
      if (scale * m <= top) ts.push_back(scale * m);
  ts.push_back(top);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  return ts;
}

CheckReport check_phi_membership(const AlteringFunction& phi, std::size_t resolution) {
  CheckReport r;
  r.check_name = "phi_membership";
  r.verdict = Verdict::Pass;
  r.notes.push_back("positivity sampled on [0, 10] and a ladder up to 1e6");

  const Rational zero = phi(Rational(0));
  if (zero != 0) {
    r.verdict = Verdict::Fail;
    r.witnesses.push_back(Witness{"phi(0) != 0", {}}.add("t", Rational(0)).add("phi(t)", zero));
  }

  std::optional<Rational> lowest;
  for (const auto& t : phi_sample_points(phi, resolution, kBegAbbasTMax)) {
    if (t == 0) continue;
    Rational v;
    try {
      v = phi(t);
    } catch (const DomainError& e) {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(Witness{"undefined", {}}.add("t", t));
      r.notes.push_back(e.what());
      continue;
    }
    if (!lowest || v < *lowest) lowest = v;
    if (v <= 0 && r.verdict != Verdict::Fail) {
      r.verdict = Verdict::Fail;
      r.witnesses.push_back(Witness{"phi(t) <= 0", {}}.add("t", t).add("phi(t)", v));
    }
  }
  if (lowest) r.margin = to_double(*lowest);

  for (const auto& b : phi.map().breakpoints()) {
    if (b <= 0) continue;
    auto left = phi.map().one_sided_limit(b, -1);
    auto right = phi.map().one_sided_limit(b, +1);
    const Rational at = phi(b);
    const Rational tol = from_double(kContinuityTol);
    bool ok = left && right && abs(*left - at) <= tol && abs(*right - at) <= tol;
    if (!ok) {
      r.verdict = Verdict::Fail;
      Witness w{"discontinuity", {}};
      w.add("t", b).add("phi(t)", at);
      if (left) w.add("left limit", *left);
      if (right) w.add("right limit", *right);
      r.witnesses.push_back(std::move(w));
    }
  }
  return r;
}

CheckReport check_beg_abbas_phi(const AlteringFunction& phi, std::size_t resolution, double t_max, double growth) {
  CheckReport r;
  r.check_name = "beg_abbas_phi";
  r.notes.push_back("sampled: monotonicity on [0, " + display_string(from_double(t_max)) + "], growth threshold " +
                    display_string(from_double(growth)));
  if (!check_phi_membership(phi, resolution).passed()) {
    r.notes.push_back("precondition: phi is not in the altering class");
    return r;
  }

  const auto ts = phi_sample_points(phi, resolution, t_max);
  std::vector<Rational> vs;
  vs.reserve(ts.size());
  for (const auto& t : ts) vs.push_back(phi(t));

  // Largest drop below the running maximum.
  std::size_t peak = 0, worst_i = 0, worst_peak = 0;
  Rational worst = 0;
  std::optional<Rational> min_step;
  for (std::size_t i = 1; i < ts.size(); ++i) {
    Rational step = vs[i] - vs[i - 1];
    if (!min_step || step < *min_step) min_step = step;
    Rational drop = vs[i] - vs[peak];
    if (drop < worst) {
      worst = drop;
      worst_i = i;
      worst_peak = peak;
    }
    if (vs[i] > vs[peak]) peak = i;
  }

  if (worst < 0) {
    r.verdict = Verdict::Fail;
    r.margin = to_double(worst);
    // Report the peak against the first integer sample after it that lies
    // below it, which gives a short, readable pair.
    std::size_t j = worst_i;
    for (std::size_t k = worst_peak + 1; k < ts.size(); ++k) {
      if (denominator(ts[k]) == 1 && vs[k] < vs[worst_peak]) {
        j = k;
        break;
      }
    }
    r.witnesses.push_back(Witness{"not monotone", {}}
                              .add("t1", ts[worst_peak])
                              .add("t2", ts[j])
                              .add("phi(t1)", vs[worst_peak])
                              .add("phi(t2)", vs[j]));
    return r;
  }

  r.margin = min_step ? to_double(*min_step) : 0.0;
  const Rational top = phi(from_double(t_max));
  if (top < from_double(growth)) {
    r.verdict = Verdict::Fail;
    r.witnesses.push_back(Witness{"bounded growth", {}}.add("t", from_double(t_max)).add("phi(t)", top));
    r.notes.push_back("phi(t_max) below the growth threshold; lim phi = infinity not supported by samples");
    return r;
  }
  r.verdict = Verdict::Pass;
  return r;
}

}  // namespace cfp
