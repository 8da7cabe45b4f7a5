#pragma once

// Independent re-evaluation of check witnesses. Each branch recomputes the
// violated inequality straight from the map definitions, without going
// through the scanning code that produced the witness.

#include "cfp/solver.hpp"
#include "cfp/verifiers.hpp"

#include <string>

namespace cfp::oracle {

inline Rational scalar_of(const Point& p) { return p[0]; }

inline bool phi_witness_holds(const AlteringFunction& phi, const Witness& w, double growth = kBegAbbasGrowth) {
  if (w.label == "not monotone") {
    Rational t1 = scalar_of(w.at("t1")), t2 = scalar_of(w.at("t2"));
    return t1 < t2 && phi(t1) > phi(t2) && phi(t1) == scalar_of(w.at("phi(t1)")) &&
           phi(t2) == scalar_of(w.at("phi(t2)"));
  }
  if (w.label == "bounded growth") return phi(scalar_of(w.at("t"))) < from_double(growth);
  if (w.label == "phi(0) != 0") return phi(Rational(0)) != 0;
  if (w.label == "phi(t) <= 0") return phi(scalar_of(w.at("t"))) <= 0;
  if (w.label == "discontinuity") {
    Rational t = scalar_of(w.at("t"));
    for (int side : {-1, 1}) {
      auto lim = phi.map().one_sided_limit(t, side);
      if (lim && abs(*lim - phi(t)) > from_double(kContinuityTol)) return true;
    }
    return false;
  }
  return false;
}

inline bool pair_witness_holds(const MapPair& pair, const Witness& w) {
  const MetricSpace& s = pair.space;
  const Point x = w.at("x"), y = w.at("y");
  const Rational dF = distance(s, eval_map(pair.f, x), eval_map(pair.f, y));
  const Rational dT = distance(s, eval_map(pair.T, x), eval_map(pair.T, y));
  if (!pair.phi) return dT > dF;
  return dF - (*pair.phi)(dF) - dT < -from_double(1e-9);
}

/// True when every witness attached to a failing report re-evaluates to a
/// violation. Unrecognised checks count as unverifiable (false).
inline bool failing_witnesses_hold(const CheckReport& r, const MapPair& pair, std::string* why = nullptr) {
  auto fail = [&](const std::string& m) {
    if (why) *why = r.check_name + ": " + m;
    return false;
  };
  if (r.verdict != Verdict::Fail) return true;
  if (r.witnesses.empty()) return fail("no witness");
  for (const auto& w : r.witnesses) {
    const std::string& n = r.check_name;
    if (n == "phi_membership" || n == "beg_abbas_phi") {
      if (!pair.phi || !phi_witness_holds(*pair.phi, w)) return fail(w.label);
    } else if (n == "weakly_contractive") {
      if (!pair_witness_holds(pair, w)) return fail("pair does not violate the bound");
    } else if (n == "weak_compatibility") {
      const Point c = w.at("c");
      const Point fc = eval_map(pair.f, c), tc = eval_map(pair.T, c);
      if (distance(pair.space, fc, tc) > from_double(1e-9)) return fail("c is not a coincidence");
      if (contains(pair.space, fc) &&
          eval_map(pair.T, fc) == eval_map(pair.f, tc))
        return fail("f and T commute at c");
    } else if (n == "range_inclusion" || n == "range_inclusion_reverse") {
      const bool rev = n == "range_inclusion_reverse";
      const Rational y = scalar_of(w.at("y"));
      RangeSet inner = range_of(rev ? pair.f : pair.T, pair.space);
      RangeSet outer = range_of(rev ? pair.T : pair.f, pair.space);
      if (!inner.contains(y) || outer.contains(y)) return fail("y is not in the difference");
    } else if (n == "f_range_closed") {
      const Rational t = scalar_of(w.at("t"));
      RangeSet fx = range_of(pair.f, pair.space);
      if (!pair.space.contains_scalar(t) || fx.contains(t)) return fail("t is attained or outside X");
    } else if (n == "ea_witness") {
      const Rational inf = scalar_of(w.at("inf"));
      if (inf <= from_double(1e-9)) return fail("infimum within tolerance");
      // the reported infimum is a lower bound of the gap on a fine grid
      for (const auto& p : sample_grid(pair.space, 2000).points)
        if (coincidence_gap(pair, p) < inf - from_double(1e-9)) return fail("gap below the reported infimum");
    } else if (n == "compatibility") {
      if (w.label != "tail") continue;
      if (scalar_of(w.at("tail_limit")) <= from_double(kDefaultSeqTol)) return fail("tail limit within tolerance");
    } else if (n == "monotone_decrease") {
      if (w.label == "distance increased" && !(scalar_of(w.at("d_n+1")) > scalar_of(w.at("d_n"))))
        return fail("no increase");
    } else if (n == "common_fixed_point" || n == "uniqueness" || n == "non_contraction") {
      continue;  // failures of these carry no inequality to recheck
    } else {
      return fail("unrecognised check");
    }
  }
  return true;
}

}  // namespace cfp::oracle
