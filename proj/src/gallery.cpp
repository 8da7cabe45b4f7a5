#include "cfp/gallery.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace cfp {

const std::string& fixture_source(const std::string& stem) {
  for (const auto& [name, text] : embedded_fixture_sources())
    if (name == stem) return text;
  throw std::invalid_argument("no bundled fixture '" + stem + "'");
}

const std::vector<std::string>& fixture_ids() {
  static const std::vector<std::string> ids{"EX1_3", "EX2_2", "EX3_4", "EX3_5", "EX3_7", "EX3_9", "EX3_11"};
  return ids;
}

namespace {

using V = Verdict;
constexpr V P = V::Pass, F = V::Fail, U = V::Unknown;

struct Expectation {
  const char* id;
  std::map<std::string, Verdict> verdicts;
};

// phi_membership, beg_abbas_phi, weakly_contractive, weak_compatibility,
// ea_witness, compatibility, range_inclusion, f_range_closed,
// common_fixed_point, uniqueness (+ extras).
const std::vector<Expectation>& expectations() {
  static const std::vector<Expectation> table{
      {"EX1_3",
       {{"phi_membership", U}, {"beg_abbas_phi", U}, {"weakly_contractive", F}, {"weak_compatibility", P},
        {"ea_witness", P}, {"compatibility", P}, {"range_inclusion", F}, {"f_range_closed", F},
        {"common_fixed_point", P}, {"uniqueness", P}}},
      {"EX2_2",
       {{"phi_membership", P}, {"beg_abbas_phi", F}, {"weakly_contractive", P}, {"weak_compatibility", P},
        {"ea_witness", P}, {"compatibility", P}, {"range_inclusion", P}, {"f_range_closed", P},
        {"common_fixed_point", P}, {"uniqueness", P}}},
      {"EX3_4",
       {{"phi_membership", P}, {"beg_abbas_phi", F}, {"weakly_contractive", P}, {"weak_compatibility", P},
        {"ea_witness", P}, {"compatibility", F}, {"range_inclusion", F}, {"f_range_closed", P},
        {"common_fixed_point", P}, {"uniqueness", P}}},
      {"EX3_5",
       {{"phi_membership", P}, {"beg_abbas_phi", P}, {"weakly_contractive", P}, {"weak_compatibility", P},
        {"ea_witness", P}, {"compatibility", P}, {"range_inclusion", P}, {"f_range_closed", P},
        {"common_fixed_point", P}, {"uniqueness", P}, {"non_contraction", P}}},
      {"EX3_7",
       {{"phi_membership", P}, {"beg_abbas_phi", P}, {"weakly_contractive", P}, {"boyd_wong", P},
        {"weak_compatibility", P}, {"ea_witness", P}, {"compatibility", P}, {"range_inclusion", P},
        {"f_range_closed", P}, {"common_fixed_point", P}, {"uniqueness", P}}},
      {"EX3_9",
       {{"phi_membership", P}, {"beg_abbas_phi", P}, {"weakly_contractive", P}, {"weak_compatibility", P},
        {"ea_witness", P}, {"compatibility", F}, {"range_inclusion", F}, {"f_range_closed", F},
        {"common_fixed_point", F}, {"uniqueness", P}}},
      {"EX3_11",
       {{"phi_membership", P}, {"beg_abbas_phi", P}, {"weakly_contractive", P}, {"weak_compatibility", P},
        {"ea_witness", F}, {"compatibility", U}, {"range_inclusion", F}, {"f_range_closed", P},
        {"common_fixed_point", F}, {"uniqueness", P}}},
  };
  return table;
}

std::string stem_of(const std::string& id) {
  std::string s = id;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

SequenceDescriptor approach_from_above(const MetricSpace& space, const Rational& b, std::size_t n0,
                                       const Rational& limit) {
  return SequenceDescriptor::explicit_formula(lift_scalar(space, b), lift_scalar(space, Rational(1)), n0,
                                              lift_scalar(space, limit));
}

}  // namespace

Fixture load_fixture(const std::string& id, std::size_t seq_dim) {
  auto it = std::find_if(expectations().begin(), expectations().end(),
                         [&](const Expectation& e) { return id == e.id; });
  if (it == expectations().end()) throw std::invalid_argument("unknown fixture id '" + id + "'");

  MapFile file = parse_map_file(fixture_source(stem_of(id)));
  MetricSpace space = file.space.is_seq() ? file.space.with_dimension(seq_dim) : file.space;
  std::optional<AlteringFunction> phi;
  if (file.phi) phi = AlteringFunction(*file.phi);

  Fixture fx{id,
             file,
             bind_pair(space, file.map("f"), file.map("T"), phi),
             std::nullopt,
             std::nullopt,
             it->verdicts,
             std::nullopt,
             std::nullopt,
             sample_grid(space, 2).points.front()};  // lowest point of the space
  if (file.psi) fx.psi = AlteringFunction(*file.psi);

  const Rational two_thirds(2, 3);
  if (id == "EX1_3") {
    fx.witness = approach_from_above(space, two_thirds, 4, two_thirds);
    fx.expected_fixed_point = Point(two_thirds);
    fx.route = Route::Ea;
  } else if (id == "EX2_2") {
    fx.witness = SequenceDescriptor::constant_at(Point(two_thirds), Point(two_thirds));
    fx.expected_fixed_point = Point(two_thirds);
    fx.route = Route::Jungck;
  } else if (id == "EX3_4") {
    fx.witness = approach_from_above(space, two_thirds, 4, two_thirds);
    fx.expected_fixed_point = Point(two_thirds);
    fx.route = Route::Ea;
  } else if (id == "EX3_5") {
    fx.witness = SequenceDescriptor::constant_at(lift_scalar(space, 0), lift_scalar(space, 0));
    fx.expected_fixed_point = lift_scalar(space, 0);
    fx.route = Route::Ea;
    fx.x0 = lift_scalar(space, 1);
  } else if (id == "EX3_7") {
    fx.witness = approach_from_above(space, two_thirds, 4, two_thirds);
    fx.expected_fixed_point = Point(two_thirds);
    fx.route = Route::Direct;
  } else if (id == "EX3_9") {
    fx.witness = approach_from_above(space, two_thirds, 4, two_thirds);
    fx.x0 = Point(Rational(4, 5));
  } else if (id == "EX3_11") {
    fx.x0 = Point(Rational(4, 5));
  }
  return fx;
}

std::optional<std::pair<Point, Point>> non_contraction_witness(const MetricSpace& space, const PiecewiseMap& T,
                                                               double k) {
  if (!(k > 0.0 && k < 1.0)) throw std::invalid_argument("contraction constant must lie in (0, 1)");
  if (!space.is_seq()) throw std::invalid_argument("non_contraction_witness needs a sequence space");
  const PiecewiseMap map = T.with_coordinatewise(true);
  const auto& dom = space.seq_space().coordinate_domain;
  const Rational lo = dom.lo ? *dom.lo : Rational(0);
  const Rational rk = from_double(k);
  const Rational bound = (1 - rk) / rk;
  Point x = broadcast(lo, space.dimension());
  for (Rational t(1, 2); t > Rational(1, 1000000000); t /= 10) {
    if (t >= bound) continue;
    Point y = x;
    y[0] += t;
    if (!contains(space, y)) continue;
    if (distance(space, eval_map(map, x), eval_map(map, y)) > rk * distance(space, x, y)) return std::make_pair(x, y);
  }
  return std::nullopt;
}

FixtureRun run_fixture(const Fixture& fixture, const RunConfig& config) {
  FixtureRun run;
  run.id = fixture.id;
  const MapPair& pair = fixture.pair;
  auto& out = run.reports;

  if (pair.phi) {
    out.push_back(check_phi_membership(*pair.phi, config.resolution));
    out.push_back(check_beg_abbas_phi(*pair.phi, config.resolution));
  } else {
    for (const char* name : {"phi_membership", "beg_abbas_phi"}) {
      CheckReport r;
      r.check_name = name;
      r.notes.push_back("no phi given");
      out.push_back(std::move(r));
    }
  }
  out.push_back(check_weakly_contractive(pair, config.resolution));
  if (fixture.psi) out.push_back(check_boyd_wong(pair, *fixture.psi, config.resolution));
  out.push_back(check_weak_compatibility(pair, config.tol, config.resolution));

  EaSearch ea = search_ea_witness(pair, config.tol, config.horizon, config.resolution);
  out.push_back(ea.report);
  if (ea.witness) {
    out.push_back(check_compatibility(pair, *ea.witness, config.horizon, config.seq_tol));
  } else {
    CheckReport r;
    r.check_name = "compatibility";
    r.notes.push_back("no (E.A) witness to test along");
    out.push_back(std::move(r));
  }
  out.push_back(check_range_inclusion(pair, false, config.resolution, config.tol));
  out.push_back(check_f_range_closed(pair));

  SolveResult s = solve(pair, fixture.route, fixture.x0, config);
  CheckReport cfp;
  if (s.fixed_point) {
    cfp = verify_common_fixed_point(pair, *s.fixed_point, config.tol);
    cfp.notes.push_back("route " + to_string(s.route));
  } else {
    cfp.check_name = "common_fixed_point";
    cfp.verdict = Verdict::Fail;
    cfp.witnesses.push_back(Witness{"no fixed point", {}}.add("x0", fixture.x0));
    cfp.notes.push_back(s.failure.empty() ? "no route returned a fixed point" : s.failure);
    for (const auto& n : s.notes) cfp.notes.push_back(n);
  }
  out.push_back(std::move(cfp));
  out.push_back(check_uniqueness(pair, config.resolution, config.tol));

  if (fixture.expected.count("non_contraction")) {
    CheckReport r;
    r.check_name = "non_contraction";
    r.verdict = Verdict::Pass;
    for (double k : {0.5, 0.9, 0.99}) {
      auto w = non_contraction_witness(pair.space, pair.T, k);
      if (!w) {
        r.verdict = Verdict::Fail;
        r.notes.push_back("no witness for k = " + std::to_string(k));
        continue;
      }
      r.witnesses.push_back(Witness{"k = " + display_string(from_double(k)), {}}.add("x", w->first).add("y", w->second));
    }
    out.push_back(std::move(r));
  }
  run.solve = std::move(s);

  std::sort(out.begin(), out.end(),
            [](const CheckReport& a, const CheckReport& b) { return a.check_name < b.check_name; });
  for (const auto& r : out) {
    auto e = fixture.expected.find(r.check_name);
    if (e == fixture.expected.end()) continue;
    run.rows.push_back({r.check_name, e->second, r.verdict, r.margin});
    if (e->second != r.verdict) run.matches = false;
  }
  for (const auto& [name, v] : fixture.expected) {
    bool present = std::any_of(out.begin(), out.end(), [&](const CheckReport& r) { return r.check_name == name; });
    if (!present) {
      run.rows.push_back({name, v, Verdict::Unknown, std::nullopt});
      run.matches = false;
    }
  }
  return run;
}

}  // namespace cfp
