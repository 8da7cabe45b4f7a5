#include "cfp/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <future>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace cfp {

void RunConfig::validate() const {
  if (resolution < 2) throw std::invalid_argument("resolution must be at least 2");
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (!(seq_tol > 0)) throw std::invalid_argument("seq_tol must be positive");
  if (horizon == 0) throw std::invalid_argument("horizon must be positive");
  if (max_iters && *max_iters == 0) throw std::invalid_argument("max_iters must be positive");
  if (seq_dim == 0 || seq_dim > MetricSpace::kMaxSeqDimension)
    throw std::invalid_argument("seq_dim must lie in 1..64");
}

nlohmann::json to_json(const RunConfig& c) {
  return {{"resolution", c.resolution},
          {"tol", c.tol},
          {"seq_tol", c.seq_tol},
          {"horizon", c.horizon},
          {"max_iters", c.max_iters ? nlohmann::json(*c.max_iters) : nlohmann::json(nullptr)},
          {"seq_dim", c.seq_dim},
          {"format", c.output_format == OutputFormat::Json ? "json" : "text"}};
}

nlohmann::json to_json(const SolveResult& s) {
  nlohmann::json j;
  j["route"] = to_string(s.route);
  j["fixed_point"] = s.fixed_point ? point_to_json(*s.fixed_point) : nlohmann::json(nullptr);
  if (s.residuals) {
    j["residuals"] = {{"f", exact_string(s.residuals->first)}, {"T", exact_string(s.residuals->second)}};
  } else {
    j["residuals"] = nullptr;
  }
  j["termination"] = to_string(s.trace.termination);
  j["steps"] = s.trace.steps;
  if (s.trace.failed_at) j["failed_at"] = *s.trace.failed_at;
  nlohmann::json d = nlohmann::json::array();
  const std::size_t n = s.trace.distances.size();
  for (std::size_t i = 0; i < n; ++i) {
    // Long traces keep the first and last 100 distances.
    if (n > 200 && i == 100) i = n - 100;
    d.push_back(display_string(s.trace.distances[i]));
  }
  j["distances"] = d;
  if (s.ea) {
    j["ea"] = {{"witness", {{"kind", to_string(s.ea->witness.kind)}, {"description", s.ea->witness.describe()}}},
               {"z", point_to_json(s.ea->z)},
               {"u", s.ea->u ? point_to_json(*s.ea->u) : nlohmann::json(nullptr)}};
  }
  j["failure"] = s.failure;
  j["notes"] = s.notes;
  return j;
}

nlohmann::json to_json(const FixtureRun& run) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : run.rows)
    rows.push_back({{"check", r.check},
                    {"expected", to_string(r.expected)},
                    {"actual", to_string(r.actual)},
                    {"margin", r.margin ? nlohmann::json(*r.margin) : nlohmann::json(nullptr)}});
  nlohmann::json reports = nlohmann::json::array();
  for (const auto& r : run.reports) reports.push_back(to_json(r));
  return {{"fixture", run.id},
          {"pass", run.matches},
          {"rows", rows},
          {"reports", reports},
          {"solve", run.solve ? to_json(*run.solve) : nlohmann::json(nullptr)}};
}

Point parse_point(const std::string& text, const MetricSpace& space) {
  std::string s = text;
  s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
  if (!s.empty() && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::vector<Rational> coords;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) coords.push_back(parse_rational(part));
  if (coords.empty()) throw std::invalid_argument("empty point");
  if (coords.size() == 1 && space.is_seq()) return broadcast(coords.front(), space.dimension());
  if (coords.size() != space.dimension())
    throw std::invalid_argument("point has " + std::to_string(coords.size()) + " coordinates, space dimension is " +
                                std::to_string(space.dimension()));
  return Point(std::move(coords));
}

namespace {

std::optional<AlteringFunction> phi_of(const MapFile& file) {
  if (!file.phi) return std::nullopt;
  return AlteringFunction(*file.phi);
}

MapPair pair_of(const MapFile& file, const RunConfig& config, bool seq_dim_given) {
  MetricSpace space = file.space;
  if (space.is_seq() && seq_dim_given) space = space.with_dimension(config.seq_dim);
  return bind_pair(space, file.map("f"), file.map("T"), phi_of(file));
}

nlohmann::json envelope(const RunConfig& config, const std::vector<CheckReport>& reports) {
  nlohmann::json j;
  j["tool_version"] = kToolVersion;
  j["config"] = to_json(config);
  nlohmann::json truncations = nlohmann::json::array();
  for (const auto& r : reports)
    if (r.has_note("truncated")) truncations.push_back(r.check_name);
  j["config"]["truncations"] = truncations;
  j["reports"] = nlohmann::json::array();
  for (const auto& r : reports) j["reports"].push_back(to_json(r));
  j["solve"] = nullptr;
  return j;
}

bool load(const std::string& path, MapFile& file, std::ostream& err) {
  try {
    file = load_map_file(path);
    return true;
  } catch (const ParseError& e) {
    err << path << ":" << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return false;
}

bool seq_dim_explicit = false;

void print_solve_text(const SolveResult& s, std::ostream& out) {
  out << "route: " << to_string(s.route) << "\n";
  if (s.fixed_point) {
    out << "fixed point: " << to_string(*s.fixed_point) << "\n";
  } else {
    out << "no fixed point\n";
  }
  if (s.residuals)
    out << "residuals: d(fz,z) = " << display_string(s.residuals->first)
        << ", d(Tz,z) = " << display_string(s.residuals->second) << "\n";
  out << "termination: " << to_string(s.trace.termination) << ", steps: " << s.trace.steps << "\n";
  const auto& d = s.trace.distances;
  if (!d.empty()) {
    out << "final distances:";
    for (std::size_t i = d.size() > 3 ? d.size() - 3 : 0; i < d.size(); ++i) out << " " << display_string(d[i]);
    out << "\n";
  }
  if (s.ea) {
    out << "witness: " << s.ea->witness.describe() << "\n";
    if (s.ea->u) out << "u = " << to_string(*s.ea->u) << ", z = " << to_string(s.ea->z) << "\n";
  }
  if (!s.failure.empty()) out << "failure: " << s.failure << "\n";
  for (const auto& n : s.notes) out << "note: " << n << "\n";
}

}  // namespace

std::vector<CheckReport> verify_all(const MapFile& file, const RunConfig& config) {
  const MapPair pair = pair_of(file, config, seq_dim_explicit);
  std::vector<CheckReport> out;
  if (pair.phi) {
    out.push_back(check_phi_membership(*pair.phi, config.resolution));
    out.push_back(check_beg_abbas_phi(*pair.phi, config.resolution));
  } else {
    CheckReport r;
    r.check_name = "phi_membership";
    r.notes.push_back("no phi given");
    out.push_back(r);
  }
  out.push_back(check_weakly_contractive(pair, config.resolution));
  if (file.psi) out.push_back(check_boyd_wong(pair, AlteringFunction(*file.psi), config.resolution));
  out.push_back(check_weak_compatibility(pair, config.tol, config.resolution));
  EaSearch ea = search_ea_witness(pair, config.tol, config.horizon, config.resolution);
  out.push_back(ea.report);
  if (ea.witness) out.push_back(check_compatibility(pair, *ea.witness, config.horizon, config.seq_tol));
  out.push_back(check_range_inclusion(pair, false, config.resolution, config.tol));
  out.push_back(check_range_inclusion(pair, true, config.resolution, config.tol));
  out.push_back(check_f_range_closed(pair));
  out.push_back(check_uniqueness(pair, config.resolution, config.tol));
  return out;
}

int cmd_verify(const std::string& mapfile, const RunConfig& config, std::ostream& out, std::ostream& err) {
  MapFile file;
  if (!load(mapfile, file, err)) return kExitUsage;
  std::vector<CheckReport> reports;
  try {
    reports = verify_all(file, config);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  // The (E.A) route hypotheses decide the exit code.
  bool ok = true;
  for (const auto& r : reports) {
    static const std::vector<std::string> relevant{"phi_membership", "weakly_contractive", "weak_compatibility",
                                                   "ea_witness", "f_range_closed"};
    if (std::find(relevant.begin(), relevant.end(), r.check_name) != relevant.end() && !r.passed()) ok = false;
  }
  if (config.output_format == OutputFormat::Json) {
    out << envelope(config, reports).dump(2) << "\n";
  } else {
    for (const auto& r : reports) out << format_text(r);
    out << (ok ? "all (E.A) route hypotheses hold\n" : "some hypothesis fails or is unknown\n");
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_solve(const std::string& mapfile, const std::string& x0, const std::string& route, const RunConfig& config,
              std::ostream& out, std::ostream& err) {
  MapFile file;
  if (!load(mapfile, file, err)) return kExitUsage;
  std::optional<Route> r;
  SolveResult s;
  std::vector<CheckReport> reports;
  try {
    if (route != "auto") r = parse_route(route);
    const MapPair pair = pair_of(file, config, seq_dim_explicit);
    const Point start = parse_point(x0, pair.space);
    if (!contains(pair.space, start)) throw std::invalid_argument("x0 = " + to_string(start) + " is not in the space");
    s = solve(pair, r, start, config);
    if (s.fixed_point) reports.push_back(verify_common_fixed_point(pair, *s.fixed_point, config.tol));
    if (s.trace.distances.size() >= 2) reports.push_back(check_monotone_decrease(s.trace, config.tol));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (config.output_format == OutputFormat::Json) {
    nlohmann::json j = envelope(config, reports);
    j["solve"] = to_json(s);
    out << j.dump(2) << "\n";
  } else {
    print_solve_text(s, out);
    for (const auto& rep : reports) out << format_text(rep);
  }
  if (!s.fixed_point && config.output_format == OutputFormat::Text) err << "no fixed point: " << s.failure << "\n";
  return s.fixed_point ? kExitOk : kExitFailure;
}

int cmd_gallery(const std::vector<std::string>& ids_in, const RunConfig& config, std::ostream& out,
                std::ostream& err) {
  std::vector<std::string> ids = ids_in.empty() ? fixture_ids() : ids_in;
  for (const auto& id : ids) {
    if (std::find(fixture_ids().begin(), fixture_ids().end(), id) == fixture_ids().end()) {
      err << "error: unknown fixture id '" << id << "'\n";
      return kExitUsage;
    }
  }
  // Deterministic order: the canonical id order.
  std::vector<std::string> ordered;
  for (const auto& id : fixture_ids())
    if (std::find(ids.begin(), ids.end(), id) != ids.end()) ordered.push_back(id);

  // Fixtures are independent; results are collected in id order.
  std::vector<std::future<FixtureRun>> pending;
  for (const auto& id : ordered)
    pending.push_back(std::async(std::launch::async,
                                 [&config, id] { return run_fixture(load_fixture(id, config.seq_dim), config); }));
  std::vector<FixtureRun> runs;
  try {
    for (auto& p : pending) runs.push_back(p.get());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  std::size_t passed = 0;
  for (const auto& r : runs) passed += r.matches ? 1 : 0;

  if (config.output_format == OutputFormat::Json) {
    nlohmann::json j;
    j["tool_version"] = kToolVersion;
    j["config"] = to_json(config);
    j["fixtures"] = nlohmann::json::array();
    for (const auto& r : runs) j["fixtures"].push_back(to_json(r));
    j["passed"] = passed;
    j["total"] = runs.size();
    out << j.dump(2) << "\n";
  } else {
    out << std::left << std::setw(8) << "fixture" << std::setw(22) << "check" << std::setw(10) << "expected"
        << std::setw(10) << "actual"
        << "margin\n";
    for (const auto& run : runs) {
      for (const auto& row : run.rows) {
        char m[32] = "-";
        if (row.margin) std::snprintf(m, sizeof m, "%.6g", *row.margin + 0.0);
        out << std::setw(8) << run.id << std::setw(22) << row.check << std::setw(10) << to_string(row.expected)
            << std::setw(10) << to_string(row.actual) << m << (row.expected == row.actual ? "" : "  MISMATCH")
            << "\n";
      }
      if (run.solve && run.solve->fixed_point)
        out << std::setw(8) << run.id << "fixed point " << to_string(*run.solve->fixed_point) << " via "
            << to_string(run.solve->route) << "\n";
    }
    out << passed << "/" << runs.size() << " fixtures pass\n";
  }
  return passed == runs.size() ? kExitOk : kExitFailure;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Common fixed points of selfmap pairs: hypothesis checks and solvers"};
  app.require_subcommand(1);
  RunConfig config;
  std::string format = "text";
  std::size_t max_iters = 0;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--resolution", config.resolution, "Grid resolution (>= 2)");
  app.add_option("--tol", config.tol, "Tolerance for exact-path checks");
  app.add_option("--seq-tol", config.seq_tol, "Tolerance for sequence limits");
  app.add_option("--horizon", config.horizon, "Number of sequence terms");
  app.add_option("--max-iters", max_iters, "Iteration cap (route default when omitted)");
  auto* dim_opt = app.add_option("--seq-dim", config.seq_dim, "Truncation dimension of sequence spaces");

  std::string file, x0, route = "auto";
  std::vector<std::string> ids;
  auto* verify = app.add_subcommand("verify", "Check every hypothesis for a map file");
  verify->add_option("file", file, "Map definition file")->required();
  auto* solve_cmd = app.add_subcommand("solve", "Compute a common fixed point");
  solve_cmd->add_option("file", file, "Map definition file")->required();
  solve_cmd->add_option("--x0", x0, "Starting point: scalar or (a, b, ...)")->required();
  solve_cmd->add_option("--route", route, "auto | jungck | ea | direct")
      ->check(CLI::IsMember({"auto", "jungck", "ea", "direct"}));
  auto* gallery = app.add_subcommand("gallery", "Run the bundled examples against their expected verdicts");
  gallery->add_option("--ids", ids, "Fixture ids (default: all)");
  for (auto* sub : {verify, solve_cmd, gallery}) sub->fallthrough();

  try {
    app.parse(argc, argv);
    config.output_format = format == "json" ? OutputFormat::Json : OutputFormat::Text;
    if (max_iters) config.max_iters = max_iters;
    config.validate();
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  seq_dim_explicit = dim_opt->count() > 0;

  if (verify->parsed()) return cmd_verify(file, config, out, err);
  if (solve_cmd->parsed()) return cmd_solve(file, x0, route, config, out, err);
  return cmd_gallery(ids, config, out, err);
}

}  // namespace cfp
