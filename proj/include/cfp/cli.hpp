#pragma once

#include "cfp/config.hpp"
#include "cfp/gallery.hpp"
#include "cfp/report.hpp"
#include "cfp/solver.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace cfp {

inline constexpr const char* kToolVersion = "1.0.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;  // hypothesis or convergence failure
inline constexpr int kExitUsage = 2;    // usage, I/O or parse error

nlohmann::json to_json(const RunConfig& c);
nlohmann::json to_json(const SolveResult& s);
nlohmann::json to_json(const FixtureRun& run);

/// Parses "0.5", "2/3", "(1, 1/2, 0)" or "1,1/2,0". A scalar on a sequence
/// space is broadcast to every coordinate. Throws std::invalid_argument.
Point parse_point(const std::string& text, const MetricSpace& space);

/// Checks run by `verify`, in report order.
std::vector<CheckReport> verify_all(const MapFile& file, const RunConfig& config);

int cmd_verify(const std::string& mapfile, const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_solve(const std::string& mapfile, const std::string& x0, const std::string& route, const RunConfig& config,
              std::ostream& out, std::ostream& err);
int cmd_gallery(const std::vector<std::string>& ids, const RunConfig& config, std::ostream& out, std::ostream& err);

/// Full command-line entry point (argument parsing included).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace cfp
