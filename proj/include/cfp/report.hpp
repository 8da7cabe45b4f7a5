#pragma once

#include "cfp/metric.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace cfp {

enum class Verdict { Pass, Fail, Unknown };

std::string to_string(Verdict v);
/// Inverse of to_string; throws std::invalid_argument.
Verdict parse_verdict(const std::string& s);

/// A named point or value attached to a witness ("x", "f(x)", "slack", ...).
struct WitnessEntry {
  std::string name;
  Point value;
  friend bool operator==(const WitnessEntry&, const WitnessEntry&) = default;
};

struct Witness {
  std::string label;
  std::vector<WitnessEntry> entries;

  Witness& add(std::string name, Point value);
  Witness& add(std::string name, const Rational& value) { return add(std::move(name), Point(value)); }
  /// First entry with the given name; throws std::out_of_range.
  const Point& at(const std::string& name) const;

  friend bool operator==(const Witness&, const Witness&) = default;
};

struct CheckReport {
  std::string check_name;
  Verdict verdict = Verdict::Unknown;
  /// Extremal signed slack over the samples (absent when nothing was measured).
  std::optional<double> margin;
  std::vector<Witness> witnesses;
  std::vector<std::string> notes;

  bool passed() const { return verdict == Verdict::Pass; }
  bool has_note(const std::string& fragment) const;

  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

nlohmann::json point_to_json(const Point& p);
Point point_from_json(const nlohmann::json& j);

nlohmann::json to_json(const CheckReport& r);
CheckReport report_from_json(const nlohmann::json& j);

/// Multi-line human-readable rendering; exact rationals where available.
std::string format_text(const CheckReport& r);

}  // namespace cfp
