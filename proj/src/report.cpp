#include "cfp/report.hpp"

#include <cstdio>
#include <stdexcept>

namespace cfp {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Unknown:
      return "unknown";
  }
  return "unknown";
}

Verdict parse_verdict(const std::string& s) {
  if (s == "pass") return Verdict::Pass;
  if (s == "fail") return Verdict::Fail;
  if (s == "unknown") return Verdict::Unknown;
  throw std::invalid_argument("unknown verdict '" + s + "'");
}

Witness& Witness::add(std::string name, Point value) {
  entries.push_back({std::move(name), std::move(value)});
  return *this;
}

const Point& Witness::at(const std::string& name) const {
  for (const auto& e : entries)
    if (e.name == name) return e.value;
  throw std::out_of_range("witness has no entry '" + name + "'");
}

bool CheckReport::has_note(const std::string& fragment) const {
  for (const auto& n : notes)
    if (n.find(fragment) != std::string::npos) return true;
  return false;
}

// Points are stored exactly ("2/3") next to a decimal view for readers.
nlohmann::json point_to_json(const Point& p) {
  nlohmann::json exact = nlohmann::json::array(), approx = nlohmann::json::array();
  for (const auto& c : p.coords) {
    exact.push_back(exact_string(c));
    approx.push_back(to_double(c));
  }
  return {{"exact", exact}, {"approx", approx}};
}

Point point_from_json(const nlohmann::json& j) {
  std::vector<Rational> coords;
  for (const auto& c : j.at("exact")) coords.push_back(parse_rational(c.get<std::string>()));
  return Point(std::move(coords));
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json j;
  j["check"] = r.check_name;
  j["verdict"] = to_string(r.verdict);
  j["margin"] = r.margin ? nlohmann::json(*r.margin) : nlohmann::json(nullptr);
  j["witnesses"] = nlohmann::json::array();
  for (const auto& w : r.witnesses) {
    nlohmann::json entries = nlohmann::json::array();
    for (const auto& e : w.entries) entries.push_back({{"name", e.name}, {"value", point_to_json(e.value)}});
    j["witnesses"].push_back({{"label", w.label}, {"entries", entries}});
  }
  j["notes"] = r.notes;
  return j;
}

CheckReport report_from_json(const nlohmann::json& j) {
  CheckReport r;
  r.check_name = j.at("check").get<std::string>();
  r.verdict = parse_verdict(j.at("verdict").get<std::string>());
  if (j.contains("margin") && !j.at("margin").is_null()) r.margin = j.at("margin").get<double>();
  for (const auto& w : j.value("witnesses", nlohmann::json::array())) {
    Witness wit;
    wit.label = w.value("label", "");
    for (const auto& e : w.at("entries")) wit.add(e.at("name").get<std::string>(), point_from_json(e.at("value")));
    r.witnesses.push_back(std::move(wit));
  }
  r.notes = j.value("notes", std::vector<std::string>{});
  return r;
}

std::string format_text(const CheckReport& r) {
  std::string out = r.check_name + ": " + to_string(r.verdict);
  if (r.margin) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", *r.margin + 0.0);
    out += " (margin " + std::string(buf) + ")";
  }
  out += "\n";
  for (const auto& w : r.witnesses) {
    out += "  witness";
    if (!w.label.empty()) out += " [" + w.label + "]";
    out += ":";
    for (std::size_t i = 0; i < w.entries.size(); ++i)
      out += (i ? ", " : " ") + w.entries[i].name + " = " + to_string(w.entries[i].value);
    out += "\n";
  }
  for (const auto& n : r.notes) out += "  note: " + n + "\n";
  return out;
}

}  // namespace cfp
