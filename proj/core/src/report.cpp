#include <iomanip>
#include <sstream>

#include "dde/dde.hpp"
#include "json.hpp"

namespace dde {

namespace {

using nlohmann::json;

json clause_json(const ClauseVerdict& c) {
  json j{{"id", c.id},
         {"pass", c.pass},
         {"required", c.required},
         {"approximate", c.approximate},
         {"evidence", {{"kind", c.evidence_kind}, {"summary", c.summary}, {"details", c.details}}},
         {"seconds", c.seconds}};
  if (c.evidence_kind == "ledger" || !c.ledger.entries.empty()) {
    json entries = json::array();
    for (const auto& e : c.ledger.entries) {
      entries.push_back({{"fluent", to_string(e.fluent)},
                         {"set", e.initiated ? "initiated" : "terminated"},
                         {"from", e.from},
                         {"to", e.to},
                         {"contribution", e.contribution}});
    }
    j["ledger"] = {{"entries", entries}, {"net", c.ledger.net}};
  } else {
    j["ledger"] = nullptr;
  }
  return j;
}

json verdict_json(const Verdict& v) {
  json clauses = json::array();
  for (const auto& c : v.clauses) clauses.push_back(clause_json(c));
  return {{"scenario", v.scenario},
          {"doctrine", std::string(to_string(v.doctrine))},
          {"compliant", v.compliant},
          {"approximate", v.approximate()},
          {"failing", v.failing()},
          {"clauses", clauses},
          {"timing", {{"simulation", v.simulation_seconds}, {"total", v.total_seconds}}},
          {"warnings", v.warnings}};
}

}  // namespace

std::string to_text(const Verdict& v) {
  std::ostringstream os;
  os << "scenario " << (v.scenario.empty() ? "-" : v.scenario) << "  doctrine " << to_string(v.doctrine) << '\n';
  for (const auto& c : v.clauses) {
    os << std::left << std::setw(4) << c.id << ' ' << (c.pass ? "pass" : "FAIL");
    if (!c.required) os << " (not required)";
    if (c.approximate) os << " (approximate)";
    os << "  " << c.summary << "  [" << std::fixed << std::setprecision(3) << c.seconds << " s]\n";
    os.unsetf(std::ios::fixed);
    os << std::setprecision(6);
    for (const auto& d : c.details) os << "       " << d << '\n';
  }
  os << "overall " << (v.compliant ? "compliant" : "non-compliant");
  auto failing = v.failing();
  if (!failing.empty()) {
    os << " (failing:";
    for (const auto& f : failing) os << ' ' << f;
    os << ')';
  }
  os << '\n' << std::fixed << std::setprecision(3) << "timing simulation " << v.simulation_seconds << " s, total "
     << v.total_seconds << " s\n";
  for (const auto& w : v.warnings) os << "warning: " << w << '\n';
  return os.str();
}

std::string to_json(const Verdict& v, int indent) { return verdict_json(v).dump(indent); }

std::string to_text(const SweepResult& s) {
  std::ostringstream os;
  for (const auto& c : s.cells) {
    os << to_string(c.action_type) << " @" << c.time << ": " << (c.verdict.compliant ? "compliant" : "non-compliant");
    auto failing = c.verdict.failing();
    for (const auto& f : failing) os << ' ' << f;
    os << '\n';
  }
  os << "all compliant: " << (s.all_compliant ? "yes" : "no") << '\n';
  for (const auto& w : s.warnings) os << "warning: " << w << '\n';
  return os.str();
}

std::string to_json(const SweepResult& s, int indent) {
  json cells = json::array();
  for (const auto& c : s.cells)
    cells.push_back({{"action", to_string(c.action_type)}, {"time", c.time}, {"verdict", verdict_json(c.verdict)}});
  return json{{"cells", cells}, {"all_compliant", s.all_compliant}, {"warnings", s.warnings}}.dump(indent);
}

}  // namespace dde
