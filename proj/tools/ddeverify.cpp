#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "dde/dde.hpp"
#include "dde/strips.hpp"
#include "json.hpp"

namespace {

enum Exit { kOk = 0, kNegative = 1, kUsage = 2, kResource = 3 };

struct Common {
  std::string scenario;
  std::string mode;
  std::optional<std::int64_t> horizon;
  std::optional<double> gamma;
  std::string means_mode;
  std::string f1_mode;
  std::string f2_sum;
  std::int64_t budget = 50000;
  std::string format = "text";
  std::string trace_dump;
};

dde::ScenarioDocument load(const Common& c) {
  dde::ScenarioDocument doc = dde::load_scenario(c.scenario);
  if (!c.mode.empty()) doc.doctrine = dde::parse_doctrine(c.mode);
  if (!c.means_mode.empty()) doc.interpretation.means = dde::parse_means_mode(c.means_mode);
  if (!c.f1_mode.empty()) doc.interpretation.f1 = dde::parse_f1_mode(c.f1_mode);
  if (!c.f2_sum.empty()) doc.interpretation.f2_sum = dde::parse_f2_sum_mode(c.f2_sum);
  if (c.horizon) doc.horizon = *c.horizon;
  if (c.gamma) doc.gamma = *c.gamma;
  dde::validate(doc);
  return doc;
}

dde::CheckOptions check_options(const Common& c) {
  dde::CheckOptions o;
  o.modal.fo_budget = c.budget;
  return o;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dde::ParseError("cannot write '" + path + "'");
  out << text;
}

int verdict_exit(const dde::Verdict& v) {
  if (!v.compliant) return kNegative;
  return v.approximate() ? kResource : kOk;
}

void print(const dde::Verdict& v, const std::string& format) {
  std::cout << (format == "json" ? dde::to_json(v) + "\n" : dde::to_text(v));
}

int run_verify(const Common& c) {
  auto doc = load(c);
  if (!c.trace_dump.empty()) write_file(c.trace_dump, dde::analyze(doc).acted.dump());
  auto v = dde::dde_verdict(doc, check_options(c));
  print(v, c.format);
  return verdict_exit(v);
}

int run_simulate(const Common& c, bool baseline) {
  auto doc = load(c);
  auto a = dde::analyze(doc);
  const dde::Trace& tr = baseline ? a.baseline : a.acted;
  if (!c.trace_dump.empty()) write_file(c.trace_dump, tr.dump());
  if (c.format == "json") {
    nlohmann::json states = nlohmann::json::array();
    for (std::int64_t y = 0; y <= tr.horizon(); ++y) {
      std::vector<std::string> fs;
      for (const auto& f : tr.state(y)) fs.push_back(dde::to_string(f));
      std::sort(fs.begin(), fs.end());
      states.push_back({{"time", y}, {"fluents", fs}});
    }
    nlohmann::json initiated = nlohmann::json::object(), terminated = nlohmann::json::object();
    for (const auto& [f, y] : a.profile.initiated) initiated[dde::to_string(f)] = y;
    for (const auto& [f, y] : a.profile.terminated) terminated[dde::to_string(f)] = y;
    nlohmann::json j{{"scenario", doc.name},
                     {"trace", baseline ? "baseline" : "acted"},
                     {"horizon", tr.horizon()},
                     {"states", states},
                     {"profile", {{"initiated", initiated}, {"terminated", terminated}}},
                     {"seconds", a.seconds}};
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << tr.dump();
  }
  return kOk;
}

int run_prove(const Common& c, const std::string& goal_text, const std::string& schemata_path, bool fo_only) {
  auto doc = load(c);
  dde::Formula goal = dde::parse_formula(goal_text, doc.signature);
  auto kb = doc.background();
  dde::ProofStatus status;
  nlohmann::json j{{"goal", dde::print_formula(goal)}};
  std::string text;
  if (fo_only) {
    dde::FoOptions fo{c.budget, &doc.signature, false};
    auto r = dde::fo_prove(kb, goal, fo);
    status = r.status;
    j["steps"] = r.steps_used;
    if (status == dde::ProofStatus::Proved) {
      j["replays"] = dde::replay_proof(r.proof, &doc.signature);
      text = r.proof.to_string();
    }
  } else {
    dde::ModalOptions m;
    m.fo_budget = c.budget;
    m.signature = &doc.signature;
    if (!schemata_path.empty()) {
      auto extra = dde::parse_schemata(dde::read_file(schemata_path), doc.signature);
      m.schemata.insert(m.schemata.end(), extra.begin(), extra.end());
    }
    auto r = dde::modal_prove(kb, goal, m);
    status = r.status;
    j["rounds"] = r.rounds;
    j["fo_steps"] = r.fo_steps;
    text = r.trace_text();
    if (status == dde::ProofStatus::Proved) j["replays"] = dde::replay_proof(r.proof, &doc.signature);
  }
  j["status"] = std::string(dde::to_string(status));
  if (c.format == "json") {
    j["trace"] = text;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << dde::to_string(status) << ": " << dde::print_formula(goal) << '\n' << text;
  }
  if (status == dde::ProofStatus::Proved) return kOk;
  return status == dde::ProofStatus::ResourceOut ? kResource : kNegative;
}

int run_sweep(const Common& c, const std::vector<std::string>& actions, const std::vector<std::int64_t>& times) {
  auto doc = load(c);
  std::vector<dde::Term> acts;
  for (const auto& a : actions) acts.push_back(dde::parse_term(a, doc.signature));
  if (acts.empty()) acts.push_back(doc.action_type);
  auto ts = times;
  if (ts.empty())
    for (std::int64_t t = 0; t < doc.horizon; ++t) ts.push_back(t);
  auto s = dde::agent_compliance_sweep(doc, acts, ts, check_options(c));
  std::cout << (c.format == "json" ? dde::to_json(s) + "\n" : dde::to_text(s));
  if (c.format == "json")
    for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
  return s.all_compliant ? kOk : kNegative;
}

int run_strips(const Common& c) {
  auto doc = dde::load_strips(c.scenario);
  if (!c.mode.empty()) doc.options.doctrine = dde::parse_doctrine(c.mode);
  if (c.gamma) doc.gamma = *c.gamma;
  auto v = dde::strips_dde_check(doc);
  print(v, c.format);
  return verdict_exit(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doctrine of double effect verifier"};
  app.require_subcommand(1);
  Common c;

  auto scenario = [&](CLI::App* sub) {
    sub->add_option("--scenario", c.scenario, "Scenario file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("--budget", c.budget, "Inference budget per first-order call")->check(CLI::PositiveNumber);
  };
  auto overrides = [&](CLI::App* sub) {
    sub->add_option("--horizon", c.horizon, "Override the horizon");
    sub->add_option("--gamma", c.gamma, "Override the threshold");
  };
  auto interpretation = [&](CLI::App* sub) {
    sub->add_option("--mode", c.mode, "Doctrine")->check(CLI::IsMember({"dde", "dte"}));
    sub->add_option("--means-mode", c.means_mode, "Means reading")->check(CLI::IsMember({"prose", "literal"}));
    sub->add_option("--f1-mode", c.f1_mode, "F1 reading")->check(CLI::IsMember({"standard", "literal"}));
    sub->add_option("--f2-sum", c.f2_sum, "F2 summation")->check(CLI::IsMember({"onset", "literal"}));
  };

  auto* verify = app.add_subcommand("verify", "Check a scenario against the doctrine");
  scenario(verify);
  overrides(verify);
  interpretation(verify);
  verify->add_option("--trace-dump", c.trace_dump, "Write the acted trace here");

  auto* simulate = app.add_subcommand("simulate", "Print the simulated trace");
  scenario(simulate);
  overrides(simulate);
  bool baseline = false;
  simulate->add_flag("--baseline", baseline, "The trace without the action");
  simulate->add_option("--trace-dump", c.trace_dump, "Also write the trace here");

  auto* prove = app.add_subcommand("prove", "Prove a goal from a scenario's axioms");
  scenario(prove);
  std::string goal, schemata;
  bool fo_only = false;
  prove->add_option("--goal", goal, "Goal formula")->required();
  prove->add_option("--schemata", schemata, "Additional inference schemata")->check(CLI::ExistingFile);
  prove->add_flag("--fo", fo_only, "First-order prover only");

  auto* sweep = app.add_subcommand("sweep", "Verify actions across performance times");
  scenario(sweep);
  overrides(sweep);
  interpretation(sweep);
  std::vector<std::string> actions;
  std::vector<std::int64_t> times;
  sweep->add_option("--action", actions, "Action type term (repeatable; default: the scenario's)");
  sweep->add_option("--time", times, "Performance time (repeatable; default: 0..horizon-1)");

  auto* strips = app.add_subcommand("strips-verify", "Check a STRIPS plan");
  strips->add_option("--scenario", c.scenario, "Plan file")->required()->check(CLI::ExistingFile);
  strips->add_option("--format", c.format, "Output format")->check(CLI::IsMember({"text", "json"}));
  strips->add_option("--mode", c.mode, "Doctrine")->check(CLI::IsMember({"dde", "dte"}));
  strips->add_option("--gamma", c.gamma, "Override the threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*verify) return run_verify(c);
    if (*simulate) return run_simulate(c, baseline);
    if (*prove) return run_prove(c, goal, schemata, fo_only);
    if (*sweep) return run_sweep(c, actions, times);
    if (*strips) return run_strips(c);
  } catch (const dde::ParseError& e) {
    std::cerr << c.scenario << ':' << (e.line() > 0 ? std::to_string(e.line()) + ":" + std::to_string(e.column()) + ":" : "")
              << " error: " << e.message() << '\n';
    return kUsage;
  } catch (const dde::Error& e) {
    std::cerr << c.scenario << ": error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
