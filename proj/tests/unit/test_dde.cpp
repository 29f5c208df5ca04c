#include <cmath>

#include "doctest.h"
#include "support.hpp"

using namespace dde;
using ddetest::Rng;

namespace {

ScenarioDocument scenario(const std::string& file) { return load_scenario(ddetest::scenario_path(file)); }

CheckOptions sequential() {
  CheckOptions o;
  o.parallel = false;
  return o;
}

std::string verdict_fingerprint(const Verdict& v) {
  std::string out = v.compliant ? "compliant" : "non-compliant";
  for (const auto& c : v.clauses) {
    out += "|" + c.id + (c.pass ? "+" : "-") + (c.required ? "r" : "o") + c.summary;
    for (const auto& d : c.details) out += ";" + d;
  }
  return out;
}

}  // namespace

TEST_CASE("entity extraction golden values") {
  Signature sig;
  sig.declare_function({"jack", {}, "Object"});
  sig.declare_function({"mary", {}, "Object"});
  sig.declare_function({"sister", {"Object"}, "Object"});
  sig.declare_function({"hungry", {"Object"}, "Fluent"});
  sig.declare_function({"married", {"Object", "Object"}, "Fluent"});
  Term jack = parse_term("jack", sig), mary = parse_term("mary", sig), sm = parse_term("(sister mary)", sig);
  CHECK(entity_terms(parse_term("(hungry jack)", sig)) == std::set<Term>{jack});
  CHECK(entity_terms(parse_term("(married jack (sister mary))", sig)) == std::set<Term>{jack, sm, mary});
  CHECK_THROWS_AS(entity_terms(Term::apply("hungry", {Term::variable("x", "Object")}, "Fluent")), ContractError);
}

TEST_CASE("prune and retain partition the theory") {
  auto doc = scenario("trolley_switch.dde");
  Rng rng(5);
  auto universe = fluent_universe(doc.signature, 6);
  for (int i = 0; i < 60; ++i) {
    Term f = universe[std::uniform_int_distribution<std::size_t>(0, universe.size() - 1)(rng)];
    auto theta = entity_terms(f);
    auto kept = prune(doc.axioms, theta);
    auto dropped = retain(doc.axioms, theta);
    CHECK(kept.size() + dropped.size() == doc.axioms.size());
    for (const auto& k : kept)
      for (const auto& t : theta) CHECK_FALSE(contains_term(k.formula, t));
    for (const auto& d : dropped) {
      bool any = false;
      for (const auto& t : theta) any = any || contains_term(d.formula, t);
      CHECK(any);
    }
    std::set<Term> fewer;
    if (!theta.empty()) fewer.insert(*theta.begin());
    CHECK(prune(doc.axioms, fewer).size() >= kept.size());
  }
  CHECK(prune(doc.axioms, {}).size() == doc.axioms.size());
}

TEST_CASE("means agrees with the brute-force oracle on micro-domains") {
  Rng rng(31337);
  Signature sig = ddetest::micro_signature();
  std::size_t pairs = 0, positives = 0, negatives = 0;
  for (int trial = 0; trial < 240; ++trial) {
    auto d = ddetest::random_micro_domain(rng, 3, 2, 1 + trial % 5);
    if (!ddetest::brute_force_states(d)) continue;
    auto theory = ddetest::micro_theory(d, sig);
    for (MeansMode mode : {MeansMode::Prose, MeansMode::Literal}) {
      CausalModel model(theory, sig, d.horizon, mode);
      std::vector<FluentLiteral> lits;
      for (const auto& f : d.fluents)
        for (std::int64_t y = 0; y <= d.horizon; ++y)
          for (bool pos : {true, false}) lits.push_back({f, y, pos});
      for (const auto& a : lits)
        for (const auto& b : lits) {
          auto expected = ddetest::oracle_means(d, a, b, mode);
          ++pairs;
          if (expected == ddetest::OracleMeans::Conflict) {
            CHECK_THROWS_AS(model.means(a, b), DomainError);
            continue;
          }
          bool got = model.means(a, b);
          CHECK_MESSAGE(got == (expected == ddetest::OracleMeans::True), std::string(a.to_string() + " > " + b.to_string()));
          (got ? positives : negatives)++;
        }
    }
  }
  CHECK(pairs > 50000);
  CHECK(positives > 1000);
  CHECK(negatives > 1000);
}

TEST_CASE("means on the push scenario") {
  auto doc = scenario("trolley_push.dde");
  Analysis a = analyze(doc);
  CausalModel model(a.acted_theory, doc.signature, a.acted, doc.interpretation.means);
  Term p3 = parse_term("(dead P3)", doc.signature);
  Term p1 = parse_term("(dead P1)", doc.signature);
  CHECK(model.means({p3, 3, true}, {p1, 4, false}));
  CHECK_FALSE(model.means({p3, 3, true}, {p1, 3, false}));
  CHECK(means(a.acted_theory, doc.signature, doc.horizon, {p3, 3, true}, {p1, 10, false}));
}

TEST_CASE("utility ledger itemizes trace differences") {
  auto doc = scenario("trolley_switch.dde");
  Analysis a = analyze(doc);
  auto onset = utility_ledger(a.profile, doc.utility, doc.time, doc.horizon, F2SumMode::Onset);
  REQUIRE(onset.entries.size() == 3);
  std::map<std::string, double> by;
  for (const auto& e : onset.entries) by[to_string(e.fluent)] = e.contribution;
  CHECK(by.at("(dead P3)") == -5);
  CHECK(by.at("(dead P1)") == 7);
  CHECK(by.at("(dead P2)") == 6);
  CHECK(onset.net == 8);

  auto literal = utility_ledger(a.profile, doc.utility, doc.time, doc.horizon, F2SumMode::Literal);
  CHECK(literal.net == 7);
  for (const auto& e : literal.entries) CHECK(e.from == doc.time + 1);
}

TEST_CASE("F2 ledger matches a re-summation over dumped traces") {
  for (const auto& path : ddetest::scenario_corpus()) {
    auto doc = load_scenario(path);
    Analysis a = analyze(doc);
    std::map<std::string, std::int64_t> first_acted, first_base;
    for (const auto& [y, f] : ddetest::parse_dump(a.acted.dump())) first_acted.emplace(f, y);
    for (const auto& [y, f] : ddetest::parse_dump(a.baseline.dump())) first_base.emplace(f, y);
    double net = 0;
    auto sum = [&](const std::string& f, std::int64_t from) {
      double s = 0;
      for (std::int64_t y = from; y <= doc.horizon; ++y) s += doc.utility(parse_term(f, doc.signature), y);
      return s;
    };
    for (const auto& [f, y] : first_acted)
      if (!first_base.count(f)) net += sum(f, y);
    for (const auto& [f, y] : first_base)
      if (!first_acted.count(f)) net -= sum(f, y);
    auto v = check_F2(doc, a.profile);
    CHECK(std::abs(v.ledger.net - net) < 1e-9);
    CHECK(v.pass == (net > doc.gamma));
  }
}

TEST_CASE("scenario verdicts") {
  auto s1 = dde_verdict(scenario("trolley_switch.dde"));
  CHECK(s1.compliant);
  CHECK(s1.failing().empty());
  for (const char* id : {"F1", "F2", "F3a", "F3b", "F4"}) CHECK(s1.clause(id)->pass);

  auto s2 = dde_verdict(scenario("trolley_push.dde"));
  CHECK_FALSE(s2.compliant);
  CHECK(s2.failing() == std::vector<std::string>{"F4"});

  auto doc = scenario("trolley_push.dde");
  doc.doctrine = Doctrine::DTE;
  auto dte = dde_verdict(doc);
  CHECK(dte.compliant);
  CHECK_FALSE(dte.clause("F4")->pass);
  CHECK_FALSE(dte.clause("F4")->required);
}

TEST_CASE("verdicts are deterministic and independent of parallelism") {
  for (const auto& path : ddetest::scenario_corpus()) {
    auto doc = load_scenario(path);
    auto a = verdict_fingerprint(dde_verdict(doc));
    CHECK(a == verdict_fingerprint(dde_verdict(doc)));
    CHECK(a == verdict_fingerprint(dde_verdict(doc, sequential())));
  }
}

TEST_CASE("raising gamma never turns a failing verdict compliant") {
  for (const auto& path : ddetest::scenario_corpus()) {
    auto doc = load_scenario(path);
    Analysis a = analyze(doc);
    bool previous = true;
    for (double g : {0.01, 0.5, 1.0, 4.0, 7.5, 8.0, 8.5, 20.0}) {
      doc.gamma = g;
      bool pass = check_F2(doc, a.profile).pass;
      CHECK((previous || !pass));
      previous = pass;
    }
    doc.gamma = 1000;
    CHECK_FALSE(dde_verdict(doc, sequential()).compliant);
  }
}

TEST_CASE("DDE compliance implies DTE compliance on random micro-scenarios") {
  Rng rng(4242);
  int dde_ok = 0, dte_only = 0, neither = 0;
  for (int i = 0; i < 100; ++i) {
    std::string text = ddetest::random_micro_scenario(rng, i);
    ScenarioDocument doc;
    try {
      doc = parse_scenario(text);
      analyze(doc);
    } catch (const DomainError&) {
      continue;
    }
    doc.doctrine = Doctrine::DDE;
    auto dde = dde_verdict(doc, sequential());
    doc.doctrine = Doctrine::DTE;
    auto dte = dde_verdict(doc, sequential());
    if (dde.compliant) CHECK_MESSAGE(dte.compliant, text);
    for (const char* id : {"F1", "F2", "F3a", "F3b", "F4"}) CHECK(dde.clause(id)->pass == dte.clause(id)->pass);
    if (dde.compliant) ++dde_ok;
    else if (dte.compliant) ++dte_only;
    else ++neither;
  }
  CHECK(dde_ok + dte_only + neither == 100);
  CHECK(dde_ok > 0);
  CHECK(dte_only > 0);
  CHECK(neither > 0);
  MESSAGE("dde-compliant " << dde_ok << ", dte-only " << dte_only << ", neither " << neither);
}

TEST_CASE("interpretation modes are honoured") {
  auto doc = scenario("trolley_switch.dde");
  doc.interpretation.f2_sum = F2SumMode::Literal;
  auto v = dde_verdict(doc);
  CHECK(v.clause("F2")->ledger.net == 7);
  doc.interpretation.f1 = F1Mode::Literal;
  CHECK(dde_verdict(doc).clause("F1")->pass);
  doc.interpretation.means = MeansMode::Literal;
  CHECK(dde_verdict(doc).clause("F4") != nullptr);
}

TEST_CASE("forbidden actions fail F1") {
  auto doc = scenario("trolley_switch.dde");
  doc.axioms.push_back({"forbid",
                        parse_formula("(O I now sigma (not (happens (action I (switch trolley track1 track2)) 3)))",
                                      doc.signature),
                        0});
  auto v = check_F1(doc);
  CHECK_FALSE(v.pass);
  CHECK(v.evidence_kind == "proof");
}

TEST_CASE("intending a bad effect fails F3b") {
  auto doc = scenario("trolley_switch.dde");
  doc.axioms.push_back({"wants-harm", parse_formula("(I I now (holds (dead P3) 6))", doc.signature), 0});
  Analysis a = analyze(doc);
  CHECK_FALSE(check_F3b(doc, a.profile).pass);
  CHECK_FALSE(dde_verdict(doc).compliant);
}

TEST_CASE("sweeps enumerate every cell") {
  auto doc = scenario("trolley_switch.dde");
  Term sw = doc.action_type;
  auto s = agent_compliance_sweep(doc, {sw}, {1, 2, 3}, sequential());
  REQUIRE(s.cells.size() == 3);
  CHECK(s.cells[2].verdict.compliant);
  CHECK(s.cells[0].time == 1);
  CHECK(s.all_compliant == std::all_of(s.cells.begin(), s.cells.end(),
                                       [](const SweepCell& c) { return c.verdict.compliant; }));
  auto empty = agent_compliance_sweep(doc, {}, {}, sequential());
  CHECK(empty.all_compliant);
  CHECK(empty.cells.empty());
  CHECK_FALSE(empty.warnings.empty());
}

TEST_CASE("text and JSON reports carry the same verdict") {
  for (const auto& path : ddetest::scenario_corpus()) {
    auto v = dde_verdict(load_scenario(path));
    std::string text = to_text(v), json = to_json(v);
    CHECK(json.find(std::string("\"compliant\": ") + (v.compliant ? "true" : "false")) != std::string::npos);
    CHECK(text.find(v.compliant ? "overall compliant" : "overall non-compliant") != std::string::npos);
    for (const auto& c : v.clauses) {
      CHECK(text.find(c.id + std::string(c.id.size() == 2 ? "   " : "  ") + (c.pass ? "pass" : "FAIL")) !=
            std::string::npos);
    }
  }
}
