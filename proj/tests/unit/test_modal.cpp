#include "doctest.h"
#include "support.hpp"

using namespace dde;

namespace {

Signature modal_signature() {
  Signature sig;
  sig.declare_function({"a", {}, "Agent"});
  sig.declare_function({"b", {}, "Agent"});
  sig.declare_function({"now", {}, "Moment"});
  sig.declare_function({"p", {}, "Boolean"});
  sig.declare_function({"q", {}, "Boolean"});
  sig.declare_function({"r", {}, "Boolean"});
  sig.declare_function({"o", {}, "Object"});
  sig.declare_function({"good", {"Object"}, "Boolean"});
  sig.declare_function({"wave", {}, "ActionType"});
  return sig;
}

struct Fixture {
  Signature sig = modal_signature();

  Formula fm(const std::string& s) const { return parse_formula(s, sig); }

  std::vector<Derivation> step(const std::vector<std::string>& kb) const {
    std::vector<Formula> fs;
    for (const auto& k : kb) fs.push_back(fm(k));
    ModalOptions opts;
    opts.signature = &sig;
    return apply_schemata(fs, builtin_schemata(), opts);
  }

  bool derives(const std::vector<std::string>& kb, const std::string& rule, const std::string& conclusion) const {
    Formula c = fm(conclusion);
    for (const auto& d : step(kb))
      if (d.rule == rule && alpha_equivalent(d.conclusion, c)) return true;
    return false;
  }
};

const std::string kChi =
    "(and (not (exists ((t Moment)) (holds (dead P1) t))) (not (exists ((t Moment)) (holds (dead P2) t))))";

}  // namespace

TEST_CASE_FIXTURE(Fixture, "each built-in schema fires") {
  CHECK(derives({"(P a 1 p)"}, "R1", "(C 1 (implies (P a 1 p) (K a 1 p)))"));
  CHECK(derives({"(K a 1 p)"}, "R2", "(C 1 (implies (K a 1 p) (B a 1 p)))"));
  CHECK(derives({"(K a 1 p)"}, "R4", "p"));
  CHECK(derives({"(K a 1 (implies p q))", "(K a 2 p)"}, "R5", "(K a 2 q)"));
  CHECK(derives({"(B a 3 (implies p q))", "(B a 2 p)"}, "R6", "(B a 3 q)"));
  CHECK(derives({"(C 1 (implies p q))", "(C 2 p)"}, "R7", "(C 2 q)"));
  CHECK(derives({"(C 1 (iff p q))", "(C 1 (not q))"}, "R9", "(C 1 (not p))"));
  CHECK(derives({"(S a b 1 p)"}, "R12", "(B b 1 (B a 1 p))"));
  CHECK(derives({"(I a 1 (happens (action a wave) 4))"}, "R13", "(P a 1 (happens (action a wave) 1))"));
  CHECK(derives({"(B a now q)", "(B a now (O a now q (and r p)))", "(O a now q (and r p))"}, "R14", "(K a now (I a now (and r p)))"));
}

TEST_CASE_FIXTURE(Fixture, "native schemata fire") {
  CHECK(derives({"(C 1 p)", "(K a 2 q)"}, "R3", "(K a 2 p)"));
  CHECK(derives({"(C 1 (forall ((x Object)) (good x)))", "(K a 1 (good o))"}, "R8", "(C 1 (good o))"));
  CHECK(derives({"(C 1 (implies (and p q) r))"}, "R10", "(C 1 (implies p (implies q r)))"));

  ModalOptions opts;
  opts.signature = &sig;
  auto rk = modal_prove({fm("(K a 1 (and p q))")}, fm("(K a 1 p)"), opts);
  CHECK(rk.status == ProofStatus::Proved);
  CHECK(rk.uses_rule("RK"));
  auto rb = modal_prove({fm("(B a 1 (and p q))")}, fm("(B a 1 q)"), opts);
  CHECK(rb.status == ProofStatus::Proved);
  CHECK(rb.uses_rule("RB"));
}

TEST_CASE_FIXTURE(Fixture, "schemata do not fire without their premises") {
  CHECK_FALSE(derives({"(B a 1 p)"}, "R4", "p"));
  CHECK_FALSE(derives({"(K a 1 (implies p q))", "(K b 2 p)"}, "R5", "(K a 2 q)"));
  CHECK_FALSE(derives({"(I a 1 (happens (action b wave) 4))"}, "R13", "(P a 1 (happens (action b wave) 1))"));
  CHECK_FALSE(derives({"(B a now q)", "(O a now q (and r p))"}, "R14", "(K a now (I a now (and r p)))"));
}

TEST_CASE("intention of the obligated outcome via R14") {
  auto doc = load_scenario(ddetest::scenario_path("trolley_switch.dde"));
  std::vector<Formula> premises;
  for (const auto& a : doc.axioms)
    if (a.name == "knows-situation" || a.name == "believes-obligation" || a.name == "obligation")
      premises.push_back(a.formula);
  REQUIRE(premises.size() == 3);
  Formula goal = parse_formula("(I I now " + kChi + ")", doc.signature);
  ModalOptions opts;
  opts.signature = &doc.signature;
  auto r = modal_prove(premises, goal, opts);
  REQUIRE(r.status == ProofStatus::Proved);
  CHECK(r.uses_rule("R14"));
  CHECK(r.trace_text().find("R14") != std::string::npos);
  CHECK(replay_proof(r.proof, &doc.signature));
}

TEST_CASE("shadowing blocks substitution into modal contexts") {
  Signature sig;
  sig.declare_function({"a", {}, "Agent"});
  sig.declare_function({"t0", {}, "Moment"});
  sig.declare_function({"knife", {}, "Object"});
  sig.declare_function({"moe", {}, "Object"});
  sig.declare_function({"owner", {"Object"}, "Object"});
  sig.declare_function({"killer", {"Object"}, "Boolean"});
  std::vector<Formula> kb{parse_formula("(K a t0 (killer (owner knife)))", sig),
                          parse_formula("(not (K a t0 (killer moe)))", sig), parse_formula("(= moe (owner knife))", sig)};
  ModalOptions opts;
  opts.signature = &sig;
  auto r = modal_prove(kb, Formula::truth(false), opts);
  CHECK(r.status == ProofStatus::NotProved);
  CHECK(r.rounds < opts.max_rounds);

  auto [shadowed, table] = shadow(kb);
  CHECK(table.size() == 2);
  CHECK(table.unshadow(shadowed[0]) == kb[0]);
  CHECK(table.lookup(shadowed[0].term()).has_value());
}

TEST_CASE("alpha-equivalent modal formulas share a shadow atom") {
  Signature sig = modal_signature();
  ShadowTable t;
  Formula x = t.shadow(parse_formula("(K a 1 (forall ((x Object)) (good x)))", sig));
  Formula y = t.shadow(parse_formula("(K a 1 (forall ((y Object)) (good y)))", sig));
  CHECK(x == y);
  CHECK(t.size() == 1);
}

TEST_CASE("schema definitions are validated") {
  CHECK(parse_schemata("(rule X (premises (K ?a ?t ?p)) (conclusion (B ?a ?t ?p)))").size() == 1);
  CHECK_THROWS_AS(parse_schemata("(rule X (premises (K ?a ?t ?p)) (conclusion (B ?a ?t ?q)))"), ConfigError);
  CHECK_THROWS_AS(parse_schemata("(rule X (conclusion p))"), Error);
  CHECK(builtin_schemata().size() == 10);

  Signature sig = modal_signature();
  ModalOptions opts;
  opts.signature = &sig;
  opts.schemata.push_back(parse_schemata("(rule DK (premises (D ?a ?t ?p)) (conclusion (K ?a ?t ?p)))").front());
  sig.declare_function({"lit", {}, "Fluent"});
  auto r = modal_prove({parse_formula("(D a 1 (holds lit 2))", sig)}, parse_formula("(holds lit 2)", sig), opts);
  CHECK(r.status == ProofStatus::Proved);
  CHECK(r.uses_rule("DK"));
}

TEST_CASE("modal proofs replay") {
  Signature sig = modal_signature();
  ModalOptions opts;
  opts.signature = &sig;
  auto r = modal_prove({parse_formula("(K a 1 (implies p q))", sig), parse_formula("(K a 1 p)", sig)},
                       parse_formula("q", sig), opts);
  REQUIRE(r.status == ProofStatus::Proved);
  CHECK(replay_proof(r.proof, &sig));
}
