#include "doctest.h"
#include "support.hpp"

using namespace dde;
using ddetest::Rng;

namespace {

StripsDocument strips(const std::string& file) { return load_strips(ddetest::scenario_path(file)); }

}  // namespace

TEST_CASE("plan execution agrees with a brute-force simulator") {
  Rng rng(77);
  int valid = 0, invalid = 0;
  for (int i = 0; i < 500; ++i) {
    auto c = ddetest::random_strips_case(rng, 6, 5);
    auto expected = ddetest::brute_force_plan(c);
    Plan p{c.plan, c.initial, {}};
    if (!expected) {
      ++invalid;
      CHECK_THROWS_AS(execute_plan(p), DomainError);
      continue;
    }
    ++valid;
    CHECK(execute_plan(p) == *expected);
  }
  CHECK(valid > 100);
  CHECK(invalid > 10);
}

TEST_CASE("plan means follows precondition-to-effect order") {
  Rng rng(78);
  for (int i = 0; i < 300; ++i) {
    auto c = ddetest::random_strips_case(rng, 6, 5);
    Plan p{c.plan, c.initial, {}};
    for (int x = 0; x < 5; ++x)
      for (int y = 0; y < 5; ++y) {
        Term e1 = ddetest::strips_atom(x), e2 = ddetest::strips_atom(y);
        bool expected = false;
        for (std::size_t j = 0; j < c.plan.size(); ++j)
          for (std::size_t k = 0; k < j; ++k) expected = expected || (c.plan[k].pre.count(e1) && c.plan[j].add.count(e2));
        CHECK(plan_means(p, e1, e2) == expected);
      }
  }
}

TEST_CASE("STRIPS utility ledger compares final states") {
  Rng rng(79);
  for (int i = 0; i < 200; ++i) {
    auto c = ddetest::random_strips_case(rng, 6, 5);
    auto states = ddetest::brute_force_plan(c);
    if (!states) continue;
    std::vector<UtilityRule> rules;
    for (int k = 0; k < 5; ++k)
      rules.push_back({ddetest::strips_atom(k), static_cast<double>(static_cast<int>(rng() % 5) - 2)});
    UtilityFunction mu(rules, 0);
    double expected = 0;
    const auto& last = states->back();
    for (const auto& a : last)
      if (!c.initial.count(a)) expected += mu(a, 0);
    for (const auto& a : c.initial)
      if (!last.count(a)) expected -= mu(a, 0);
    auto v = strips_dde_check(Plan{c.plan, c.initial, {}}, {}, mu, 0.5, {});
    CHECK(v.clause("F2")->ledger.net == doctest::Approx(expected));
    CHECK(v.clause("F2")->pass == (expected > 0.5));
  }
}

TEST_CASE("STRIPS trolley verdicts mirror the event-calculus ones") {
  auto sw = strips_dde_check(strips("trolley_switch.strips"));
  CHECK(sw.compliant);
  CHECK(sw.failing().empty());
  auto push = strips_dde_check(strips("trolley_push.strips"));
  CHECK_FALSE(push.compliant);
  CHECK(push.failing() == std::vector<std::string>{"F4"});

  auto doc = strips("trolley_push.strips");
  doc.options.doctrine = Doctrine::DTE;
  CHECK(strips_dde_check(doc).compliant);
}

TEST_CASE("gray-box assertions drive F1 and F3") {
  auto doc = strips("trolley_switch.strips");
  doc.graybox.prohibitions.push_back(doc.plan.actions.front().name);
  CHECK_FALSE(strips_dde_check(doc).clause("F1")->pass);

  doc = strips("trolley_switch.strips");
  doc.plan.goal.clear();
  doc.graybox.intentions.clear();
  CHECK_FALSE(strips_dde_check(doc).clause("F3a")->pass);

  doc = strips("trolley_push.strips");
  Term dead_p3 = Term::apply("dead", {Term::constant("P3", sort::kAny)}, sort::kAny);
  doc.graybox.intentions.push_back({"I", 0, dead_p3, true});
  CHECK_FALSE(strips_dde_check(doc).clause("F3b")->pass);
}

TEST_CASE("STRIPS parse errors are positioned") {
  try {
    parse_strips("(DOMAIN (action a (pre) (add x) (del)))\n(PROBLEM (init) (gamma 0.5))\n(PLAN a b)");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
  }
  CHECK_THROWS_AS(parse_strips("(DOMAIN (action a (pre (not x)) (add) (del)))"), ParseError);

  auto doc = parse_strips("(DOMAIN (action go (pre ready) (add done) (del)))\n(PROBLEM (init) (gamma 0.5))\n(PLAN go)");
  try {
    strips_dde_check(doc);
    FAIL("expected a domain error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find("ready") != std::string::npos);
  }
}
