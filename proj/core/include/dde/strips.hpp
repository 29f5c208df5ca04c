#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dde/dde.hpp"

namespace dde {

/// Ground STRIPS operator; atoms are untyped terms.
struct StripsAction {
  std::string name;
  std::set<Term> pre;
  std::set<Term> add;
  std::set<Term> del;
};

struct Plan {
  std::vector<StripsAction> actions;
  std::set<Term> initial;
  /// Declared goal as literals (atom, positive).
  std::vector<std::pair<Term, bool>> goal;
};

struct GrayBoxIntention {
  std::string agent;
  std::int64_t time = 0;
  Term atom;
  bool positive = true;
};

/// What the system exposes about itself: intentions and prohibited actions.
struct GrayBoxAssertions {
  std::vector<GrayBoxIntention> intentions;
  std::vector<std::string> prohibitions;
};

/// s_{i+1} = s_i ∪ add(a_i) − del(a_i). Throws DomainError naming the action
/// index and the missing atom when a precondition fails.
std::vector<std::set<Term>> execute_plan(const Plan& p);
/// Some action strictly before another has e1 as a precondition while the
/// later one adds e2.
bool plan_means(const Plan& p, const Term& e1, const Term& e2);

struct StripsCheckOptions {
  /// The course of events without the agent's intervention; α_I/α_T compare
  /// final states against it (empty: the initial state).
  std::vector<StripsAction> baseline;
  Doctrine doctrine = Doctrine::DDE;
};

Verdict strips_dde_check(const Plan& p, const GrayBoxAssertions& gb, const UtilityFunction& mu, double gamma,
                         const std::set<std::string>& forbidden, const StripsCheckOptions& opts = {});

/// Sections DOMAIN, PROBLEM, PLAN, GRAYBOX:
///   (DOMAIN (action name (pre a...) (add a...) (del a...)) ...)
///   (PROBLEM (name n) (init a...) (goal lit...) (baseline name...)
///            (utility (pattern v)... (default v)) (gamma g) (forbidden name...) (doctrine dde|dte))
///   (PLAN name...)
///   (GRAYBOX (intends agent time lit)... (prohibits name)...)
struct StripsDocument {
  std::string name;
  std::vector<StripsAction> domain;
  Plan plan;
  GrayBoxAssertions graybox;
  UtilityFunction utility;
  double gamma = 0;
  std::set<std::string> forbidden;
  StripsCheckOptions options;
};

StripsDocument parse_strips(std::string_view text);
StripsDocument load_strips(const std::filesystem::path& path);
Verdict strips_dde_check(const StripsDocument& doc);

}  // namespace dde
