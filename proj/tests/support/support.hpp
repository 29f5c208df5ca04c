#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dde/dde.hpp"
#include "dde/strips.hpp"

namespace ddetest {

using dde::Formula;
using dde::Signature;
using dde::Term;
using Rng = std::mt19937_64;

std::filesystem::path source_dir();
std::filesystem::path scenario_path(const std::string& file);
std::vector<std::filesystem::path> scenario_corpus();

// Random well-sorted formulas over a fixed signature ------------------------

Signature roundtrip_signature();
Formula random_formula(Rng& rng, const Signature& sig, int depth);

// Propositional oracle -------------------------------------------------------

Signature propositional_signature(int atoms);
Formula random_propositional(Rng& rng, int atoms, int depth);
/// Bit i of `assignment` is the value of atom p<i>.
bool evaluate(const Formula& f, unsigned assignment);
bool evaluate(const std::vector<dde::Clause>& clauses, unsigned assignment);
bool tautology(const Formula& f, int atoms);

// Unification oracle ---------------------------------------------------------

Term random_term(Rng& rng, int depth, bool allow_variables = true);
/// All ground terms over {a, b, f/1, g/2} up to the given depth.
std::vector<Term> ground_terms(int depth);
std::set<Term> variables_of(const Term& a, const Term& b);

// Micro event-calculus domains ----------------------------------------------

struct MicroEffect {
  bool initiates = true;
  Term event;
  Term fluent;
  std::optional<std::pair<Term, bool>> guard;
};

/// Fluents p(x)/q(x), events go(x) over objects a, b, c. When `action` is
/// set, the scenario's action event may appear in effects.
struct MicroDomain {
  std::vector<Term> fluents;
  std::vector<Term> events;
  std::set<Term> initially;
  std::vector<std::pair<Term, std::int64_t>> schedule;
  std::vector<MicroEffect> effects;
  std::int64_t horizon = 5;
};

Signature micro_signature();
Term micro_fluent(const std::string& pred, const std::string& obj);
Term micro_event(const std::string& obj);
Term micro_action_type(const std::string& obj);
Term micro_action(const std::string& obj);

MicroDomain random_micro_domain(Rng& rng, int max_fluents, int max_events, std::int64_t horizon,
                                std::optional<Term> action = std::nullopt);
std::vector<std::string> micro_axiom_texts(const MicroDomain& d);
std::vector<dde::NamedFormula> micro_theory(const MicroDomain& d, const Signature& sig);

/// Declarative event calculus evaluated by recursion on time, independent of
/// the forward simulator: f holds at t when it is initially true and not
/// clipped in [0, t), or some earlier event initiated it and nothing clipped
/// it since. nullopt when some fluent is initiated and terminated at once.
std::optional<std::vector<std::set<Term>>> brute_force_states(const MicroDomain& d);

/// Objects mentioned by each item of the domain.
MicroDomain prune_domain(const MicroDomain& d, const std::set<Term>& entities, bool keep_mentioning);

enum class OracleMeans { False, True, Conflict };
OracleMeans oracle_means(const MicroDomain& d, const dde::FluentLiteral& f, const dde::FluentLiteral& g,
                         dde::MeansMode mode);

// Micro scenarios for whole verdicts ----------------------------------------

std::string random_micro_scenario(Rng& rng, int index);

// STRIPS ---------------------------------------------------------------------

struct StripsCase {
  std::vector<dde::StripsAction> plan;
  std::set<Term> initial;
};
Term strips_atom(int i);
StripsCase random_strips_case(Rng& rng, int max_actions, int atoms);
/// nullopt when a precondition fails.
std::optional<std::vector<std::set<Term>>> brute_force_plan(const StripsCase& c);

// Traces ---------------------------------------------------------------------

/// Parses "<y> <fluent>" lines back into (time, fluent text) pairs.
std::vector<std::pair<std::int64_t, std::string>> parse_dump(const std::string& dump);

}  // namespace ddetest
