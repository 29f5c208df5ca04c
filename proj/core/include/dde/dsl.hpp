#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dde/formula.hpp"
#include "dde/printer.hpp"
#include "dde/sexpr.hpp"
#include "dde/utility.hpp"

namespace dde {

struct ParseOptions {
  bool check_sorts = true;
  /// `?name` is a term metavariable in term position and a formula
  /// metavariable in formula position.
  bool patterns = false;
  /// `_` is an anonymous wildcard variable.
  bool wildcards = false;
};

/// Variables in scope while converting an expression, innermost last.
using VariableScope = std::vector<Term>;

/// Grammar (prefix, parenthesized):
///   φ ::= true | false | atom | (not φ) | (and φ φ+) | (or φ φ+)
///       | (implies φ φ) | (iff φ φ) | (forall ((x S)+) φ) | (exists ((x S)+) φ)
///       | (P a t φ) | (K a t φ) | (B a t φ) | (C t φ) | (S a t φ) | (S a b t φ)
///       | (D a t φ) | (I a t φ) | (O a t φ φ)
///   atom ::= symbol | (f t*) | (= t t) | (> t t) | (>= t t) | (< t t) | (<= t t)
Formula parse_formula(std::string_view text, const Signature& sig, const ParseOptions& opts = {});
Formula formula_from_sexpr(const Sexpr& s, const Signature& sig, VariableScope& scope, const ParseOptions& opts = {});
Term parse_term(std::string_view text, const Signature& sig, const ParseOptions& opts = {});
Term term_from_sexpr(const Sexpr& s, const Signature& sig, const VariableScope& scope, const ParseOptions& opts = {});

/// Reads `(sort ...)`, `(fn name (args...) result)` and `(const name Sort)`
/// declarations into `sig`.
void read_signature(const Sexpr& section, Signature& sig);

enum class Doctrine { DDE, DTE };
enum class MeansMode { Prose, Literal };
enum class F1Mode { Standard, Literal };
enum class F2SumMode { Onset, Literal };

struct Interpretation {
  MeansMode means = MeansMode::Prose;
  F1Mode f1 = F1Mode::Standard;
  F2SumMode f2_sum = F2SumMode::Onset;
};

std::string_view to_string(Doctrine d);
std::string_view to_string(MeansMode m);
std::string_view to_string(F1Mode m);
std::string_view to_string(F2SumMode m);
Doctrine parse_doctrine(std::string_view s);
MeansMode parse_means_mode(std::string_view s);
F1Mode parse_f1_mode(std::string_view s);
F2SumMode parse_f2_sum_mode(std::string_view s);

struct NamedFormula {
  std::string name;
  Formula formula;
  int line = 0;
};

/// A fully validated scenario: background axioms Γ, situation σ, the agent,
/// the candidate action with its performance time, the horizon, the
/// threshold γ and the utility table.
struct ScenarioDocument {
  std::string name;
  Signature signature;
  std::vector<NamedFormula> axioms;
  Formula situation;
  Term agent;
  Term action_type;
  std::int64_t time = 0;
  /// Time term used inside modal formulas (F1, F3a, F3b). Defaults to the
  /// numeric performance time.
  Term moment;
  std::int64_t horizon = 0;
  double gamma = 0;
  UtilityFunction utility;
  Doctrine doctrine = Doctrine::DDE;
  Interpretation interpretation;

  std::size_t axiom_count() const { return axioms.size(); }
  std::vector<Formula> background() const;
  /// action(agent, action_type)
  Term action_event() const;
  /// happens(action(agent, action_type), time)
  Formula action_happens() const;
};

/// Sections: SCENARIO (optional name), SIGNATURE, AXIOMS, SITUATION, ACTION,
/// UTILITY, PARAMS.
ScenarioDocument parse_scenario(std::string_view text);
ScenarioDocument load_scenario(const std::filesystem::path& path);
/// Prints a document back in the scenario syntax (signature omitted when
/// `with_signature` is false).
std::string print_scenario(const ScenarioDocument& doc);

/// Validation rules shared by the parser and programmatic construction:
/// every axiom sort-checks, H > t and γ > 0.
void validate(const ScenarioDocument& doc);

std::string read_file(const std::filesystem::path& path);

}  // namespace dde
