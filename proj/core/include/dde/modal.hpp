#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "dde/fo_prover.hpp"

namespace dde {

/// Bijection between maximal modal subformulas and fresh atoms `$sh<n>`.
/// Free variables of the modal formula become the atom's arguments, so
/// alpha-equivalent occurrences share one atom.
class ShadowTable {
 public:
  Formula shadow(const Formula& f);
  Formula unshadow(const Formula& f) const;
  /// The modal formula an atom stands for (arguments substituted back).
  std::optional<Formula> lookup(const Term& atom) const;

  std::size_t size() const { return formulas_.size(); }
  const Formula& formula(std::size_t i) const { return formulas_.at(i); }
  Term atom(std::size_t i) const;

 private:
  std::map<Formula, std::size_t> index_;
  std::vector<Formula> formulas_;
  std::vector<std::vector<Term>> params_;
};

std::pair<std::vector<Formula>, ShadowTable> shadow(const std::vector<Formula>& fs);

/// Side condition of a schema:
///   (<= ?a ?b) (< ?a ?b) (= ?a ?b)   numeric or syntactic time comparisons
///   (moment ?t)                       binds ?t to each moment term in the kb
///   (agent ?a)                        binds ?a to each agent term in the kb
///   (max ?r ?a ?b)                    binds ?r to the later of ?a and ?b
struct SideCondition {
  std::string kind;
  std::vector<Term> args;
};

/// Forward rule: when every premise pattern matches a kb formula and the
/// side conditions hold, the instantiated conclusion is added.
struct InferenceSchema {
  std::string name;
  std::vector<Formula> premises;
  std::vector<SideCondition> conditions;
  Formula conclusion;
};

/// Reads `(rule NAME (premises p...) [(where c...)] (conclusion c))` forms.
/// `?x` is a term metavariable in term position and a formula metavariable in
/// formula position. Throws ConfigError when a conclusion metavariable is not
/// bound by a premise or a binding side condition.
std::vector<InferenceSchema> parse_schemata(std::string_view text, const Signature& sig = Signature());
/// R1, R2, R4–R7, R9, R12, R13, R14 in schema syntax.
std::string_view builtin_schema_text();
const std::vector<InferenceSchema>& builtin_schemata();

/// Bindings produced by matching formula patterns.
struct Match {
  Substitution terms;
  std::map<std::string, Formula> formulas;
};
bool match_formula(const Formula& pattern, const Formula& f, Match& m);
Formula instantiate(const Formula& pattern, const Match& m);

struct ModalOptions {
  /// Inference budget of each first-order call.
  std::int64_t fo_budget = 50000;
  int max_rounds = 12;
  /// Iteration bound for R3's nested knowledge.
  int r3_depth = 2;
  /// Enables the native closure schemata R_K and R_B.
  bool closure = true;
  std::size_t max_formulas = 4000;
  std::vector<InferenceSchema> schemata = builtin_schemata();
  const Signature* signature = nullptr;
};

/// One forward step of the loop. Rule names: schema names, R3, R8, R10, RK,
/// RB, and FO for modal atoms obtained by first-order reasoning.
struct Derivation {
  int round = 0;
  std::string rule;
  std::vector<Formula> premises;
  Formula conclusion;
};

struct ModalResult {
  ProofStatus status = ProofStatus::NotProved;
  int rounds = 0;
  std::int64_t fo_steps = 0;
  /// When proved: the derivations the final first-order proof depends on, in
  /// order. Otherwise every derivation made.
  std::vector<Derivation> trace;
  /// Final first-order proof over shadowed formulas (when proved).
  Proof proof;
  /// Everything known when the loop stopped.
  std::vector<Formula> knowledge;

  std::string trace_text() const;
  bool uses_rule(std::string_view rule) const;
};

/// Shadow, call the first-order prover on the goal, otherwise apply every
/// schema once and repeat. Stops when proved, at a schema fixpoint
/// (NotProved) or when rounds, formula count or the inner budget run out
/// (ResourceOut).
ModalResult modal_prove(const std::vector<Formula>& kb, const Formula& goal, const ModalOptions& opts = {});

/// All conclusions of one application of `schemata` (plus the native rules)
/// to `kb` that are not already in it.
std::vector<Derivation> apply_schemata(const std::vector<Formula>& kb, const std::vector<InferenceSchema>& schemata,
                                       const ModalOptions& opts = {});

}  // namespace dde
