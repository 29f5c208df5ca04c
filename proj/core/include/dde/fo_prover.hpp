#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "dde/clause.hpp"

namespace dde {

enum class ProofStatus { Proved, NotProved, ResourceOut };
std::string_view to_string(ProofStatus s);

enum class InferenceRule { Input, Resolution, Factoring, Paramodulation, EqualityResolution };
std::string_view to_string(InferenceRule r);

/// One derivation step. For binary rules the second parent's variables are
/// renamed X→Y before unification.
///   Resolution          parents (p, q), literals (i, j)
///   Factoring           parents (p),    literals (i, j); literal j is dropped
///   EqualityResolution  parents (p),    literals (i)
///   Paramodulation      parents (from, into), literals (eq, target),
///                       `reversed` picks r→l, `position` is the argument path
///                       inside the target atom
struct ProofStep {
  int id = 0;
  InferenceRule rule = InferenceRule::Input;
  std::vector<int> parents;
  std::vector<int> literals;
  std::vector<int> position;
  bool reversed = false;
  Substitution unifier;
  Clause clause;
};

struct Proof {
  /// Clausified problem (axioms plus negated goal), the only admissible inputs.
  std::vector<Clause> problem;
  /// For each problem clause, the index of the kb formula it came from
  /// (-1 for the negated goal or when refuting raw clauses).
  std::vector<int> origins;
  /// Steps in dependency order; the last one derives the empty clause.
  std::vector<ProofStep> steps;

  std::string to_string() const;
};

struct FoOptions {
  /// Maximum number of generated clauses.
  std::int64_t budget = 50000;
  const Signature* signature = nullptr;
  /// Drop axioms whose predicates are unconnected to the goal's.
  bool relevance_filter = false;
};

struct FoResult {
  ProofStatus status = ProofStatus::NotProved;
  std::int64_t steps_used = 0;
  Proof proof;  ///< Populated when status == Proved.
};

/// Refutation prover: given-clause loop with binary resolution, factoring,
/// paramodulation, equality resolution and ground numeral comparison.
/// Atoms are never rewritten inside shadow-atom arguments. Formulas must be
/// modal-free.
FoResult fo_prove(const std::vector<Formula>& kb, const Formula& goal, const FoOptions& opts = {});
/// Same, on clauses directly; proves unsatisfiability.
FoResult refute(const std::vector<Clause>& clauses, const FoOptions& opts = {});

/// Rechecks every step of `proof` against its parents and the problem.
bool replay_proof(const Proof& proof, const Signature* sig = nullptr);
/// Position in `proof.steps` of the first step that fails to re-check,
/// nullopt when the whole proof replays.
std::optional<std::size_t> first_invalid_step(const Proof& proof, const Signature* sig = nullptr);
/// Indices of kb formulas whose clauses are leaves of the proof.
std::set<int> used_axioms(const Proof& proof);

/// Predicate symbols occurring in a formula.
std::set<std::string> predicates_of(const Formula& f);
/// Keeps the formulas transitively connected to `goal` through shared
/// predicate symbols.
std::vector<Formula> relevant_axioms(const std::vector<Formula>& kb, const Formula& goal);
std::vector<int> relevant_axiom_indices(const std::vector<Formula>& kb, const Formula& goal);

}  // namespace dde
