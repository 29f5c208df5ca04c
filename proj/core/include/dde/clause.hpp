#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dde/formula.hpp"

namespace dde {

struct Literal {
  bool positive = true;
  Term atom;

  friend bool operator==(const Literal&, const Literal&) = default;
  friend auto operator<=>(const Literal& a, const Literal& b) {
    if (auto c = a.atom <=> b.atom; c != 0) return c;
    return a.positive <=> b.positive;
  }
};

/// Disjunction of literals. Variables are implicitly universally quantified.
struct Clause {
  std::vector<Literal> literals;

  bool empty() const { return literals.empty(); }
  std::size_t size() const { return literals.size(); }
  std::size_t weight() const;

  friend bool operator==(const Clause&, const Clause&) = default;
};

std::string to_string(const Literal& l);
std::string to_string(const Clause& c);

bool is_equality(const Term& atom);
/// Atoms whose predicate starts with `$sh` stand for modal subformulas.
bool is_shadow_atom(const Term& atom);

/// Evaluates ground comparisons between numerals (=, >, >=, <, <=).
/// Returns nullopt when the atom is not such a comparison.
std::optional<bool> evaluate_ground(const Term& atom);

/// Canonical form shared by the prover and proof replay: ground comparisons
/// are evaluated (false literals dropped; a true literal turns the clause into
/// nullopt), duplicate literals merged, literals sorted and variables renamed
/// X0, X1, ... in order of first occurrence.
std::optional<Clause> normalize(Clause c);
/// Renames every variable Xi to `prefix`i.
Clause rename_variables(const Clause& c, const std::string& prefix);
Clause apply(const Clause& c, const Substitution& s);

/// True for x = x literals and complementary pairs.
bool is_tautology(const Clause& c);
/// θ-subsumption: some σ maps every literal of `a` into `b`.
bool subsumes(const Clause& a, const Clause& b, const Signature* sig = nullptr);

/// Converts modal-free formulas to clauses: negation normal form,
/// Skolemization (fresh symbols `sk<n>`) and distribution. Throws
/// ContractError on modal or meta subformulas.
class Clausifier {
 public:
  std::vector<Clause> clausify(const Formula& f);

 private:
  int skolem_ = 0;
  int variable_ = 0;
};

std::vector<Clause> clausify(const std::vector<Formula>& fs);

/// TPTP-style cnf(...) listing.
std::string dump_tptp(const std::vector<Clause>& clauses, const std::string& role = "axiom");

}  // namespace dde
