#pragma once

#include <functional>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dde/term.hpp"

namespace dde {

/// Intensional operators. `Says` covers both the public-announcement form
/// S(a,t,φ) and the agent-to-agent form S(a,b,t,φ); they differ in the number
/// of term arguments.
enum class ModalOp : std::uint8_t { Perceives, Knows, Believes, Common, Says, Desires, Intends, Ought };

/// Prefix used in the text syntax: P K B C S D I O.
std::string_view modal_symbol(ModalOp op);

/// Immutable formula tree of the sorted quantified modal language.
///
/// Modal nodes hold their term arguments (agents, times) separately from
/// their formula arguments:
///   P K B D I : terms (a, t)        formulas (φ)
///   C         : terms (t)           formulas (φ)
///   S         : terms (a, t) or (a, b, t), formulas (φ)
///   O         : terms (a, t)        formulas (situation, obligated)
///
/// `Meta` nodes are formula metavariables; they appear only in inference
/// schema patterns.
class Formula {
 public:
  enum class Kind : std::uint8_t { True, False, Atom, Not, And, Or, Implies, Iff, Forall, Exists, Modal, Meta };

  Formula() = default;

  static Formula truth(bool value);
  static Formula atom(Term t);
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implication(Formula a, Formula b);
  static Formula biconditional(Formula a, Formula b);
  static Formula forall(Term var, Formula body);
  static Formula exists(Term var, Formula body);
  static Formula modal(ModalOp op, std::vector<Term> terms, std::vector<Formula> subs);
  static Formula meta(std::string name);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is(Kind k) const { return node_->kind == k; }

  const Term& term() const { return node_->term; }            ///< Atom
  const Term& bound() const { return node_->term; }           ///< Forall / Exists
  std::span<const Formula> children() const { return node_->children; }
  const Formula& child(std::size_t i) const { return node_->children.at(i); }
  ModalOp op() const { return node_->op; }
  std::span<const Term> modal_terms() const { return node_->terms; }
  const std::string& meta_name() const { return node_->meta; }

  /// Modal accessors (valid only on Modal nodes).
  const Term& agent() const { return node_->terms.front(); }
  const Term& time() const { return node_->terms.back(); }
  const Formula& body() const { return node_->children.front(); }

  std::size_t hash() const { return node_->hash; }
  std::size_t size() const { return node_->size; }

  friend bool operator==(const Formula& a, const Formula& b);
  friend std::strong_ordering operator<=>(const Formula& a, const Formula& b);

 private:
  struct Node {
    Kind kind;
    ModalOp op = ModalOp::Knows;
    Term term;
    std::vector<Formula> children;
    std::vector<Term> terms;
    std::string meta;
    std::size_t hash = 0;
    std::size_t size = 1;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Node n);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

bool is_modal_free(const Formula& f);
/// Maximum nesting of modal operators.
int modal_depth(const Formula& f);
std::set<Term> free_variables(const Formula& f);
/// Every term occurring anywhere (atoms, modal arguments, subterms).
void collect_terms(const Formula& f, std::vector<Term>& out);
bool contains_term(const Formula& f, const Term& t);
/// Visits f and all subformulas in pre-order.
void for_each_subformula(const Formula& f, const std::function<void(const Formula&)>& visit);

/// Capture-avoiding substitution. Bound variables clashing with variables of
/// the replacement terms are renamed.
Formula apply(const Formula& f, const Substitution& s);
/// Renames bound variables canonically (v0, v1, ... in binding order), so
/// alpha-equivalent formulas become structurally equal.
Formula alpha_normalize(const Formula& f);
bool alpha_equivalent(const Formula& a, const Formula& b);

/// Atom helpers used throughout the engines.
Formula holds_atom(const Term& fluent, const Term& time);
Formula happens_atom(const Term& event, const Term& time);
bool is_atom_of(const Formula& f, std::string_view predicate);

struct SortViolation {
  std::string where;    ///< Offending subterm or subformula, printed.
  std::string message;
};

/// Checks every application, quantifier and modal node against `sig`. Also
/// enforces the operator shapes: the obligated formula of O must be a (possibly
/// negated) happens atom or a compound formula, and the body of D must be a
/// holds atom.
std::vector<SortViolation> sort_check(const Formula& f, const Signature& sig);
std::vector<SortViolation> sort_check(const Term& t, const Signature& sig);

}  // namespace dde
