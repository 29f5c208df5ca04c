#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "dde/error.hpp"

namespace dde {

// Built-in sort names.
namespace sort {
inline const std::string kObject = "Object";
inline const std::string kAgent = "Agent";
inline const std::string kActionType = "ActionType";
inline const std::string kAction = "Action";
inline const std::string kEvent = "Event";
inline const std::string kMoment = "Moment";
inline const std::string kNumber = "Number";
inline const std::string kBoolean = "Boolean";
inline const std::string kFluent = "Fluent";
/// The empty sort is accepted everywhere. Used for schema metavariables and
/// for untyped STRIPS atoms.
inline const std::string kAny = "";
}  // namespace sort

struct FunctionDecl {
  std::string name;
  std::vector<std::string> args;
  std::string result;
};

/// Sorts (a single-inheritance forest) and function symbols.
///
/// A fresh Signature already contains the built-in sorts and the
/// event-calculus symbols: action, initially, holds, happens, clipped,
/// initiates, terminates, prior and trajectory.
class Signature {
 public:
  Signature();

  /// Declares a sort. Redeclaring an existing root sort with a parent attaches
  /// it (so `Agent` can be placed under `Moveable`); anything else that would
  /// give a sort two parents or create a cycle throws SortError.
  void declare_sort(const std::string& name, const std::optional<std::string>& parent = std::nullopt);
  void declare_function(FunctionDecl decl);

  bool has_sort(const std::string& name) const { return sorts_.count(name) > 0; }
  std::optional<std::string> parent(const std::string& name) const;
  /// Reflexive-transitive subsort test. The empty sort is compatible with everything.
  bool is_subsort(const std::string& sub, const std::string& super) const;
  bool comparable(const std::string& a, const std::string& b) const {
    return is_subsort(a, b) || is_subsort(b, a);
  }

  const FunctionDecl* function(const std::string& name) const;
  const std::map<std::string, FunctionDecl>& functions() const { return functions_; }
  const std::map<std::string, std::optional<std::string>>& sorts() const { return sorts_; }

  /// Zero-arity symbols whose result sort is a subsort of `s`.
  std::vector<std::string> constants_of(const std::string& s) const;
  /// True when some function of positive arity produces a subsort of `s`.
  bool has_generators(const std::string& s) const;

 private:
  std::map<std::string, std::optional<std::string>> sorts_;
  std::map<std::string, FunctionDecl> functions_;
};

/// Immutable first-order term: sorted variable, function application
/// (constants are nullary applications) or numeric literal.
class Term {
 public:
  enum class Kind : std::uint8_t { Variable, Application, Number };

  Term() = default;

  static Term variable(std::string name, std::string sort);
  static Term apply(std::string function, std::vector<Term> args, std::string sort);
  static Term constant(std::string name, std::string sort) { return apply(std::move(name), {}, std::move(sort)); }
  /// Non-negative integers have sort Moment, everything else Number.
  static Term number(double value);

  bool valid() const { return node_ != nullptr; }
  Kind kind() const { return node_->kind; }
  bool is_variable() const { return kind() == Kind::Variable; }
  bool is_application() const { return kind() == Kind::Application; }
  bool is_number() const { return kind() == Kind::Number; }
  bool is_constant() const { return is_application() && node_->args.empty(); }

  /// Variable name, function symbol, or the canonical text of a number.
  const std::string& name() const { return node_->name; }
  const std::string& sort() const { return node_->sort; }
  std::span<const Term> args() const { return node_->args; }
  const Term& arg(std::size_t i) const { return node_->args.at(i); }
  std::size_t arity() const { return node_->args.size(); }
  double value() const { return node_->value; }

  bool is_ground() const { return node_->ground; }
  std::size_t size() const { return node_->size; }
  std::size_t hash() const { return node_->hash; }

  friend bool operator==(const Term& a, const Term& b);
  friend std::strong_ordering operator<=>(const Term& a, const Term& b);

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::string sort;
    std::vector<Term> args;
    double value = 0;
    bool ground = true;
    std::size_t size = 1;
    std::size_t hash = 0;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(Node n);

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// Renders a term in prefix notation, e.g. `(position trolley track1 23)`.
std::string to_string(const Term& t);

bool occurs_in(const Term& var, const Term& t);
/// All subterms, including `t` itself.
void collect_subterms(const Term& t, std::vector<Term>& out);
void collect_variables(const Term& t, std::set<Term>& out);
/// Replaces every occurrence of `from` (any term, not only variables).
Term replace_term(const Term& t, const Term& from, const Term& to);

/// Finite map from variables to terms. Keys are variable names; variables are
/// expected to be uniquely named within the expressions a substitution touches.
class Substitution {
 public:
  Substitution() = default;

  bool empty() const { return map_.empty(); }
  std::size_t size() const { return map_.size(); }
  const Term* lookup(const std::string& var) const;
  /// Adds a binding without any check. Prefer bind_checked for user input.
  void bind(const Term& var, Term value);
  /// Adds a binding after verifying sort(value) ⊑ sort(var); throws SortError.
  void bind_checked(const Term& var, Term value, const Signature* sig);
  void erase(const std::string& var) { map_.erase(var); vars_.erase(var); }

  /// Applies the substitution, following chains of bindings.
  Term apply(const Term& t) const;
  /// Result of applying `this` then `other`.
  Substitution compose(const Substitution& other) const;

  const std::map<std::string, Term>& bindings() const { return map_; }
  /// The variable term for a bound name.
  const Term& variable(const std::string& name) const { return vars_.at(name); }

  friend bool operator==(const Substitution& a, const Substitution& b) { return a.map_ == b.map_; }

 private:
  std::map<std::string, Term> map_;
  std::map<std::string, Term> vars_;
};

std::string to_string(const Substitution& s);

/// Most general unifier with occurs check. When `sig` is given, bindings are
/// sort-respecting under its subsort relation; otherwise sorts must be equal
/// (or one of them empty). The result is idempotent.
std::optional<Substitution> unify(const Term& a, const Term& b, const Signature* sig = nullptr);
/// Extends `s` so that both sides of every pair become equal.
bool unify_into(const Term& a, const Term& b, Substitution& s, const Signature* sig = nullptr);
/// One-way matching: extends `s` so that s(pattern) == term. Variables of
/// `term` are treated as constants.
bool match(const Term& pattern, const Term& term, Substitution& s, const Signature* sig = nullptr);
/// Makes a triangular substitution idempotent.
Substitution resolve(const Substitution& s);

}  // namespace dde
