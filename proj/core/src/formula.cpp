#include "dde/formula.hpp"

#include <map>

#include "dde/printer.hpp"

namespace dde {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

bool is_comparison(std::string_view name) {
  return name == ">" || name == ">=" || name == "<" || name == "<=";
}

}  // namespace

std::string_view modal_symbol(ModalOp op) {
  switch (op) {
    case ModalOp::Perceives: return "P";
    case ModalOp::Knows: return "K";
    case ModalOp::Believes: return "B";
    case ModalOp::Common: return "C";
    case ModalOp::Says: return "S";
    case ModalOp::Desires: return "D";
    case ModalOp::Intends: return "I";
    case ModalOp::Ought: return "O";
  }
  return "?";
}

Formula Formula::make(Node n) {
  std::size_t h = mix(static_cast<std::size_t>(n.kind) * 31 + static_cast<std::size_t>(n.op), 17);
  if (n.term.valid()) {
    h = mix(h, n.term.hash());
    n.size += n.term.size();
  }
  for (const auto& t : n.terms) {
    h = mix(h, t.hash());
    n.size += t.size();
  }
  for (const auto& c : n.children) {
    h = mix(h, c.hash());
    n.size += c.size();
  }
  if (!n.meta.empty()) h = mix(h, std::hash<std::string>{}(n.meta));
  n.hash = h;
  return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::truth(bool value) { return make(Node{value ? Kind::True : Kind::False}); }

Formula Formula::atom(Term t) {
  Node n{Kind::Atom};
  n.term = std::move(t);
  return make(std::move(n));
}

Formula Formula::negation(Formula f) {
  Node n{Kind::Not};
  n.children.push_back(std::move(f));
  return make(std::move(n));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  Node n{Kind::And};
  n.children = std::move(fs);
  return make(std::move(n));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  Node n{Kind::Or};
  n.children = std::move(fs);
  return make(std::move(n));
}

Formula Formula::implication(Formula a, Formula b) {
  Node n{Kind::Implies};
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::biconditional(Formula a, Formula b) {
  Node n{Kind::Iff};
  n.children = {std::move(a), std::move(b)};
  return make(std::move(n));
}

Formula Formula::forall(Term var, Formula body) {
  if (!var.is_variable()) throw ContractError("quantifier must bind a variable");
  Node n{Kind::Forall};
  n.term = std::move(var);
  n.children.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::exists(Term var, Formula body) {
  if (!var.is_variable()) throw ContractError("quantifier must bind a variable");
  Node n{Kind::Exists};
  n.term = std::move(var);
  n.children.push_back(std::move(body));
  return make(std::move(n));
}

Formula Formula::modal(ModalOp op, std::vector<Term> terms, std::vector<Formula> subs) {
  Node n{Kind::Modal, op};
  n.terms = std::move(terms);
  n.children = std::move(subs);
  return make(std::move(n));
}

Formula Formula::meta(std::string name) {
  Node n{Kind::Meta};
  n.meta = std::move(name);
  return make(std::move(n));
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash()) return false;
  return (a <=> b) == 0;
}

std::strong_ordering operator<=>(const Formula& a, const Formula& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (auto c = a.node_->op <=> b.node_->op; c != 0) return c;
  if (auto c = a.node_->meta <=> b.node_->meta; c != 0) return c;
  if (auto c = a.node_->term <=> b.node_->term; c != 0) return c;
  const auto& ta = a.node_->terms;
  const auto& tb = b.node_->terms;
  if (auto c = ta.size() <=> tb.size(); c != 0) return c;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (auto c = ta[i] <=> tb[i]; c != 0) return c;
  }
  const auto& ca = a.node_->children;
  const auto& cb = b.node_->children;
  if (auto c = ca.size() <=> cb.size(); c != 0) return c;
  for (std::size_t i = 0; i < ca.size(); ++i) {
    if (auto c = ca[i] <=> cb[i]; c != 0) return c;
  }
  return std::strong_ordering::equal;
}

// ---------------------------------------------------------------------------

bool is_modal_free(const Formula& f) {
  if (f.is(Formula::Kind::Modal)) return false;
  for (const auto& c : f.children()) {
    if (!is_modal_free(c)) return false;
  }
  return true;
}

int modal_depth(const Formula& f) {
  int d = 0;
  for (const auto& c : f.children()) d = std::max(d, modal_depth(c));
  return f.is(Formula::Kind::Modal) ? d + 1 : d;
}

namespace {

void free_vars_rec(const Formula& f, std::set<Term>& bound, std::set<Term>& out) {
  auto add_term = [&](const Term& t) {
    std::set<Term> vs;
    collect_variables(t, vs);
    for (const auto& v : vs) {
      if (!bound.count(v)) out.insert(v);
    }
  };
  switch (f.kind()) {
    case Formula::Kind::Atom: add_term(f.term()); return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists: {
      bool inserted = bound.insert(f.bound()).second;
      free_vars_rec(f.child(0), bound, out);
      if (inserted) bound.erase(f.bound());
      return;
    }
    case Formula::Kind::Modal:
      for (const auto& t : f.modal_terms()) add_term(t);
      break;
    default: break;
  }
  for (const auto& c : f.children()) free_vars_rec(c, bound, out);
}

}  // namespace

std::set<Term> free_variables(const Formula& f) {
  std::set<Term> bound, out;
  free_vars_rec(f, bound, out);
  return out;
}

void collect_terms(const Formula& f, std::vector<Term>& out) {
  if (f.is(Formula::Kind::Atom)) collect_subterms(f.term(), out);
  if (f.is(Formula::Kind::Forall) || f.is(Formula::Kind::Exists)) out.push_back(f.bound());
  for (const auto& t : f.modal_terms()) collect_subterms(t, out);
  for (const auto& c : f.children()) collect_terms(c, out);
}

bool contains_term(const Formula& f, const Term& t) {
  std::vector<Term> all;
  collect_terms(f, all);
  for (const auto& s : all) {
    if (s == t) return true;
  }
  return false;
}

void for_each_subformula(const Formula& f, const std::function<void(const Formula&)>& visit) {
  visit(f);
  for (const auto& c : f.children()) for_each_subformula(c, visit);
}

// ---------------------------------------------------------------------------
// Substitution on formulas

namespace {

Formula rebuild(const Formula& f, std::vector<Formula> children, std::vector<Term> terms) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: return Formula::negation(std::move(children[0]));
    case K::And: return Formula::conjunction(std::move(children));
    case K::Or: return Formula::disjunction(std::move(children));
    case K::Implies: return Formula::implication(std::move(children[0]), std::move(children[1]));
    case K::Iff: return Formula::biconditional(std::move(children[0]), std::move(children[1]));
    case K::Modal: return Formula::modal(f.op(), std::move(terms), std::move(children));
    default: return f;
  }
}

Formula apply_rec(const Formula& f, const Substitution& s) {
  using K = Formula::Kind;
  if (s.empty()) return f;
  switch (f.kind()) {
    case K::True:
    case K::False:
    case K::Meta: return f;
    case K::Atom: return Formula::atom(s.apply(f.term()));
    case K::Forall:
    case K::Exists: {
      Substitution inner;
      std::set<Term> range_vars;
      auto body_free = free_variables(f.child(0));
      for (const auto& [name, value] : s.bindings()) {
        if (name == f.bound().name()) continue;
        const Term& var = s.variable(name);
        if (!body_free.count(var)) continue;
        inner.bind(var, value);
        collect_variables(value, range_vars);
      }
      Term var = f.bound();
      Formula body = f.child(0);
      bool clash = false;
      for (const auto& v : range_vars) clash = clash || v.name() == var.name();
      if (clash) {
        std::string fresh = var.name();
        auto taken = [&](const std::string& n) {
          for (const auto& v : range_vars) {
            if (v.name() == n) return true;
          }
          for (const auto& v : body_free) {
            if (v.name() == n) return true;
          }
          return false;
        };
        do fresh += '\''; while (taken(fresh));
        Term renamed = Term::variable(fresh, var.sort());
        Substitution r;
        r.bind(var, renamed);
        body = apply_rec(body, r);
        var = renamed;
      }
      body = apply_rec(body, inner);
      return f.is(K::Forall) ? Formula::forall(var, body) : Formula::exists(var, body);
    }
    default: {
      std::vector<Formula> children;
      children.reserve(f.children().size());
      for (const auto& c : f.children()) children.push_back(apply_rec(c, s));
      std::vector<Term> terms;
      for (const auto& t : f.modal_terms()) terms.push_back(s.apply(t));
      return rebuild(f, std::move(children), std::move(terms));
    }
  }
}

Formula alpha_rec(const Formula& f, int& counter) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Forall:
    case K::Exists: {
      Term fresh = Term::variable("%" + std::to_string(counter++), f.bound().sort());
      Substitution r;
      r.bind(f.bound(), fresh);
      Formula body = alpha_rec(apply_rec(f.child(0), r), counter);
      return f.is(K::Forall) ? Formula::forall(fresh, body) : Formula::exists(fresh, body);
    }
    case K::Not:
    case K::And:
    case K::Or:
    case K::Implies:
    case K::Iff:
    case K::Modal: {
      std::vector<Formula> children;
      for (const auto& c : f.children()) children.push_back(alpha_rec(c, counter));
      return rebuild(f, std::move(children), {f.modal_terms().begin(), f.modal_terms().end()});
    }
    default: return f;
  }
}

}  // namespace

Formula apply(const Formula& f, const Substitution& s) { return apply_rec(f, s); }

Formula alpha_normalize(const Formula& f) {
  int counter = 0;
  return alpha_rec(f, counter);
}

bool alpha_equivalent(const Formula& a, const Formula& b) { return alpha_normalize(a) == alpha_normalize(b); }

Formula holds_atom(const Term& fluent, const Term& time) {
  return Formula::atom(Term::apply("holds", {fluent, time}, sort::kBoolean));
}

Formula happens_atom(const Term& event, const Term& time) {
  return Formula::atom(Term::apply("happens", {event, time}, sort::kBoolean));
}

bool is_atom_of(const Formula& f, std::string_view predicate) {
  return f.is(Formula::Kind::Atom) && f.term().is_application() && f.term().name() == predicate;
}

// ---------------------------------------------------------------------------
// Sort checking

namespace {

struct Checker {
  const Signature& sig;
  std::vector<SortViolation> out;

  void report(const std::string& where, std::string msg) { out.push_back({where, std::move(msg)}); }

  /// Returns the sort of t, or nullopt when it could not be determined.
  std::optional<std::string> term(const Term& t) {
    switch (t.kind()) {
      case Term::Kind::Variable:
        if (!t.sort().empty() && !sig.has_sort(t.sort())) {
          report(t.name(), "variable of unknown sort '" + t.sort() + "'");
        }
        return t.sort();
      case Term::Kind::Number: return t.sort();
      case Term::Kind::Application: break;
    }
    const FunctionDecl* decl = sig.function(t.name());
    if (!decl) {
      report(to_string(t), "undeclared symbol '" + t.name() + "'");
      for (const auto& a : t.args()) term(a);
      return std::nullopt;
    }
    if (decl->args.size() != t.arity()) {
      report(to_string(t), "arity mismatch at " + t.name() + ": expected " + std::to_string(decl->args.size()) +
                               " arguments, got " + std::to_string(t.arity()));
      for (const auto& a : t.args()) term(a);
      return decl->result;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
      auto s = term(t.arg(i));
      if (s && !sig.is_subsort(*s, decl->args[i])) {
        report(to_string(t), "argument-sort violation at " + t.name() + ": argument " + std::to_string(i + 1) + " " +
                                 to_string(t.arg(i)) + " has sort " + *s + ", expected " + decl->args[i]);
      }
    }
    return decl->result;
  }

  void expect(const Term& t, const std::string& wanted, const std::string& role, const Formula& f) {
    auto s = term(t);
    if (s && !sig.is_subsort(*s, wanted)) {
      report(print_formula(f), role + " " + to_string(t) + " has sort " + *s + ", expected " + wanted);
    }
  }

  void atom(const Formula& f) {
    const Term& t = f.term();
    if (!t.is_application()) {
      report(to_string(t), "atom must be a Boolean application");
      return;
    }
    if (t.name() == "=") {
      if (t.arity() != 2) {
        report(to_string(t), "equality takes two arguments");
        return;
      }
      auto a = term(t.arg(0));
      auto b = term(t.arg(1));
      if (a && b && !sig.comparable(*a, *b)) {
        report(to_string(t), "equality between incomparable sorts " + *a + " and " + *b);
      }
      return;
    }
    if (is_comparison(t.name())) {
      if (t.arity() != 2) {
        report(to_string(t), "comparison takes two arguments");
        return;
      }
      for (const auto& a : t.args()) {
        auto s = term(a);
        if (s && !sig.is_subsort(*s, sort::kNumber)) {
          report(to_string(t), "comparison argument " + to_string(a) + " is not numeric");
        }
      }
      return;
    }
    auto s = term(t);
    if (s && *s != sort::kBoolean && !s->empty()) {
      report(to_string(t), "atom " + to_string(t) + " has sort " + *s + ", expected Boolean");
    }
  }

  static bool is_happens_literal(const Formula& f) {
    if (f.is(Formula::Kind::Not)) return is_atom_of(f.child(0), "happens");
    return is_atom_of(f, "happens");
  }

  static bool is_literal_shape(const Formula& f) {
    if (f.is(Formula::Kind::Not)) return f.child(0).is(Formula::Kind::Atom);
    return f.is(Formula::Kind::Atom);
  }

  void modal(const Formula& f) {
    const auto terms = f.modal_terms();
    const std::string where = print_formula(f);
    auto want_terms = [&](std::size_t n) {
      if (terms.size() != n) {
        report(where, std::string(modal_symbol(f.op())) + " expects " + std::to_string(n) + " term arguments");
        return false;
      }
      return true;
    };
    std::size_t want_children = f.op() == ModalOp::Ought ? 2 : 1;
    if (f.children().size() != want_children) {
      report(where, std::string(modal_symbol(f.op())) + " expects " + std::to_string(want_children) +
                        " formula arguments");
      return;
    }
    switch (f.op()) {
      case ModalOp::Common:
        if (want_terms(1)) expect(terms[0], sort::kMoment, "time", f);
        break;
      case ModalOp::Says:
        if (terms.size() == 3) {
          expect(terms[0], sort::kAgent, "speaker", f);
          expect(terms[1], sort::kAgent, "hearer", f);
          expect(terms[2], sort::kMoment, "time", f);
        } else if (want_terms(2)) {
          expect(terms[0], sort::kAgent, "agent", f);
          expect(terms[1], sort::kMoment, "time", f);
        }
        break;
      default:
        if (want_terms(2)) {
          expect(terms[0], sort::kAgent, "agent", f);
          expect(terms[1], sort::kMoment, "time", f);
        }
    }
    if (f.op() == ModalOp::Desires && !is_atom_of(f.body(), "holds")) {
      report(where, "third-argument-shape violation: D requires a holds atom");
    }
    if (f.op() == ModalOp::Ought) {
      const Formula& obligated = f.child(1);
      if (is_literal_shape(obligated) && !is_happens_literal(obligated)) {
        report(where, "fourth-argument-shape violation: O requires a (possibly negated) happens atom");
        return;  // the argument is malformed; its own sort errors add nothing
      }
    }
    for (const auto& c : f.children()) formula(c);
  }

  void formula(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
      case K::False:
      case K::Meta: return;
      case K::Atom: atom(f); return;
      case K::Forall:
      case K::Exists:
        if (!f.bound().sort().empty() && !sig.has_sort(f.bound().sort())) {
          report(f.bound().name(), "quantified variable of unknown sort '" + f.bound().sort() + "'");
        }
        formula(f.child(0));
        return;
      case K::Modal: modal(f); return;
      case K::And:
      case K::Or:
        if (f.children().size() < 2) report(print_formula(f), "connective needs at least two arguments");
        break;
      default: break;
    }
    for (const auto& c : f.children()) formula(c);
  }
};

}  // namespace

std::vector<SortViolation> sort_check(const Formula& f, const Signature& sig) {
  Checker c{sig, {}};
  c.formula(f);
  return std::move(c.out);
}

std::vector<SortViolation> sort_check(const Term& t, const Signature& sig) {
  Checker c{sig, {}};
  c.term(t);
  return std::move(c.out);
}

}  // namespace dde
