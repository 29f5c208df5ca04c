#include "dde/term.hpp"

#include <charconv>
#include <cmath>
#include <functional>

namespace dde {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::string number_text(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

// ---------------------------------------------------------------------------
// Signature

Signature::Signature() {
  for (const auto* s : {&sort::kObject, &sort::kAgent, &sort::kActionType, &sort::kEvent, &sort::kNumber,
                        &sort::kBoolean, &sort::kFluent}) {
    sorts_[*s] = std::nullopt;
  }
  sorts_[sort::kAction] = sort::kEvent;
  sorts_[sort::kMoment] = sort::kNumber;

  const auto& B = sort::kBoolean;
  const auto& F = sort::kFluent;
  const auto& M = sort::kMoment;
  const auto& E = sort::kEvent;
  declare_function({"action", {sort::kAgent, sort::kActionType}, sort::kAction});
  declare_function({"initially", {F}, B});
  declare_function({"holds", {F, M}, B});
  declare_function({"happens", {E, M}, B});
  declare_function({"clipped", {M, F, M}, B});
  declare_function({"initiates", {E, F, M}, B});
  declare_function({"terminates", {E, F, M}, B});
  declare_function({"prior", {M, M}, B});
  declare_function({"trajectory", {F, M, F, sort::kNumber}, B});
}

void Signature::declare_sort(const std::string& name, const std::optional<std::string>& parent) {
  if (parent) {
    if (!has_sort(*parent)) throw SortError("unknown parent sort '" + *parent + "' for sort '" + name + "'");
    if (is_subsort(*parent, name) && has_sort(name)) {
      throw SortError("sort '" + name + "' would create a cycle through '" + *parent + "'");
    }
  }
  auto it = sorts_.find(name);
  if (it != sorts_.end()) {
    if (!parent || it->second == parent) return;
    if (it->second) throw SortError("sort '" + name + "' already has parent '" + *it->second + "'");
    it->second = parent;
    return;
  }
  sorts_[name] = parent;
}

void Signature::declare_function(FunctionDecl decl) {
  if (functions_.count(decl.name)) throw SortError("symbol '" + decl.name + "' declared twice");
  for (const auto& s : decl.args) {
    if (!has_sort(s)) throw SortError("unknown sort '" + s + "' in declaration of '" + decl.name + "'");
  }
  if (!has_sort(decl.result)) throw SortError("unknown sort '" + decl.result + "' in declaration of '" + decl.name + "'");
  auto name = decl.name;
  functions_.emplace(std::move(name), std::move(decl));
}

std::optional<std::string> Signature::parent(const std::string& name) const {
  auto it = sorts_.find(name);
  if (it == sorts_.end()) return std::nullopt;
  return it->second;
}

bool Signature::is_subsort(const std::string& sub, const std::string& super) const {
  if (sub.empty() || super.empty() || sub == super) return true;
  std::string cur = sub;
  for (std::size_t guard = 0; guard <= sorts_.size(); ++guard) {
    auto it = sorts_.find(cur);
    if (it == sorts_.end() || !it->second) return false;
    cur = *it->second;
    if (cur == super) return true;
  }
  return false;
}

const FunctionDecl* Signature::function(const std::string& name) const {
  auto it = functions_.find(name);
  return it == functions_.end() ? nullptr : &it->second;
}

std::vector<std::string> Signature::constants_of(const std::string& s) const {
  std::vector<std::string> out;
  for (const auto& [name, decl] : functions_) {
    if (decl.args.empty() && is_subsort(decl.result, s)) out.push_back(name);
  }
  return out;
}

bool Signature::has_generators(const std::string& s) const {
  for (const auto& [name, decl] : functions_) {
    if (!decl.args.empty() && is_subsort(decl.result, s)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Term

Term Term::make(Node n) {
  std::size_t h = std::hash<std::string>{}(n.name);
  h = mix(h, static_cast<std::size_t>(n.kind));
  for (const auto& a : n.args) {
    h = mix(h, a.hash());
    n.ground = n.ground && a.is_ground();
    n.size += a.size();
  }
  if (n.kind == Kind::Variable) n.ground = false;
  n.hash = h;
  return Term(std::make_shared<const Node>(std::move(n)));
}

Term Term::variable(std::string name, std::string sort) {
  return make(Node{Kind::Variable, std::move(name), std::move(sort), {}});
}

Term Term::apply(std::string function, std::vector<Term> args, std::string sort) {
  return make(Node{Kind::Application, std::move(function), std::move(sort), std::move(args)});
}

Term Term::number(double value) {
  bool moment = value >= 0 && value == std::floor(value);
  Node n{Kind::Number, number_text(value), moment ? sort::kMoment : sort::kNumber, {}};
  n.value = value;
  return make(std::move(n));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (!a.node_ || !b.node_) return false;
  if (a.hash() != b.hash() || a.kind() != b.kind() || a.name() != b.name()) return false;
  if (a.kind() == Term::Kind::Variable && a.sort() != b.sort()) return false;
  if (a.arity() != b.arity()) return false;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!(a.arg(i) == b.arg(i))) return false;
  }
  return true;
}

std::strong_ordering operator<=>(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return std::strong_ordering::equal;
  if (!a.node_) return std::strong_ordering::less;
  if (!b.node_) return std::strong_ordering::greater;
  if (auto c = a.kind() <=> b.kind(); c != 0) return c;
  if (a.is_number()) {
    if (a.value() < b.value()) return std::strong_ordering::less;
    if (a.value() > b.value()) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }
  if (auto c = a.name() <=> b.name(); c != 0) return c;
  if (a.is_variable()) return a.sort() <=> b.sort();
  if (auto c = a.arity() <=> b.arity(); c != 0) return c;
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (auto c = a.arg(i) <=> b.arg(i); c != 0) return c;
  }
  return std::strong_ordering::equal;
}

std::string to_string(const Term& t) {
  if (!t.valid()) return "<null>";
  if (t.arity() == 0) return t.name();
  std::string out = "(" + t.name();
  for (const auto& a : t.args()) {
    out += ' ';
    out += to_string(a);
  }
  out += ')';
  return out;
}

bool occurs_in(const Term& var, const Term& t) {
  if (t.is_variable()) return t == var;
  for (const auto& a : t.args()) {
    if (occurs_in(var, a)) return true;
  }
  return false;
}

void collect_subterms(const Term& t, std::vector<Term>& out) {
  out.push_back(t);
  for (const auto& a : t.args()) collect_subterms(a, out);
}

void collect_variables(const Term& t, std::set<Term>& out) {
  if (t.is_ground()) return;
  if (t.is_variable()) {
    out.insert(t);
    return;
  }
  for (const auto& a : t.args()) collect_variables(a, out);
}

Term replace_term(const Term& t, const Term& from, const Term& to) {
  if (t == from) return to;
  if (t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(replace_term(a, from, to));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::apply(t.name(), std::move(args), t.sort()) : t;
}

// ---------------------------------------------------------------------------
// Substitution

const Term* Substitution::lookup(const std::string& var) const {
  auto it = map_.find(var);
  return it == map_.end() ? nullptr : &it->second;
}

void Substitution::bind(const Term& var, Term value) {
  map_[var.name()] = std::move(value);
  vars_[var.name()] = var;
}

void Substitution::bind_checked(const Term& var, Term value, const Signature* sig) {
  if (!var.is_variable()) throw SortError("cannot bind non-variable " + to_string(var));
  bool ok = sig ? sig->is_subsort(value.sort(), var.sort())
                : (value.sort() == var.sort() || value.sort().empty() || var.sort().empty());
  if (!ok) {
    throw SortError("sort mismatch: " + to_string(value) + " : " + value.sort() + " cannot replace " + var.name() +
                    " : " + var.sort());
  }
  bind(var, std::move(value));
}

Term Substitution::apply(const Term& t) const {
  if (map_.empty() || t.is_ground()) return t;
  if (t.is_variable()) {
    const Term* v = lookup(t.name());
    if (!v) return t;
    if (*v == t) return t;
    return apply(*v);
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const auto& a : t.args()) {
    args.push_back(apply(a));
    changed = changed || !(args.back() == a);
  }
  return changed ? Term::apply(t.name(), std::move(args), t.sort()) : t;
}

Substitution Substitution::compose(const Substitution& other) const {
  Substitution out;
  for (const auto& [name, value] : map_) out.bind(vars_.at(name), other.apply(value));
  for (const auto& [name, value] : other.map_) {
    if (!out.lookup(name)) out.bind(other.vars_.at(name), value);
  }
  return out;
}

std::string to_string(const Substitution& s) {
  std::string out = "{";
  bool first = true;
  for (const auto& [name, value] : s.bindings()) {
    if (!first) out += ", ";
    first = false;
    out += name + "↦" + to_string(value);
  }
  return out + "}";
}

Substitution resolve(const Substitution& s) {
  Substitution out;
  for (const auto& [name, value] : s.bindings()) out.bind(s.variable(name), s.apply(value));
  return out;
}

// ---------------------------------------------------------------------------
// Unification

namespace {

bool sort_ok(const std::string& sub, const std::string& super, const Signature* sig) {
  if (sig) return sig->is_subsort(sub, super);
  return sub == super || sub.empty() || super.empty();
}

bool unify_rec(const Term& a0, const Term& b0, Substitution& s, const Signature* sig) {
  Term a = s.apply(a0);
  Term b = s.apply(b0);
  if (a == b) return true;
  if (a.is_variable() || b.is_variable()) {
    Term var = a.is_variable() ? a : b;
    Term other = a.is_variable() ? b : a;
    if (other.is_variable()) {
      // Bind the more general variable to the more specific one.
      if (sort_ok(other.sort(), var.sort(), sig)) {
        s.bind(var, other);
        return true;
      }
      if (sort_ok(var.sort(), other.sort(), sig)) {
        s.bind(other, var);
        return true;
      }
      return false;
    }
    if (occurs_in(var, other)) return false;
    if (!sort_ok(other.sort(), var.sort(), sig)) return false;
    s.bind(var, other);
    return true;
  }
  if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity()) return false;
  if (a.is_number()) return a.value() == b.value();
  for (std::size_t i = 0; i < a.arity(); ++i) {
    if (!unify_rec(a.arg(i), b.arg(i), s, sig)) return false;
  }
  return true;
}

}  // namespace

bool unify_into(const Term& a, const Term& b, Substitution& s, const Signature* sig) {
  if (!unify_rec(a, b, s, sig)) return false;
  s = resolve(s);
  return true;
}

std::optional<Substitution> unify(const Term& a, const Term& b, const Signature* sig) {
  Substitution s;
  if (!unify_into(a, b, s, sig)) return std::nullopt;
  return s;
}

bool match(const Term& pattern, const Term& term, Substitution& s, const Signature* sig) {
  if (pattern.is_variable()) {
    if (const Term* bound = s.lookup(pattern.name())) return *bound == term;
    if (!sort_ok(term.sort(), pattern.sort(), sig)) return false;
    s.bind(pattern, term);
    return true;
  }
  if (pattern.kind() != term.kind() || pattern.name() != term.name() || pattern.arity() != term.arity()) {
    return false;
  }
  for (std::size_t i = 0; i < pattern.arity(); ++i) {
    if (!match(pattern.arg(i), term.arg(i), s, sig)) return false;
  }
  return true;
}

}  // namespace dde
