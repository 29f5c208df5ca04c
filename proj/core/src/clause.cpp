#include "dde/clause.hpp"

#include <algorithm>
#include <map>
#include <cctype>
#include <sstream>

#include "dde/printer.hpp"

namespace dde {

std::size_t Clause::weight() const {
  std::size_t w = 0;
  for (const auto& l : literals) w += l.atom.size();
  return w;
}

std::string to_string(const Literal& l) { return (l.positive ? "" : "~") + to_string(l.atom); }

std::string to_string(const Clause& c) {
  if (c.literals.empty()) return "[]";
  std::string out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (i) out += " | ";
    out += to_string(c.literals[i]);
  }
  return out;
}

bool is_equality(const Term& atom) { return atom.is_application() && atom.name() == "=" && atom.arity() == 2; }

bool is_shadow_atom(const Term& atom) { return atom.is_application() && atom.name().starts_with("$sh"); }

std::optional<bool> evaluate_ground(const Term& atom) {
  if (!atom.is_application() || atom.arity() != 2) return std::nullopt;
  const std::string& p = atom.name();
  if (p != "=" && p != ">" && p != ">=" && p != "<" && p != "<=") return std::nullopt;
  const Term& a = atom.arg(0);
  const Term& b = atom.arg(1);
  if (p == "=" && a == b) return true;
  if (!a.is_number() || !b.is_number()) return std::nullopt;
  double x = a.value();
  double y = b.value();
  if (p == "=") return x == y;
  if (p == ">") return x > y;
  if (p == ">=") return x >= y;
  if (p == "<") return x < y;
  return x <= y;
}

namespace {

Term rename_term(const Term& t, const std::map<std::string, Term>& names) {
  if (t.is_variable()) {
    auto it = names.find(t.name());
    return it == names.end() ? t : it->second;
  }
  if (t.is_ground() || t.arity() == 0) return t;
  std::vector<Term> args;
  args.reserve(t.arity());
  for (const auto& a : t.args()) args.push_back(rename_term(a, names));
  return Term::apply(t.name(), std::move(args), t.sort());
}

void variables_in_order(const Term& t, std::vector<Term>& out) {
  if (t.is_variable()) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const auto& a : t.args()) variables_in_order(a, out);
}

Clause rename_canonical(const Clause& c) {
  std::vector<Term> vars;
  for (const auto& l : c.literals) variables_in_order(l.atom, vars);
  std::map<std::string, Term> names;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    names.emplace(vars[i].name(), Term::variable("X" + std::to_string(i), vars[i].sort()));
  }
  Clause out;
  for (const auto& l : c.literals) out.literals.push_back({l.positive, rename_term(l.atom, names)});
  return out;
}

}  // namespace

std::optional<Clause> normalize(Clause c) {
  std::vector<Literal> kept;
  for (auto& l : c.literals) {
    if (auto v = evaluate_ground(l.atom)) {
      if (*v == l.positive) return std::nullopt;
      continue;
    }
    kept.push_back(std::move(l));
  }
  c.literals = std::move(kept);
  for (int pass = 0; pass < 2; ++pass) {
    c = rename_canonical(c);
    std::sort(c.literals.begin(), c.literals.end());
    c.literals.erase(std::unique(c.literals.begin(), c.literals.end()), c.literals.end());
  }
  return c;
}

Clause rename_variables(const Clause& c, const std::string& prefix) {
  std::vector<Term> vars;
  for (const auto& l : c.literals) variables_in_order(l.atom, vars);
  std::map<std::string, Term> names;
  for (const auto& v : vars) {
    std::string n = v.name();
    if (!n.empty() && n[0] == 'X') n = prefix + n.substr(1);
    else n = prefix + n;
    names.emplace(v.name(), Term::variable(n, v.sort()));
  }
  Clause out;
  for (const auto& l : c.literals) out.literals.push_back({l.positive, rename_term(l.atom, names)});
  return out;
}

Clause apply(const Clause& c, const Substitution& s) {
  Clause out;
  out.literals.reserve(c.literals.size());
  for (const auto& l : c.literals) out.literals.push_back({l.positive, s.apply(l.atom)});
  return out;
}

bool is_tautology(const Clause& c) {
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    const auto& l = c.literals[i];
    if (l.positive && is_equality(l.atom) && l.atom.arg(0) == l.atom.arg(1)) return true;
    for (std::size_t j = i + 1; j < c.literals.size(); ++j) {
      if (c.literals[j].positive != l.positive && c.literals[j].atom == l.atom) return true;
    }
  }
  return false;
}

namespace {

bool subsumes_from(const Clause& a, std::size_t i, const Clause& b, const Substitution& s, const Signature* sig) {
  if (i == a.literals.size()) return true;
  const auto& la = a.literals[i];
  for (const auto& lb : b.literals) {
    if (lb.positive != la.positive) continue;
    if (lb.atom.name() != la.atom.name()) continue;
    Substitution ext = s;
    if (match(la.atom, lb.atom, ext, sig) && subsumes_from(a, i + 1, b, ext, sig)) return true;
  }
  return false;
}

}  // namespace

bool subsumes(const Clause& a, const Clause& b, const Signature* sig) {
  if (a.literals.size() > b.literals.size()) return false;
  return subsumes_from(a, 0, b, {}, sig);
}

// ---------------------------------------------------------------------------
// Clausification

namespace {

using Lits = std::vector<Literal>;
using Cnf = std::vector<Lits>;

struct CnfBuilder {
  int& skolem;
  int& variable;

  Cnf product(const Cnf& a, const Cnf& b) {
    Cnf out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a) {
      for (const auto& y : b) {
        Lits c = x;
        c.insert(c.end(), y.begin(), y.end());
        out.push_back(std::move(c));
      }
    }
    return out;
  }

  Cnf run(const Formula& f, bool pos, std::vector<Term>& universals, std::map<std::string, Term>& env) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::True:
        return pos ? Cnf{} : Cnf{Lits{}};
      case K::False:
        return pos ? Cnf{Lits{}} : Cnf{};
      case K::Atom:
        return Cnf{Lits{{pos, rename_term(f.term(), env)}}};
      case K::Not:
        return run(f.child(0), !pos, universals, env);
      case K::And:
      case K::Or: {
        bool conj = (f.kind() == K::And) == pos;
        Cnf acc = conj ? Cnf{} : Cnf{Lits{}};
        for (const auto& c : f.children()) {
          Cnf part = run(c, pos, universals, env);
          if (conj) acc.insert(acc.end(), part.begin(), part.end());
          else acc = product(acc, part);
        }
        return acc;
      }
      case K::Implies: {
        if (pos) return product(run(f.child(0), false, universals, env), run(f.child(1), true, universals, env));
        Cnf a = run(f.child(0), true, universals, env);
        Cnf b = run(f.child(1), false, universals, env);
        a.insert(a.end(), b.begin(), b.end());
        return a;
      }
      case K::Iff: {
        const Formula& a = f.child(0);
        const Formula& b = f.child(1);
        Cnf x = product(run(a, !pos, universals, env), run(b, true, universals, env));
        Cnf y = product(run(a, pos, universals, env), run(b, false, universals, env));
        x.insert(x.end(), y.begin(), y.end());
        return x;
      }
      case K::Forall:
      case K::Exists: {
        bool universal = (f.kind() == K::Forall) == pos;
        const Term& v = f.bound();
        Term replacement;
        if (universal) {
          replacement = Term::variable("%v" + std::to_string(variable++), v.sort());
        } else {
          replacement = Term::apply("sk" + std::to_string(skolem++), universals, v.sort());
        }
        auto saved = env.find(v.name()) == env.end() ? std::optional<Term>{} : std::optional<Term>{env[v.name()]};
        env[v.name()] = replacement;
        if (universal) universals.push_back(replacement);
        Cnf out = run(f.child(0), pos, universals, env);
        if (universal) universals.pop_back();
        if (saved) env[v.name()] = *saved;
        else env.erase(v.name());
        return out;
      }
      case K::Modal:
      case K::Meta:
        break;
    }
    throw ContractError("clausify: formula is not first-order: " + print_formula(f));
  }
};

}  // namespace

std::vector<Clause> Clausifier::clausify(const Formula& f) {
  CnfBuilder b{skolem_, variable_};
  std::vector<Term> universals;
  std::map<std::string, Term> env;
  std::vector<Clause> out;
  for (auto& lits : b.run(f, true, universals, env)) {
    auto c = normalize(Clause{std::move(lits)});
    if (c && !is_tautology(*c)) out.push_back(std::move(*c));
  }
  return out;
}

std::vector<Clause> clausify(const std::vector<Formula>& fs) {
  Clausifier c;
  std::vector<Clause> out;
  for (const auto& f : fs) {
    auto part = c.clausify(f);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

namespace {

std::string tptp_name(const std::string& s) {
  bool plain = !s.empty() && std::islower(static_cast<unsigned char>(s[0]));
  for (char c : s) plain = plain && (std::isalnum(static_cast<unsigned char>(c)) || c == '_');
  if (plain) return s;
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string tptp_term(const Term& t) {
  if (t.is_variable()) {
    std::string n = t.name();
    for (auto& c : n) {
      if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
    }
    if (!std::isupper(static_cast<unsigned char>(n[0]))) n = "V" + n;
    return n;
  }
  if (t.is_number()) return t.name();
  std::string out = tptp_name(t.name());
  if (t.arity() == 0) return out;
  out += '(';
  for (std::size_t i = 0; i < t.arity(); ++i) out += (i ? "," : "") + tptp_term(t.arg(i));
  return out + ')';
}

std::string tptp_literal(const Literal& l) {
  if (is_equality(l.atom)) {
    return tptp_term(l.atom.arg(0)) + (l.positive ? " = " : " != ") + tptp_term(l.atom.arg(1));
  }
  return (l.positive ? "" : "~") + tptp_term(l.atom);
}

}  // namespace

std::string dump_tptp(const std::vector<Clause>& clauses, const std::string& role) {
  std::ostringstream out;
  for (std::size_t i = 0; i < clauses.size(); ++i) {
    out << "cnf(c" << i << ", " << role << ", (";
    const auto& c = clauses[i];
    if (c.literals.empty()) out << "$false";
    for (std::size_t j = 0; j < c.literals.size(); ++j) out << (j ? " | " : "") << tptp_literal(c.literals[j]);
    out << ")).\n";
  }
  return out.str();
}

}  // namespace dde
