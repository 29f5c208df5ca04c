#include "dde/ec.hpp"

#include <algorithm>
#include <optional>
#include <sstream>

#include "dde/clause.hpp"

namespace dde {

namespace {

const std::set<std::string> kEcPredicates = {"initially", "holds",   "happens", "clipped",   "initiates",
                                             "terminates", "prior", "trajectory"};
const std::set<std::string> kComparisons = {"=", ">", ">=", "<", "<="};

void flatten(const Formula& f, std::vector<Formula>& out) {
  if (f.is(Formula::Kind::And)) {
    for (const auto& c : f.children()) flatten(c, out);
  } else if (!f.is(Formula::Kind::True)) {
    out.push_back(f);
  }
}

bool is_comparison(const Term& atom) { return atom.is_application() && kComparisons.count(atom.name()) > 0; }

// A guard conjunct that generates bindings: positive holds or static atom.
bool is_generator(const Formula& f) {
  return f.is(Formula::Kind::Atom) && !is_comparison(f.term());
}

void check_guard(const Formula& guard, const std::string& source) {
  std::vector<Formula> parts;
  flatten(guard, parts);
  for (const auto& p : parts) {
    const Formula* a = &p;
    if (p.is(Formula::Kind::Not)) a = &p.child(0);
    if (!a->is(Formula::Kind::Atom)) throw DomainError("unsupported guard in axiom " + source);
    const Term& t = a->term();
    if (is_comparison(t)) continue;
    if (t.name() == "holds" || kEcPredicates.count(t.name()) == 0) continue;
    throw DomainError("unsupported guard atom " + to_string(t) + " in axiom " + source);
  }
}

void guard_bound_vars(const Formula& guard, std::set<Term>& out) {
  std::vector<Formula> parts;
  flatten(guard, parts);
  for (const auto& p : parts)
    if (is_generator(p)) collect_variables(p.term(), out);
}

void require_bound(const Term& head, const std::set<Term>& bound, const std::string& source) {
  std::set<Term> vars;
  collect_variables(head, vars);
  for (const auto& v : vars)
    if (!bound.count(v)) throw DomainError("unbound rule variable " + v.name() + " in axiom " + source);
}

struct GuardEval {
  const std::set<Term>& state;
  const std::set<Term>& statics;
  const Signature& sig;
  std::int64_t y;

  // Ground truth of a non-generator conjunct under s.
  bool test(const Formula& lit, const Substitution& s) const {
    bool negated = lit.is(Formula::Kind::Not);
    const Term atom = s.apply((negated ? lit.child(0) : lit).term());
    if (!atom.is_ground()) throw DomainError("guard literal not range-restricted: " + to_string(atom));
    bool value = false;
    if (is_comparison(atom)) {
      if (auto v = evaluate_ground(atom)) {
        value = *v;
      } else if (atom.name() == "=") {
        value = atom.arg(0) == atom.arg(1);
      } else {
        throw DomainError("cannot compare non-numeric terms: " + to_string(atom));
      }
    } else if (atom.name() == "holds") {
      if (atom.arg(1) != Term::number(static_cast<double>(y)))
        throw DomainError("guard refers to another tick: " + to_string(atom));
      value = state.count(atom.arg(0)) > 0;
    } else {
      value = statics.count(atom) > 0;
    }
    return value != negated;
  }

  void join(const std::vector<Formula>& gens, std::size_t i, const Substitution& s,
            const std::vector<Formula>& tests, std::vector<Substitution>& out) const {
    if (i == gens.size()) {
      for (const auto& t : tests)
        if (!test(t, s)) return;
      out.push_back(s);
      return;
    }
    const Term& atom = gens[i].term();
    if (atom.name() == "holds") {
      Substitution base = s;
      if (!match(atom.arg(1), Term::number(static_cast<double>(y)), base, &sig)) return;
      const Term pattern = base.apply(atom.arg(0));
      if (pattern.is_ground()) {
        if (state.count(pattern)) join(gens, i + 1, base, tests, out);
        return;
      }
      for (const auto& f : state) {
        Substitution ext = base;
        if (match(pattern, f, ext, &sig)) join(gens, i + 1, ext, tests, out);
      }
      return;
    }
    const Term pattern = s.apply(atom);
    for (const auto& a : statics) {
      Substitution ext = s;
      if (match(pattern, a, ext, &sig)) join(gens, i + 1, ext, tests, out);
    }
  }

  std::vector<Substitution> solve(const Formula& guard, const Substitution& s) const {
    std::vector<Formula> parts, gens, tests;
    flatten(guard, parts);
    for (const auto& p : parts) (is_generator(p) ? gens : tests).push_back(p);
    std::vector<Substitution> out;
    join(gens, 0, s, tests, out);
    return out;
  }
};

struct Active {
  std::size_t decl;
  Substitution binding;
  Term base;
  std::int64_t start;
  std::optional<std::int64_t> clip;
};

// Guards over happens/initiates/clipped/... belong to the calculus itself,
// which the simulator implements natively.
bool calculus_guard(const Formula& guard) {
  bool found = false;
  for_each_subformula(guard, [&](const Formula& g) {
    if (g.is(Formula::Kind::Atom) && g.term().name() != "holds" && kEcPredicates.count(g.term().name())) found = true;
  });
  return found;
}

void compile_one(const Formula& input, const std::string& source, DomainAxioms& d) {
  Formula f = input;
  std::set<Term> universals;
  while (f.is(Formula::Kind::Forall)) {
    universals.insert(f.bound());
    f = f.child(0);
  }
  Formula guard = Formula::truth(true);
  if (f.is(Formula::Kind::Implies)) {
    guard = f.child(0);
    f = f.child(1);
  }
  if (!f.is(Formula::Kind::Atom) || modal_depth(guard) > 0 || calculus_guard(guard)) {
    d.passive.push_back(source);
    return;
  }
  const Term& head = f.term();
  const std::string& p = head.name();
  bool plain = universals.empty() && guard.is(Formula::Kind::True);

  if (is_comparison(head)) {
    d.passive.push_back(source);
    return;
  }
  if (p == "initially") {
    if (!plain || !head.is_ground()) throw DomainError("initially must be ground in axiom " + source);
    d.initially.push_back(head.arg(0));
    return;
  }
  if (p == "trajectory") {
    if (!guard.is(Formula::Kind::True)) throw DomainError("guarded trajectory in axiom " + source);
    std::set<Term> bound;
    collect_variables(head.arg(0), bound);
    collect_variables(head.arg(1), bound);
    collect_variables(head.arg(3), bound);
    require_bound(head.arg(2), bound, source);
    d.trajectories.push_back({head.arg(0), head.arg(1), head.arg(2), head.arg(3), source});
    return;
  }
  if (p == "initiates" || p == "terminates") {
    check_guard(guard, source);
    std::set<Term> bound;
    collect_variables(head.arg(0), bound);
    collect_variables(head.arg(2), bound);
    guard_bound_vars(guard, bound);
    require_bound(head.arg(1), bound, source);
    d.effects.push_back({p == "initiates", head.arg(0), head.arg(1), head.arg(2), guard, source});
    return;
  }
  if (p == "happens") {
    if (plain && head.is_ground()) {
      if (!head.arg(1).is_number()) throw DomainError("event time must be a numeral in axiom " + source);
      d.schedule.emplace_back(head.arg(0), static_cast<std::int64_t>(head.arg(1).value()));
      return;
    }
    check_guard(guard, source);
    std::set<Term> bound;
    collect_variables(head.arg(1), bound);
    guard_bound_vars(guard, bound);
    require_bound(head.arg(0), bound, source);
    d.triggers.push_back({head.arg(0), head.arg(1), guard, source});
    return;
  }
  if (p == "holds") {
    check_guard(guard, source);
    std::set<Term> bound;
    collect_variables(head.arg(1), bound);
    guard_bound_vars(guard, bound);
    require_bound(head.arg(0), bound, source);
    d.constraints.push_back({head.arg(0), head.arg(1), guard, source});
    return;
  }
  if (kEcPredicates.count(p) == 0 && plain && head.is_ground()) {
    d.statics.insert(head);
    return;
  }
  d.passive.push_back(source);
}

}  // namespace

DomainAxioms compile_domain(const std::vector<NamedFormula>& axioms, const Signature&) {
  DomainAxioms d;
  for (const auto& a : axioms) compile_one(a.formula, a.name, d);
  return d;
}

DomainAxioms compile_domain(const std::vector<Formula>& axioms, const Signature&) {
  DomainAxioms d;
  for (std::size_t i = 0; i < axioms.size(); ++i) compile_one(axioms[i], "#" + std::to_string(i), d);
  return d;
}

bool Trace::holds(const Term& fluent, std::int64_t y) const {
  if (y < 0 || y > horizon()) return false;
  return state(y).count(fluent) > 0;
}

std::set<Term> Trace::fluents() const {
  std::set<Term> out;
  for (const auto& s : states_) out.insert(s.begin(), s.end());
  return out;
}

std::string Trace::dump() const {
  std::ostringstream os;
  for (std::int64_t y = 0; y <= horizon(); ++y) {
    std::vector<std::string> lines;
    for (const auto& f : state(y)) lines.push_back(to_string(f));
    std::sort(lines.begin(), lines.end());
    for (const auto& l : lines) os << y << ' ' << l << '\n';
  }
  return os.str();
}

Trace simulate(const DomainAxioms& d, std::int64_t horizon, const Signature& sig) {
  if (horizon < 0) throw ContractError("negative horizon");
  Trace tr(horizon);
  std::vector<Active> active;
  std::set<Term> carried(d.initially.begin(), d.initially.end());

  auto ramify = [&](std::set<Term>& s, std::int64_t y, std::set<Term>& added) {
    const Term now = Term::number(static_cast<double>(y));
    bool changed = true;
    while (changed) {
      changed = false;
      GuardEval ev{s, d.statics, sig, y};
      std::vector<Term> fresh;
      for (const auto& c : d.constraints) {
        Substitution base;
        if (!match(c.time, now, base, &sig)) continue;
        for (const auto& sol : ev.solve(c.guard, base)) {
          Term f = sol.apply(c.fluent);
          if (!s.count(f)) fresh.push_back(f);
        }
      }
      for (auto& f : fresh)
        if (s.insert(f).second) {
          added.insert(f);
          changed = true;
        }
    }
  };

  auto place = [&](const Active& a, std::int64_t y) {
    const auto& decl = d.trajectories[a.decl];
    Substitution s = a.binding;
    if (!match(decl.delta, Term::number(static_cast<double>(y - a.start)), s, &sig)) return std::optional<Term>{};
    return std::optional<Term>{s.apply(decl.derived)};
  };

  auto start_trajectories = [&](const Term& fluent, std::int64_t y) {
    std::vector<Active> started;
    for (std::size_t i = 0; i < d.trajectories.size(); ++i) {
      const auto& decl = d.trajectories[i];
      Substitution s;
      if (!match(decl.base, fluent, s, &sig)) continue;
      if (!match(decl.start, Term::number(static_cast<double>(y)), s, &sig)) continue;
      bool running = std::any_of(active.begin(), active.end(), [&](const Active& a) {
        return a.decl == i && a.base == fluent && !a.clip;
      });
      if (!running) started.push_back({i, s, fluent, y, std::nullopt});
    }
    return started;
  };

  for (const auto& f : d.initially)
    for (auto& a : start_trajectories(f, 0)) active.push_back(std::move(a));

  for (std::int64_t y = 0; y <= horizon; ++y) {
    std::set<Term>& S = tr.state(y);
    S = carried;
    for (const auto& a : active) {
      if (a.start > y || (a.clip && *a.clip < y)) continue;
      if (auto f = place(a, y)) {
        S.insert(*f);
        tr.derived(y).insert(*f);
      }
    }
    ramify(S, y, tr.constrained(y));

    std::set<Term>& events = tr.events(y);
    std::set<Term>& I = tr.initiated(y);
    std::set<Term>& T = tr.terminated(y);
    for (const auto& [e, t] : d.schedule)
      if (t == y) events.insert(e);

    std::set<Term> processed;
    const Term now = Term::number(static_cast<double>(y));
    while (true) {
      GuardEval ev{S, d.statics, sig, y};
      for (const auto& trig : d.triggers) {
        Substitution base;
        if (!match(trig.time, now, base, &sig)) continue;
        for (const auto& sol : ev.solve(trig.guard, base)) events.insert(sol.apply(trig.event));
      }
      std::vector<Term> pending;
      for (const auto& e : events)
        if (!processed.count(e)) pending.push_back(e);
      if (pending.empty()) break;

      std::set<Term> newly_initiated;
      for (const auto& e : pending) {
        processed.insert(e);
        for (const auto& r : d.effects) {
          Substitution s;
          if (!match(r.event, e, s, &sig) || !match(r.time, now, s, &sig)) continue;
          for (const auto& sol : ev.solve(r.guard, s)) {
            Term f = sol.apply(r.fluent);
            if (r.initiates) {
              if (I.insert(f).second) newly_initiated.insert(f);
            } else {
              T.insert(f);
            }
          }
        }
      }
      for (const auto& f : T)
        for (auto& a : active)
          if (a.base == f && !a.clip && a.start <= y) a.clip = y;
      bool placed = false;
      for (const auto& f : newly_initiated) {
        for (auto& a : start_trajectories(f, y)) {
          if (auto g = place(a, y)) {
            S.insert(*g);
            tr.derived(y).insert(*g);
            placed = true;
          }
          active.push_back(std::move(a));
        }
      }
      if (placed) ramify(S, y, tr.constrained(y));
    }
    for (const auto& f : I)
      if (T.count(f))
        throw DomainError("fluent " + to_string(f) + " both initiated and terminated at " + std::to_string(y));

    carried.clear();
    for (const auto& f : S)
      if (!tr.derived(y).count(f) && !T.count(f)) carried.insert(f);
    carried.insert(I.begin(), I.end());
  }
  return tr;
}

EffectProfile effect_profile(const Trace& baseline, const Trace& acted) {
  if (baseline.horizon() != acted.horizon()) throw ContractError("traces have different horizons");
  EffectProfile p;
  for (std::int64_t y = 0; y <= acted.horizon(); ++y) {
    for (const auto& f : acted.state(y))
      if (!baseline.state(y).count(f)) p.initiated.emplace(f, y);
    for (const auto& f : baseline.state(y))
      if (!acted.state(y).count(f)) p.terminated.emplace(f, y);
  }
  return p;
}

std::vector<Term> fluent_universe(const Signature& sig, std::int64_t horizon) {
  std::vector<Term> out;
  for (const auto& [name, decl] : sig.functions()) {
    if (decl.result.empty() || !sig.is_subsort(decl.result, sort::kFluent)) continue;
    std::vector<std::vector<Term>> domains;
    for (const auto& s : decl.args) {
      std::vector<Term> dom;
      if (!s.empty() && sig.is_subsort(s, sort::kNumber)) {
        for (std::int64_t v = 0; v <= horizon; ++v) dom.push_back(Term::number(static_cast<double>(v)));
      } else {
        if (s.empty() || sig.has_generators(s))
          throw DomainError("fluent universe is infinite: argument sort '" + s + "' of " + name);
        for (const auto& c : sig.constants_of(s)) dom.push_back(Term::constant(c, sig.function(c)->result));
      }
      domains.push_back(std::move(dom));
    }
    std::vector<Term> args(domains.size());
    auto rec = [&](auto&& self, std::size_t i) -> void {
      if (i == domains.size()) {
        out.push_back(Term::apply(name, args, decl.result));
        return;
      }
      for (const auto& t : domains[i]) {
        args[i] = t;
        self(self, i + 1);
      }
    };
    rec(rec, 0);
  }
  return out;
}

std::vector<Formula> holds_facts(const Trace& trace, const Signature& sig) {
  std::set<Term> universe;
  for (const auto& f : fluent_universe(sig, trace.horizon())) universe.insert(f);
  for (const auto& f : trace.fluents()) universe.insert(f);
  std::vector<Formula> out;
  for (std::int64_t y = 0; y <= trace.horizon(); ++y) {
    const Term t = Term::number(static_cast<double>(y));
    for (const auto& f : universe) {
      Formula h = holds_atom(f, t);
      out.push_back(trace.state(y).count(f) ? h : Formula::negation(h));
    }
  }
  return out;
}

std::vector<std::string> inertia_violations(const Trace& trace) {
  std::vector<std::string> out;
  for (std::int64_t y = 0; y < trace.horizon(); ++y) {
    std::set<Term> carried;
    for (const auto& f : trace.state(y))
      if (!trace.derived(y).count(f) && !trace.terminated(y).count(f)) carried.insert(f);
    carried.insert(trace.initiated(y).begin(), trace.initiated(y).end());
    const auto& next = trace.state(y + 1);
    for (const auto& f : carried)
      if (!next.count(f)) out.push_back(std::to_string(y + 1) + " missing " + to_string(f));
    for (const auto& f : next)
      if (!carried.count(f) && !trace.derived(y + 1).count(f) && !trace.constrained(y + 1).count(f))
        out.push_back(std::to_string(y + 1) + " unexplained " + to_string(f));
  }
  return out;
}

}  // namespace dde
