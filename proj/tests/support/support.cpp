#include "support.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace ddetest {

using dde::FluentLiteral;
using dde::MeansMode;

std::filesystem::path source_dir() { return DDE_SOURCE_DIR; }

std::filesystem::path scenario_path(const std::string& file) { return source_dir() / "scenarios" / file; }

std::vector<std::filesystem::path> scenario_corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(source_dir() / "scenarios"))
    if (e.path().extension() == ".dde") out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

template <class T>
const T& pick(Rng& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

void declare(Signature& sig, const std::string& name, std::vector<std::string> args, const std::string& result) {
  sig.declare_function({name, std::move(args), result});
}

// Text generator for random formulas. Variables get fresh names so that the
// same text always denotes the same tree.
struct FormulaText {
  Rng& rng;
  int fresh = 0;
  std::vector<std::string> objs;
  std::vector<std::string> moments;

  std::string obj(int depth) {
    int k = uniform(rng, 0, depth > 0 ? 4 : 2);
    if (k <= 1 && !objs.empty() && coin(rng)) return pick(rng, objs);
    if (k <= 2) return coin(rng) ? "a" : "b";
    if (k == 3) return "(f " + obj(depth - 1) + ")";
    return "(g " + obj(depth - 1) + " " + obj(depth - 1) + ")";
  }
  std::string moment() {
    if (!moments.empty() && coin(rng)) return pick(rng, moments);
    return coin(rng) ? "now" : std::to_string(uniform(rng, 0, 9));
  }
  std::string agent() { return coin(rng) ? "I" : "J"; }
  std::string holds() { return "(holds (flu " + obj(1) + ") " + moment() + ")"; }
  std::string happens() { return "(happens (action " + agent() + " (act " + obj(1) + ")) " + moment() + ")"; }

  std::string atom() {
    switch (uniform(rng, 0, 8)) {
      case 0: return "(p " + obj(2) + ")";
      case 1: return "(r " + obj(1) + " " + obj(1) + ")";
      case 2: return holds();
      case 3: return happens();
      case 4: return "(= " + obj(1) + " " + obj(1) + ")";
      case 5: return std::string("(") + (coin(rng) ? "<" : ">=") + " " + moment() + " " + moment() + ")";
      case 6: return coin(rng) ? "true" : "false";
      case 7: return "sigma";
      default: return "(p " + obj(0) + ")";
    }
  }

  std::string formula(int depth) {
    if (depth <= 0) return atom();
    switch (uniform(rng, 0, 10)) {
      case 0: return "(not " + formula(depth - 1) + ")";
      case 1:
      case 2: {
        std::string s = coin(rng) ? "(and" : "(or";
        for (int i = uniform(rng, 2, 3); i > 0; --i) s += " " + formula(depth - 1);
        return s + ")";
      }
      case 3: return "(implies " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 4: return "(iff " + formula(depth - 1) + " " + formula(depth - 1) + ")";
      case 5:
      case 6: {
        std::string q = coin(rng) ? "forall" : "exists";
        std::string binders;
        std::size_t o = objs.size(), m = moments.size();
        for (int i = uniform(rng, 1, 2); i > 0; --i) {
          std::string v = "v" + std::to_string(fresh++);
          bool is_obj = coin(rng);
          (is_obj ? objs : moments).push_back(v);
          binders += "(" + v + (is_obj ? " Object)" : " Moment)");
        }
        std::string body = formula(depth - 1);
        objs.resize(o);
        moments.resize(m);
        return "(" + q + " (" + binders + ") " + body + ")";
      }
      default: return modal(depth);
    }
  }

  std::string modal(int depth) {
    switch (uniform(rng, 0, 7)) {
      case 0: return "(P " + agent() + " " + moment() + " " + formula(depth - 1) + ")";
      case 1: return "(K " + agent() + " " + moment() + " " + formula(depth - 1) + ")";
      case 2: return "(B " + agent() + " " + moment() + " " + formula(depth - 1) + ")";
      case 3: return "(C " + moment() + " " + formula(depth - 1) + ")";
      case 4:
        if (coin(rng)) return "(S " + agent() + " " + moment() + " " + formula(depth - 1) + ")";
        return "(S " + agent() + " " + agent() + " " + moment() + " " + formula(depth - 1) + ")";
      case 5: return "(D " + agent() + " " + moment() + " " + holds() + ")";
      case 6: return "(I " + agent() + " " + moment() + " " + formula(depth - 1) + ")";
      default: {
        std::string obligated;
        switch (uniform(rng, 0, 2)) {
          case 0: obligated = happens(); break;
          case 1: obligated = "(not " + happens() + ")"; break;
          default: obligated = "(and " + formula(depth - 1) + " " + formula(depth - 1) + ")"; break;
        }
        return "(O " + agent() + " " + moment() + " " + formula(depth - 1) + " " + obligated + ")";
      }
    }
  }
};

}  // namespace

Signature roundtrip_signature() {
  Signature sig;
  declare(sig, "f", {"Object"}, "Object");
  declare(sig, "g", {"Object", "Object"}, "Object");
  declare(sig, "a", {}, "Object");
  declare(sig, "b", {}, "Object");
  declare(sig, "p", {"Object"}, "Boolean");
  declare(sig, "r", {"Object", "Object"}, "Boolean");
  declare(sig, "flu", {"Object"}, "Fluent");
  declare(sig, "act", {"Object"}, "ActionType");
  declare(sig, "I", {}, "Agent");
  declare(sig, "J", {}, "Agent");
  declare(sig, "now", {}, "Moment");
  declare(sig, "sigma", {}, "Boolean");
  return sig;
}

Formula random_formula(Rng& rng, const Signature& sig, int depth) {
  FormulaText gen{rng};
  return dde::parse_formula(gen.formula(depth), sig);
}

Signature propositional_signature(int atoms) {
  Signature sig;
  for (int i = 0; i < atoms; ++i) declare(sig, "p" + std::to_string(i), {}, "Boolean");
  return sig;
}

Formula random_propositional(Rng& rng, int atoms, int depth) {
  if (depth <= 0 || coin(rng, 0.2))
    return Formula::atom(Term::constant("p" + std::to_string(uniform(rng, 0, atoms - 1)), "Boolean"));
  auto sub = [&] { return random_propositional(rng, atoms, depth - 1); };
  switch (uniform(rng, 0, 4)) {
    case 0: return Formula::negation(sub());
    case 1: return Formula::conjunction({sub(), sub()});
    case 2: return Formula::disjunction({sub(), sub(), sub()});
    case 3: return Formula::implication(sub(), sub());
    default: return Formula::biconditional(sub(), sub());
  }
}

namespace {
bool atom_value(const Term& t, unsigned assignment) {
  return (assignment >> std::stoi(t.name().substr(1))) & 1U;
}
}  // namespace

bool evaluate(const Formula& f, unsigned assignment) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return true;
    case K::False: return false;
    case K::Atom: return atom_value(f.term(), assignment);
    case K::Not: return !evaluate(f.child(0), assignment);
    case K::And:
      for (const auto& c : f.children())
        if (!evaluate(c, assignment)) return false;
      return true;
    case K::Or:
      for (const auto& c : f.children())
        if (evaluate(c, assignment)) return true;
      return false;
    case K::Implies: return !evaluate(f.child(0), assignment) || evaluate(f.child(1), assignment);
    case K::Iff: return evaluate(f.child(0), assignment) == evaluate(f.child(1), assignment);
    default: throw dde::ContractError("not propositional");
  }
}

bool evaluate(const std::vector<dde::Clause>& clauses, unsigned assignment) {
  for (const auto& c : clauses) {
    bool sat = false;
    for (const auto& l : c.literals) sat = sat || atom_value(l.atom, assignment) == l.positive;
    if (!sat) return false;
  }
  return true;
}

bool tautology(const Formula& f, int atoms) {
  for (unsigned a = 0; a < (1U << atoms); ++a)
    if (!evaluate(f, a)) return false;
  return true;
}

Term random_term(Rng& rng, int depth, bool allow_variables) {
  static const std::vector<std::string> vars{"X", "Y", "Z"};
  int k = uniform(rng, 0, depth > 0 ? 5 : 2);
  if (k <= 1 && allow_variables) return Term::variable(pick(rng, vars), "Object");
  if (k <= 2) return Term::constant(coin(rng) ? "a" : "b", "Object");
  if (k <= 3) return Term::apply("f", {random_term(rng, depth - 1, allow_variables)}, "Object");
  return Term::apply("g", {random_term(rng, depth - 1, allow_variables), random_term(rng, depth - 1, allow_variables)},
                     "Object");
}

std::vector<Term> ground_terms(int depth) {
  std::vector<Term> out{Term::constant("a", "Object"), Term::constant("b", "Object")};
  for (int d = 0; d < depth; ++d) {
    std::vector<Term> next = out;
    for (const auto& x : out) {
      next.push_back(Term::apply("f", {x}, "Object"));
      for (const auto& y : out) next.push_back(Term::apply("g", {x, y}, "Object"));
    }
    std::sort(next.begin(), next.end());
    next.erase(std::unique(next.begin(), next.end()), next.end());
    out = std::move(next);
  }
  return out;
}

std::set<Term> variables_of(const Term& a, const Term& b) {
  std::set<Term> vs;
  dde::collect_variables(a, vs);
  dde::collect_variables(b, vs);
  return vs;
}

// ---------------------------------------------------------------------------

Signature micro_signature() {
  Signature sig;
  for (const char* o : {"a", "b", "c"}) declare(sig, o, {}, "Object");
  declare(sig, "p", {"Object"}, "Fluent");
  declare(sig, "q", {"Object"}, "Fluent");
  declare(sig, "go", {"Object"}, "Event");
  declare(sig, "flip", {"Object"}, "ActionType");
  declare(sig, "I", {}, "Agent");
  declare(sig, "now", {}, "Moment");
  declare(sig, "sigma", {}, "Boolean");
  return sig;
}

Term micro_fluent(const std::string& pred, const std::string& obj) {
  return Term::apply(pred, {Term::constant(obj, "Object")}, "Fluent");
}
Term micro_event(const std::string& obj) { return Term::apply("go", {Term::constant(obj, "Object")}, "Event"); }
Term micro_action_type(const std::string& obj) {
  return Term::apply("flip", {Term::constant(obj, "Object")}, "ActionType");
}
Term micro_action(const std::string& obj) {
  return Term::apply("action", {Term::constant("I", "Agent"), micro_action_type(obj)}, "Action");
}

MicroDomain random_micro_domain(Rng& rng, int max_fluents, int max_events, std::int64_t horizon,
                                std::optional<Term> action) {
  static const std::vector<std::string> objs{"a", "b", "c"};
  MicroDomain d;
  d.horizon = horizon;
  std::vector<Term> pool;
  for (const char* p : {"p", "q"})
    for (const auto& o : objs) pool.push_back(micro_fluent(p, o));
  std::shuffle(pool.begin(), pool.end(), rng);
  d.fluents.assign(pool.begin(), pool.begin() + uniform(rng, 1, max_fluents));

  std::vector<Term> events;
  for (const auto& o : objs) events.push_back(micro_event(o));
  std::shuffle(events.begin(), events.end(), rng);
  int scheduled = uniform(rng, action ? 0 : 1, max_events - (action ? 1 : 0));
  d.events.assign(events.begin(), events.begin() + scheduled);
  for (const auto& e : d.events)
    for (int k = uniform(rng, 1, 2); k > 0; --k)
      d.schedule.emplace_back(e, uniform(rng, 0, static_cast<int>(horizon) - 1));
  if (action) d.events.push_back(*action);

  for (const auto& f : d.fluents)
    if (coin(rng, 0.4)) d.initially.insert(f);

  for (int k = uniform(rng, 1, 4); k > 0; --k) {
    MicroEffect e;
    e.initiates = coin(rng, 0.6);
    e.event = action && d.effects.empty() ? *action : pick(rng, d.events);
    e.fluent = pick(rng, d.fluents);
    if (coin(rng)) e.guard = std::make_pair(pick(rng, d.fluents), coin(rng, 0.7));
    d.effects.push_back(std::move(e));
  }
  return d;
}

std::vector<std::string> micro_axiom_texts(const MicroDomain& d) {
  using dde::to_string;
  std::vector<std::string> out;
  int n = 0;
  for (const auto& f : d.initially)
    out.push_back("(init-" + std::to_string(n++) + " (initially " + to_string(f) + "))");
  for (const auto& [e, y] : d.schedule)
    out.push_back("(sched-" + std::to_string(n++) + " (happens " + to_string(e) + " " + std::to_string(y) + "))");
  for (const auto& e : d.effects) {
    std::string head = std::string("(") + (e.initiates ? "initiates " : "terminates ") + to_string(e.event) + " " +
                       to_string(e.fluent) + " t)";
    std::string body = head;
    if (e.guard) {
      std::string g = "(holds " + to_string(e.guard->first) + " t)";
      if (!e.guard->second) g = "(not " + g + ")";
      body = "(implies " + g + " " + head + ")";
    }
    out.push_back("(effect-" + std::to_string(n++) + " (forall ((t Moment)) " + body + "))");
  }
  return out;
}

std::vector<dde::NamedFormula> micro_theory(const MicroDomain& d, const Signature& sig) {
  std::vector<dde::NamedFormula> out;
  for (const auto& text : micro_axiom_texts(d)) {
    auto s = dde::read_sexpr(text);
    dde::VariableScope scope;
    out.push_back({s.items[0].text, dde::formula_from_sexpr(s.items[1], sig, scope), 0});
  }
  return out;
}

std::optional<std::vector<std::set<Term>>> brute_force_states(const MicroDomain& d) {
  std::map<std::pair<Term, std::int64_t>, bool> memo;
  std::function<bool(const Term&, std::int64_t)> holds;

  auto fires = [&](const MicroEffect& e, std::int64_t t) {
    bool happened = false;
    for (const auto& [ev, y] : d.schedule) happened = happened || (ev == e.event && y == t);
    if (!happened) return false;
    return !e.guard || holds(e.guard->first, t) == e.guard->second;
  };
  auto clipped = [&](const Term& f, std::int64_t t1, std::int64_t t2) {
    for (std::int64_t t = t1; t < t2; ++t)
      for (const auto& e : d.effects)
        if (!e.initiates && e.fluent == f && fires(e, t)) return true;
    return false;
  };
  holds = [&](const Term& f, std::int64_t t) {
    auto key = std::make_pair(f, t);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool v = d.initially.count(f) && !clipped(f, 0, t);
    for (std::int64_t t1 = 0; !v && t1 < t; ++t1)
      for (const auto& e : d.effects)
        if (e.initiates && e.fluent == f && fires(e, t1) && !clipped(f, t1, t)) {
          v = true;
          break;
        }
    memo[key] = v;
    return v;
  };

  for (std::int64_t t = 0; t <= d.horizon; ++t)
    for (const auto& f : d.fluents) {
      bool init = false, term = false;
      for (const auto& e : d.effects) {
        if (e.fluent != f || !fires(e, t)) continue;
        (e.initiates ? init : term) = true;
      }
      if (init && term) return std::nullopt;
    }

  std::vector<std::set<Term>> states(static_cast<std::size_t>(d.horizon + 1));
  for (std::int64_t t = 0; t <= d.horizon; ++t)
    for (const auto& f : d.fluents)
      if (holds(f, t)) states[static_cast<std::size_t>(t)].insert(f);
  return states;
}

MicroDomain prune_domain(const MicroDomain& d, const std::set<Term>& entities, bool keep_mentioning) {
  auto mentions = [&](std::initializer_list<const Term*> terms) {
    for (const Term* t : terms) {
      if (!t) continue;
      for (const auto& a : t->args())
        if (entities.count(a)) return true;
      if (t->name() == "action")
        for (const auto& a : t->arg(1).args())
          if (entities.count(a)) return true;
    }
    return false;
  };
  auto keep = [&](bool m) { return m == keep_mentioning; };
  MicroDomain out;
  out.horizon = d.horizon;
  out.fluents = d.fluents;
  out.events = d.events;
  for (const auto& f : d.initially)
    if (keep(mentions({&f}))) out.initially.insert(f);
  for (const auto& s : d.schedule)
    if (keep(mentions({&s.first}))) out.schedule.push_back(s);
  for (const auto& e : d.effects)
    if (keep(mentions({&e.event, &e.fluent, e.guard ? &e.guard->first : nullptr}))) out.effects.push_back(e);
  return out;
}

OracleMeans oracle_means(const MicroDomain& d, const FluentLiteral& f, const FluentLiteral& g, MeansMode mode) {
  if (g.time <= f.time) return OracleMeans::False;
  auto states = brute_force_states(d);
  if (!states) return OracleMeans::Conflict;
  auto entailed = [&](const std::vector<std::set<Term>>& s, const FluentLiteral& l) {
    if (l.time < 0 || l.time > d.horizon) return false;
    return s[static_cast<std::size_t>(l.time)].count(l.fluent) > 0 == l.positive;
  };
  if (!entailed(*states, f) || !entailed(*states, g)) return OracleMeans::True;
  std::set<Term> entities(f.fluent.args().begin(), f.fluent.args().end());
  auto pruned = brute_force_states(prune_domain(d, entities, mode == MeansMode::Literal));
  if (!pruned) return OracleMeans::Conflict;
  return entailed(*pruned, g) ? OracleMeans::False : OracleMeans::True;
}

// ---------------------------------------------------------------------------

std::string random_micro_scenario(Rng& rng, int index) {
  static const std::vector<std::string> objs{"a", "b", "c"};
  const std::string target = pick(rng, objs);
  const Term act = micro_action(target);
  const std::int64_t horizon = 5;
  MicroDomain d;
  for (int attempt = 0; attempt < 100; ++attempt) {
    d = random_micro_domain(rng, 3, 2, horizon, act);
    d.effects.front().initiates = true;
    d.effects.front().guard.reset();
    MicroDomain acted = d;
    acted.schedule.emplace_back(act, 1);
    if (brute_force_states(acted)) break;
  }
  const Term good = d.effects.front().fluent;
  std::optional<Term> harm;
  if (coin(rng, 0.3)) {
    harm = micro_fluent(good.name() == "p" ? "q" : "p", good.arg(0).name());
    d.effects.push_back({true, act, *harm, std::nullopt});
    MicroDomain acted = d;
    acted.schedule.emplace_back(act, 1);
    if (!brute_force_states(acted)) {
      d.effects.pop_back();
      harm.reset();
    }
  }

  auto literal = [&] {
    std::string h = "(holds " + dde::to_string(pick(rng, d.fluents)) + " " + std::to_string(uniform(rng, 2, 5)) + ")";
    return coin(rng) ? h : "(not " + h + ")";
  };
  auto good_literal = [&] { return "(holds " + dde::to_string(good) + " " + std::to_string(uniform(rng, 2, 5)) + ")"; };

  std::ostringstream os;
  os << "(SCENARIO micro-" << index << ")\n"
     << "(SIGNATURE (fn p (Object) Fluent) (fn q (Object) Fluent) (fn go (Object) Event)\n"
     << "  (fn flip (Object) ActionType) (const a b c Object) (const I Agent) (const now Moment)\n"
     << "  (const sigma Boolean))\n(AXIOMS\n";
  for (const auto& a : micro_axiom_texts(d)) os << "  " << a << '\n';
  if (coin(rng, 0.6)) os << "  (knows (K I now sigma))\n";
  if (coin(rng, 0.4)) {
    std::string chi = "(and " + (coin(rng, 0.7) ? good_literal() : literal()) + " " + literal() + ")";
    os << "  (believes-ought (B I now (O I now sigma " << chi << ")))\n"
       << "  (ought (O I now sigma " << chi << "))\n";
  }
  if (coin(rng, 0.1))
    os << "  (forbidden (O I now sigma (not (happens (action I (flip " << target << ")) 1))))\n";
  if (coin(rng, 0.6)) os << "  (intends (I I now " << good_literal() << "))\n";
  if (coin(rng, 0.15)) os << "  (intends-more (I I now " << literal() << "))\n";
  os << ")\n(SITUATION sigma)\n"
     << "(ACTION (agent I) (type (flip " << target << ")) (time 1) (moment now))\n"
     << "(UTILITY";
  if (harm) os << " (" << dde::to_string(*harm) << " -1) (" << dde::to_string(good) << " 3)";
  else if (coin(rng, 0.8)) os << " (" << dde::to_string(good) << ' ' << uniform(rng, 1, 3) << ")";
  for (const char* p : {"p", "q"})
    for (const auto& o : objs)
      if (coin(rng, 0.5)) os << " ((" << p << ' ' << o << ") " << uniform(rng, -2, 2) << ")";
  os << " (default 0))\n"
     << "(PARAMS (horizon " << horizon << ") (gamma " << (coin(rng) ? "0.5" : "1.5") << "))\n";
  return os.str();
}

// ---------------------------------------------------------------------------

Term strips_atom(int i) { return Term::constant("s" + std::to_string(i), dde::sort::kAny); }

StripsCase random_strips_case(Rng& rng, int max_actions, int atoms) {
  StripsCase c;
  for (int i = 0; i < atoms; ++i)
    if (coin(rng, 0.4)) c.initial.insert(strips_atom(i));
  std::set<Term> state = c.initial;
  for (int k = uniform(rng, 1, max_actions); k > 0; --k) {
    dde::StripsAction a;
    a.name = "act" + std::to_string(c.plan.size());
    for (const auto& s : state)
      if (coin(rng, 0.4)) a.pre.insert(s);
    if (coin(rng, 0.1)) a.pre.insert(strips_atom(uniform(rng, 0, atoms - 1)));
    for (int i = 0; i < atoms; ++i) {
      if (coin(rng, 0.25)) a.add.insert(strips_atom(i));
      else if (coin(rng, 0.2)) a.del.insert(strips_atom(i));
    }
    for (const auto& d : a.del) state.erase(d);
    state.insert(a.add.begin(), a.add.end());
    c.plan.push_back(std::move(a));
  }
  return c;
}

std::optional<std::vector<std::set<Term>>> brute_force_plan(const StripsCase& c) {
  std::vector<std::set<Term>> states{c.initial};
  for (const auto& a : c.plan) {
    const auto& s = states.back();
    if (!std::includes(s.begin(), s.end(), a.pre.begin(), a.pre.end())) return std::nullopt;
    std::set<Term> next;
    for (const auto& x : s)
      if (!a.del.count(x) || a.add.count(x)) next.insert(x);
    next.insert(a.add.begin(), a.add.end());
    states.push_back(std::move(next));
  }
  return states;
}

std::vector<std::pair<std::int64_t, std::string>> parse_dump(const std::string& dump) {
  std::vector<std::pair<std::int64_t, std::string>> out;
  std::istringstream in(dump);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto sp = line.find(' ');
    out.emplace_back(std::stoll(line.substr(0, sp)), line.substr(sp + 1));
  }
  return out;
}

}  // namespace ddetest
