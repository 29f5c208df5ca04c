#include "dde/modal.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

#include "dde/dsl.hpp"
#include "dde/printer.hpp"

namespace dde {

namespace {

const std::string kShadowPrefix = "$sh";

Formula rebuild_with(const Formula& f, const std::function<Formula(const Formula&)>& fn) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Not: return Formula::negation(fn(f.child(0)));
    case K::And:
    case K::Or: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(fn(c));
      return f.is(K::And) ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    case K::Implies: return Formula::implication(fn(f.child(0)), fn(f.child(1)));
    case K::Iff: return Formula::biconditional(fn(f.child(0)), fn(f.child(1)));
    case K::Forall: return Formula::forall(f.bound(), fn(f.child(0)));
    case K::Exists: return Formula::exists(f.bound(), fn(f.child(0)));
    case K::Modal: {
      std::vector<Formula> cs;
      for (const auto& c : f.children()) cs.push_back(fn(c));
      return Formula::modal(f.op(), {f.modal_terms().begin(), f.modal_terms().end()}, std::move(cs));
    }
    default: return f;
  }
}

bool is_modal(const Formula& f, ModalOp op) { return f.is(Formula::Kind::Modal) && f.op() == op; }

bool time_leq(const Term& a, const Term& b) {
  if (a == b) return true;
  return a.is_number() && b.is_number() && a.value() <= b.value();
}

bool time_less(const Term& a, const Term& b) { return a.is_number() && b.is_number() && a.value() < b.value(); }

std::optional<Term> time_max(const Term& a, const Term& b) {
  if (a == b) return a;
  if (a.is_number() && b.is_number()) return a.value() >= b.value() ? a : b;
  return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------
// Shadowing

Term ShadowTable::atom(std::size_t i) const {
  return Term::apply(kShadowPrefix + std::to_string(i), params_.at(i), sort::kBoolean);
}

Formula ShadowTable::shadow(const Formula& f) {
  if (!f.is(Formula::Kind::Modal)) return rebuild_with(f, [this](const Formula& c) { return shadow(c); });
  Formula key = alpha_normalize(f);
  auto it = index_.find(key);
  std::size_t i;
  if (it != index_.end()) {
    i = it->second;
  } else {
    i = formulas_.size();
    index_.emplace(key, i);
    formulas_.push_back(f);
    auto free = free_variables(f);
    params_.emplace_back(free.begin(), free.end());
  }
  return Formula::atom(atom(i));
}

std::optional<Formula> ShadowTable::lookup(const Term& a) const {
  if (!is_shadow_atom(a)) return std::nullopt;
  std::size_t i = std::stoul(a.name().substr(kShadowPrefix.size()));
  if (i >= formulas_.size() || params_[i].size() != a.arity()) return std::nullopt;
  Substitution s;
  for (std::size_t k = 0; k < a.arity(); ++k) s.bind(params_[i][k], a.arg(k));
  return apply(formulas_[i], s);
}

Formula ShadowTable::unshadow(const Formula& f) const {
  if (f.is(Formula::Kind::Atom)) {
    if (auto m = lookup(f.term())) return *m;
    return f;
  }
  return rebuild_with(f, [this](const Formula& c) { return unshadow(c); });
}

std::pair<std::vector<Formula>, ShadowTable> shadow(const std::vector<Formula>& fs) {
  ShadowTable t;
  std::vector<Formula> out;
  out.reserve(fs.size());
  for (const auto& f : fs) out.push_back(t.shadow(f));
  return {std::move(out), std::move(t)};
}

// ---------------------------------------------------------------------------
// Schema patterns

bool match_formula(const Formula& pattern, const Formula& f, Match& m) {
  using K = Formula::Kind;
  if (pattern.is(K::Meta)) {
    auto it = m.formulas.find(pattern.meta_name());
    if (it != m.formulas.end()) return alpha_equivalent(it->second, f);
    m.formulas.emplace(pattern.meta_name(), f);
    return true;
  }
  if (pattern.kind() != f.kind()) return false;
  switch (pattern.kind()) {
    case K::True:
    case K::False: return true;
    case K::Atom: return match(pattern.term(), f.term(), m.terms);
    case K::Forall:
    case K::Exists:
      if (!(pattern.bound() == f.bound())) return false;
      return match_formula(pattern.child(0), f.child(0), m);
    case K::Modal:
      if (pattern.op() != f.op() || pattern.modal_terms().size() != f.modal_terms().size()) return false;
      for (std::size_t i = 0; i < pattern.modal_terms().size(); ++i) {
        if (!match(pattern.modal_terms()[i], f.modal_terms()[i], m.terms)) return false;
      }
      [[fallthrough]];
    default:
      if (pattern.children().size() != f.children().size()) return false;
      for (std::size_t i = 0; i < pattern.children().size(); ++i) {
        if (!match_formula(pattern.child(i), f.child(i), m)) return false;
      }
      return true;
  }
}

Formula instantiate(const Formula& pattern, const Match& m) {
  using K = Formula::Kind;
  switch (pattern.kind()) {
    case K::Meta: {
      auto it = m.formulas.find(pattern.meta_name());
      if (it == m.formulas.end()) throw ConfigError("unbound formula metavariable " + pattern.meta_name());
      return it->second;
    }
    case K::Atom: return Formula::atom(m.terms.apply(pattern.term()));
    case K::Modal: {
      std::vector<Term> terms;
      for (const auto& t : pattern.modal_terms()) terms.push_back(m.terms.apply(t));
      std::vector<Formula> cs;
      for (const auto& c : pattern.children()) cs.push_back(instantiate(c, m));
      return Formula::modal(pattern.op(), std::move(terms), std::move(cs));
    }
    default: return rebuild_with(pattern, [&m](const Formula& c) { return instantiate(c, m); });
  }
}

namespace {

void pattern_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const auto& a : t.args()) pattern_variables(a, out);
}

void pattern_variables(const Formula& f, std::set<std::string>& out) {
  for_each_subformula(f, [&](const Formula& g) {
    if (g.is(Formula::Kind::Meta)) out.insert(g.meta_name());
    if (g.is(Formula::Kind::Atom)) pattern_variables(g.term(), out);
    if (g.is(Formula::Kind::Modal)) {
      for (const auto& t : g.modal_terms()) pattern_variables(t, out);
    }
  });
}

const std::set<std::string> kConditionKinds = {"<=", "<", "=", "moment", "agent", "max"};

}  // namespace

std::vector<InferenceSchema> parse_schemata(std::string_view text, const Signature& sig) {
  ParseOptions opts;
  opts.check_sorts = false;
  opts.patterns = true;
  std::vector<InferenceSchema> out;
  for (const auto& form : read_sexprs(text)) {
    if (!form.is_list() || form.items.size() < 3 || !form.items[0].is_symbol("rule") || !form.items[1].is_symbol()) {
      form.fail("expected (rule NAME (premises ...) [(where ...)] (conclusion ...))");
    }
    InferenceSchema s;
    s.name = form.items[1].text;
    bool have_conclusion = false;
    for (std::size_t i = 2; i < form.items.size(); ++i) {
      const Sexpr& part = form.items[i];
      if (!part.is_list() || part.items.empty() || !part.items[0].is_symbol()) part.fail("malformed rule section");
      const std::string& head = part.items[0].text;
      if (head == "premises") {
        for (std::size_t k = 1; k < part.items.size(); ++k) {
          VariableScope scope;
          s.premises.push_back(formula_from_sexpr(part.items[k], sig, scope, opts));
        }
      } else if (head == "where") {
        for (std::size_t k = 1; k < part.items.size(); ++k) {
          const Sexpr& c = part.items[k];
          if (!c.is_list() || c.items.empty() || !c.items[0].is_symbol() || !kConditionKinds.count(c.items[0].text)) {
            c.fail("unknown side condition");
          }
          SideCondition cond{c.items[0].text, {}};
          for (std::size_t j = 1; j < c.items.size(); ++j) cond.args.push_back(term_from_sexpr(c.items[j], sig, {}, opts));
          std::size_t want = cond.kind == "max" ? 3 : (cond.kind == "moment" || cond.kind == "agent") ? 1 : 2;
          if (cond.args.size() != want) c.fail("side condition '" + cond.kind + "' takes " + std::to_string(want) + " arguments");
          s.conditions.push_back(std::move(cond));
        }
      } else if (head == "conclusion") {
        if (part.items.size() != 2) part.fail("conclusion takes one formula");
        VariableScope scope;
        s.conclusion = formula_from_sexpr(part.items[1], sig, scope, opts);
        have_conclusion = true;
      } else {
        part.items[0].fail("unknown rule section '" + head + "'");
      }
    }
    if (!have_conclusion) form.fail("rule " + s.name + " has no conclusion");

    std::set<std::string> bound;
    for (const auto& p : s.premises) pattern_variables(p, bound);
    for (const auto& c : s.conditions) {
      bool binder = c.kind == "moment" || c.kind == "agent" || c.kind == "max";
      for (std::size_t j = binder ? 1 : 0; j < c.args.size(); ++j) {
        std::set<std::string> used;
        pattern_variables(c.args[j], used);
        for (const auto& v : used) {
          if (!bound.count(v)) throw ConfigError("schema " + s.name + ": side condition uses unbound metavariable " + v);
        }
      }
      if (binder) pattern_variables(c.args[0], bound);
    }
    std::set<std::string> needed;
    pattern_variables(s.conclusion, needed);
    for (const auto& v : needed) {
      if (!bound.count(v)) throw ConfigError("schema " + s.name + ": conclusion metavariable " + v + " is unbound");
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::string_view builtin_schema_text() {
  return R"((rule R1 (premises (P ?a ?t ?p))
  (conclusion (C ?t (implies (P ?a ?t ?p) (K ?a ?t ?p)))))
(rule R2 (premises (K ?a ?t ?p))
  (conclusion (C ?t (implies (K ?a ?t ?p) (B ?a ?t ?p)))))
(rule R4 (premises (K ?a ?t ?p))
  (conclusion ?p))
(rule R5 (premises (K ?a ?t1 (implies ?p ?q)) (K ?a ?t2 ?p))
  (where (max ?t3 ?t1 ?t2))
  (conclusion (K ?a ?t3 ?q)))
(rule R6 (premises (B ?a ?t1 (implies ?p ?q)) (B ?a ?t2 ?p))
  (where (max ?t3 ?t1 ?t2))
  (conclusion (B ?a ?t3 ?q)))
(rule R7 (premises (C ?t1 (implies ?p ?q)) (C ?t2 ?p))
  (where (max ?t3 ?t1 ?t2))
  (conclusion (C ?t3 ?q)))
(rule R9 (premises (C ?t (iff ?p ?q)) (C ?t (not ?q)))
  (conclusion (C ?t (not ?p))))
(rule R12 (premises (S ?s ?h ?t ?p))
  (conclusion (B ?h ?t (B ?s ?t ?p))))
(rule R13 (premises (I ?a ?t (happens (action ?a ?alpha) ?t2)))
  (conclusion (P ?a ?t (happens (action ?a ?alpha) ?t))))
(rule R14 (premises (B ?a ?t ?p) (B ?a ?t (O ?a ?t ?p ?q)) (O ?a ?t ?p ?q))
  (conclusion (K ?a ?t (I ?a ?t ?q))))
)";
}

const std::vector<InferenceSchema>& builtin_schemata() {
  static const std::vector<InferenceSchema> schemata = parse_schemata(builtin_schema_text());
  return schemata;
}

// ---------------------------------------------------------------------------
// The proving loop

namespace {

class Engine {
 public:
  Engine(const ModalOptions& opts, int recursion) : opts_(opts), recursion_(recursion) {}

  void load(const std::vector<Formula>& kb, const Formula& goal) {
    for (const auto& f : kb) add_known(f, -1);
    auto scan = [&](const Formula& root) {
      for_each_subformula(root, [&](const Formula& g) {
        if (!g.is(Formula::Kind::Modal)) return;
        max_depth_ = std::max(max_depth_, modal_depth(g));
        auto ts = g.modal_terms();
        if (!ts.empty() && ts.back().is_ground()) insert_unique(moments_, ts.back());
        if (g.op() != ModalOp::Common && !ts.empty() && ts.front().is_ground()) insert_unique(agents_, ts.front());
        if (g.op() == ModalOp::Says && ts.size() == 3 && ts[1].is_ground()) insert_unique(agents_, ts[1]);
        if ((g.op() == ModalOp::Knows || g.op() == ModalOp::Believes) && free_variables(g).empty()) {
          insert_unique(closure_candidates_, g);
        }
      });
    };
    for (const auto& f : kb) scan(f);
    if (goal.valid()) scan(goal);
    max_depth_ += opts_.r3_depth;
  }

  ModalResult prove(const Formula& goal) {
    ModalResult r;
    ProofStatus last = ProofStatus::NotProved;
    for (int round = 1; round <= opts_.max_rounds; ++round) {
      r.rounds = round;
      auto [shadowed, table] = shadow(known_);
      Formula sgoal = table.shadow(goal);
      FoOptions fo{opts_.fo_budget, opts_.signature, true};
      FoResult res = fo_prove(shadowed, sgoal, fo);
      fo_steps_ += res.steps_used;
      last = res.status;
      if (res.status == ProofStatus::Proved) {
        r.status = ProofStatus::Proved;
        r.trace = extract_trace(used_axioms(res.proof));
        r.proof = std::move(res.proof);
        return finish(std::move(r));
      }

      std::size_t before = known_.size();
      derive_first_order(shadowed, table, round);
      for (auto& d : one_round(round)) add_derivation(std::move(d));
      if (known_.size() > opts_.max_formulas) {
        r.status = ProofStatus::ResourceOut;
        return finish(std::move(r));
      }
      if (known_.size() == before) {
        r.status = last == ProofStatus::ResourceOut ? ProofStatus::ResourceOut : ProofStatus::NotProved;
        return finish(std::move(r));
      }
    }
    r.status = ProofStatus::ResourceOut;
    return finish(std::move(r));
  }

  /// One application of every schema and native rule to the current kb.
  std::vector<Derivation> one_round(int round) {
    std::vector<Derivation> out;
    const std::size_t n = known_.size();
    for (const auto& s : opts_.schemata) apply_schema(s, n, round, out);
    native_r3(n, round, out);
    native_r8(n, round, out);
    native_r10(n, round, out);
    if (opts_.closure && recursion_ == 0) native_closure(round, out);
    std::vector<Derivation> fresh;
    std::set<Formula> seen;
    for (auto& d : out) {
      Formula key = alpha_normalize(d.conclusion);
      if (index_.count(key) || !seen.insert(key).second) continue;
      if (modal_depth(d.conclusion) > max_depth_) continue;
      fresh.push_back(std::move(d));
    }
    return fresh;
  }

  std::int64_t fo_steps() const { return fo_steps_; }

 private:
  static void insert_unique(std::vector<Term>& v, const Term& t) {
    if (std::find(v.begin(), v.end(), t) == v.end()) v.push_back(t);
  }
  static void insert_unique(std::vector<Formula>& v, const Formula& f) {
    if (std::find(v.begin(), v.end(), f) == v.end()) v.push_back(f);
  }

  bool add_known(const Formula& f, int derivation) {
    Formula key = alpha_normalize(f);
    if (index_.count(key)) return false;
    index_.emplace(key, known_.size());
    known_.push_back(f);
    origin_.push_back(derivation);
    return true;
  }

  void add_derivation(Derivation d) {
    Formula c = d.conclusion;
    int id = static_cast<int>(derivations_.size());
    derivations_.push_back(std::move(d));
    if (!add_known(c, id)) derivations_.pop_back();
  }

  ModalResult finish(ModalResult r) {
    r.fo_steps = fo_steps_;
    if (r.status != ProofStatus::Proved) r.trace = derivations_;
    r.knowledge = known_;
    return r;
  }

  std::vector<Derivation> extract_trace(const std::set<int>& used) {
    std::set<int> needed;
    std::vector<std::size_t> stack(used.begin(), used.end());
    std::set<std::size_t> visited;
    while (!stack.empty()) {
      std::size_t k = stack.back();
      stack.pop_back();
      if (!visited.insert(k).second || k >= known_.size()) continue;
      int d = origin_[k];
      if (d < 0) continue;
      needed.insert(d);
      for (const auto& p : derivations_[static_cast<std::size_t>(d)].premises) {
        auto it = index_.find(alpha_normalize(p));
        if (it != index_.end()) stack.push_back(it->second);
      }
    }
    std::vector<Derivation> out;
    for (int d : needed) out.push_back(derivations_[static_cast<std::size_t>(d)]);
    return out;
  }

  // Modal atoms that follow first-order from the shadowed kb become facts.
  void derive_first_order(const std::vector<Formula>& shadowed, const ShadowTable& table, int round) {
    std::set<Term> candidates;
    for (const auto& f : shadowed) {
      const Formula* g = &f;
      if (g->is(Formula::Kind::Not)) g = &g->child(0);
      if (g->is(Formula::Kind::Atom)) continue;
      for_each_subformula(f, [&](const Formula& s) {
        if (s.is(Formula::Kind::Atom) && is_shadow_atom(s.term()) && s.term().is_ground()) candidates.insert(s.term());
      });
    }
    for (const auto& atom : candidates) {
      auto modal = table.lookup(atom);
      if (!modal || index_.count(alpha_normalize(*modal))) continue;
      FoOptions fo{opts_.fo_budget, opts_.signature, true};
      FoResult res = fo_prove(shadowed, Formula::atom(atom), fo);
      fo_steps_ += res.steps_used;
      if (res.status != ProofStatus::Proved) continue;
      Derivation d{round, "FO", {}, *modal};
      for (int i : used_axioms(res.proof)) d.premises.push_back(known_[static_cast<std::size_t>(i)]);
      add_derivation(std::move(d));
    }
  }

  void apply_schema(const InferenceSchema& s, std::size_t n, int round, std::vector<Derivation>& out) {
    std::vector<Formula> premises;
    std::function<void(std::size_t, const Match&)> join = [&](std::size_t i, const Match& m) {
      if (i == s.premises.size()) {
        conditions(s, 0, m, premises, round, out);
        return;
      }
      const Formula& p = s.premises[i];
      for (std::size_t k = 0; k < n; ++k) {
        const Formula& f = known_[k];
        if (f.kind() != p.kind() && !p.is(Formula::Kind::Meta)) continue;
        if (p.is(Formula::Kind::Modal) && p.op() != f.op()) continue;
        Match ext = m;
        if (!match_formula(p, f, ext)) continue;
        premises.push_back(f);
        join(i + 1, ext);
        premises.pop_back();
      }
    };
    join(0, Match{});
  }

  void conditions(const InferenceSchema& s, std::size_t i, const Match& m, const std::vector<Formula>& premises,
                  int round, std::vector<Derivation>& out) {
    if (i == s.conditions.size()) {
      out.push_back({round, s.name, premises, instantiate(s.conclusion, m)});
      return;
    }
    const SideCondition& c = s.conditions[i];
    auto arg = [&](std::size_t k) { return m.terms.apply(c.args[k]); };
    auto bind_and_continue = [&](const Term& var, const Term& value) {
      Match ext = m;
      if (!match(var, value, ext.terms)) return;
      conditions(s, i + 1, ext, premises, round, out);
    };
    if (c.kind == "<=") {
      if (time_leq(arg(0), arg(1))) conditions(s, i + 1, m, premises, round, out);
    } else if (c.kind == "<") {
      if (time_less(arg(0), arg(1))) conditions(s, i + 1, m, premises, round, out);
    } else if (c.kind == "=") {
      if (arg(0) == arg(1)) conditions(s, i + 1, m, premises, round, out);
    } else if (c.kind == "moment") {
      for (const auto& t : moments_) bind_and_continue(c.args[0], t);
    } else if (c.kind == "agent") {
      for (const auto& a : agents_) bind_and_continue(c.args[0], a);
    } else if (c.kind == "max") {
      if (auto t = time_max(arg(1), arg(2))) bind_and_continue(c.args[0], *t);
    }
  }

  // R3: common knowledge unfolds into iterated knowledge.
  void native_r3(std::size_t n, int round, std::vector<Derivation>& out) {
    for (std::size_t k = 0; k < n; ++k) {
      const Formula& f = known_[k];
      if (!is_modal(f, ModalOp::Common)) continue;
      const Term& t = f.time();
      std::vector<Term> later;
      for (const auto& m : moments_) {
        if (time_leq(t, m)) later.push_back(m);
      }
      std::function<void(int, const Formula&)> nest = [&](int depth, const Formula& inner) {
        if (depth == 0) return;
        for (const auto& a : agents_) {
          for (const auto& m : later) {
            Formula g = Formula::modal(ModalOp::Knows, {a, m}, {inner});
            out.push_back({round, "R3", {f}, g});
            nest(depth - 1, g);
          }
        }
      };
      // Inner-most knowledge is built first; each level wraps one more K.
      nest(opts_.r3_depth, f.body());
    }
  }

  // R8: universal instantiation under common knowledge.
  void native_r8(std::size_t n, int round, std::vector<Derivation>& out) {
    std::vector<Term> ground;
    for (std::size_t k = 0; k < n; ++k) {
      std::vector<Term> ts;
      collect_terms(known_[k], ts);
      for (const auto& t : ts) {
        if (t.is_ground() && !(t.sort() == sort::kBoolean)) insert_unique(ground, t);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Formula& f = known_[k];
      if (!is_modal(f, ModalOp::Common) || !f.body().is(Formula::Kind::Forall)) continue;
      const Formula& q = f.body();
      for (const auto& c : ground) {
        bool fits = opts_.signature ? opts_.signature->is_subsort(c.sort(), q.bound().sort())
                                    : c.sort() == q.bound().sort();
        if (!fits) continue;
        Substitution s;
        s.bind(q.bound(), c);
        out.push_back({round, "R8", {f}, Formula::modal(ModalOp::Common, {f.time()}, {apply(q.child(0), s)})});
      }
    }
  }

  // R10: a conjunctive antecedent under common knowledge is curried.
  void native_r10(std::size_t n, int round, std::vector<Derivation>& out) {
    for (std::size_t k = 0; k < n; ++k) {
      const Formula& f = known_[k];
      if (!is_modal(f, ModalOp::Common)) continue;
      const Formula& b = f.body();
      if (!b.is(Formula::Kind::Implies) || !b.child(0).is(Formula::Kind::And)) continue;
      Formula curried = b.child(1);
      auto parts = b.child(0).children();
      for (auto it = parts.rbegin(); it != parts.rend(); ++it) curried = Formula::implication(*it, curried);
      out.push_back({round, "R10", {f}, Formula::modal(ModalOp::Common, {f.time()}, {curried})});
    }
  }

  // R_K and R_B: knowledge and belief closed under consequence of what the
  // agent knew (believed) earlier.
  void native_closure(int round, std::vector<Derivation>& out) {
    for (const auto& cand : closure_candidates_) {
      if (index_.count(alpha_normalize(cand))) continue;
      const ModalOp op = cand.op();
      std::vector<Formula> gamma;
      for (const auto& f : known_) {
        if (is_modal(f, op) && f.agent() == cand.agent() && time_leq(f.time(), cand.time())) gamma.push_back(f);
      }
      if (gamma.empty()) continue;
      auto key = std::make_pair(alpha_normalize(cand), gamma.size());
      if (closure_cache_.count(key)) continue;
      closure_cache_.insert(key);
      std::vector<Formula> contents;
      for (const auto& g : gamma) contents.push_back(g.body());
      ModalOptions inner = opts_;
      inner.max_rounds = std::min(opts_.max_rounds, 6);
      inner.fo_budget = std::max<std::int64_t>(opts_.fo_budget / 10, 1000);
      Engine sub(inner, recursion_ + 1);
      sub.load(contents, cand.body());
      ModalResult r = sub.prove(cand.body());
      fo_steps_ += r.fo_steps;
      if (r.status != ProofStatus::Proved) continue;
      out.push_back({round, op == ModalOp::Knows ? "RK" : "RB", gamma, cand});
    }
  }

  ModalOptions opts_;
  int recursion_;
  std::vector<Formula> known_;
  std::vector<int> origin_;
  std::map<Formula, std::size_t> index_;
  std::vector<Derivation> derivations_;
  std::vector<Term> moments_;
  std::vector<Term> agents_;
  std::vector<Formula> closure_candidates_;
  std::set<std::pair<Formula, std::size_t>> closure_cache_;
  int max_depth_ = 0;
  std::int64_t fo_steps_ = 0;
};

}  // namespace

ModalResult modal_prove(const std::vector<Formula>& kb, const Formula& goal, const ModalOptions& opts) {
  Engine e(opts, 0);
  e.load(kb, goal);
  return e.prove(goal);
}

std::vector<Derivation> apply_schemata(const std::vector<Formula>& kb, const std::vector<InferenceSchema>& schemata,
                                       const ModalOptions& opts) {
  ModalOptions o = opts;
  o.schemata = schemata;
  Engine e(o, 0);
  e.load(kb, Formula());
  return e.one_round(1);
}

std::string ModalResult::trace_text() const {
  std::ostringstream out;
  for (const auto& d : trace) {
    out << "[" << d.round << "] " << d.rule << ": " << print_formula(d.conclusion) << "\n";
    for (const auto& p : d.premises) out << "      from " << print_formula(p) << "\n";
  }
  if (status == ProofStatus::Proved) out << "[" << rounds << "] FO: goal\n";
  return out.str();
}

bool ModalResult::uses_rule(std::string_view rule) const {
  return std::any_of(trace.begin(), trace.end(), [&](const Derivation& d) { return d.rule == rule; });
}

}  // namespace dde
