#include "dde/fo_prover.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace dde {

std::string_view to_string(ProofStatus s) {
  switch (s) {
    case ProofStatus::Proved: return "proved";
    case ProofStatus::NotProved: return "not-proved";
    case ProofStatus::ResourceOut: return "resource-out";
  }
  return "?";
}

std::string_view to_string(InferenceRule r) {
  switch (r) {
    case InferenceRule::Input: return "input";
    case InferenceRule::Resolution: return "resolution";
    case InferenceRule::Factoring: return "factoring";
    case InferenceRule::Paramodulation: return "paramodulation";
    case InferenceRule::EqualityResolution: return "equality-resolution";
  }
  return "?";
}

std::string Proof::to_string() const {
  std::ostringstream out;
  for (const auto& s : steps) {
    out << s.id << ". " << dde::to_string(s.clause) << "  [" << dde::to_string(s.rule);
    for (std::size_t i = 0; i < s.parents.size(); ++i) out << (i ? "," : " ") << s.parents[i];
    out << "]\n";
  }
  return out.str();
}

namespace {

const Term& subterm_at(const Term& t, std::span<const int> path) {
  const Term* cur = &t;
  for (int i : path) cur = &cur->arg(static_cast<std::size_t>(i));
  return *cur;
}

Term replace_at(const Term& t, std::span<const int> path, const Term& with) {
  if (path.empty()) return with;
  std::vector<Term> args(t.args().begin(), t.args().end());
  auto i = static_cast<std::size_t>(path.front());
  args[i] = replace_at(args[i], path.subspan(1), with);
  return Term::apply(t.name(), std::move(args), t.sort());
}

/// Non-variable argument positions of an atom (the atom itself excluded).
void positions(const Term& t, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  for (std::size_t i = 0; i < t.arity(); ++i) {
    const Term& a = t.arg(i);
    if (a.is_variable()) continue;
    prefix.push_back(static_cast<int>(i));
    out.push_back(prefix);
    positions(a, prefix, out);
    prefix.pop_back();
  }
}

bool term_greater(const Term& a, const Term& b) {
  if (b.is_variable()) return a != b && occurs_in(b, a);
  if (a.is_variable()) return false;
  std::set<Term> va, vb;
  collect_variables(a, va);
  collect_variables(b, vb);
  if (!std::includes(va.begin(), va.end(), vb.begin(), vb.end())) return false;
  if (a.size() != b.size()) return a.size() > b.size();
  if (!a.is_ground() || !b.is_ground()) return false;
  return b < a;
}

Clause without(const Clause& c, std::initializer_list<int> drop) {
  Clause out;
  for (std::size_t i = 0; i < c.literals.size(); ++i) {
    if (std::find(drop.begin(), drop.end(), static_cast<int>(i)) == drop.end()) out.literals.push_back(c.literals[i]);
  }
  return out;
}

Clause join(const Clause& a, const Clause& b) {
  Clause out = a;
  out.literals.insert(out.literals.end(), b.literals.begin(), b.literals.end());
  return out;
}

// Conclusion of a step computed from its parents, before normalization.
std::optional<Clause> conclude(const ProofStep& s, const std::vector<const Clause*>& parents, Substitution* mgu,
                               const Signature* sig) {
  auto lit = [&](const Clause& c, int i) -> const Literal* {
    if (i < 0 || static_cast<std::size_t>(i) >= c.literals.size()) return nullptr;
    return &c.literals[static_cast<std::size_t>(i)];
  };
  switch (s.rule) {
    case InferenceRule::Input: return std::nullopt;
    case InferenceRule::Resolution: {
      if (parents.size() != 2 || s.literals.size() != 2) return std::nullopt;
      const Clause& c1 = *parents[0];
      Clause c2 = rename_variables(*parents[1], "Y");
      const Literal* a = lit(c1, s.literals[0]);
      const Literal* b = lit(c2, s.literals[1]);
      if (!a || !b || a->positive == b->positive) return std::nullopt;
      auto u = unify(a->atom, b->atom, sig);
      if (!u) return std::nullopt;
      if (mgu) *mgu = *u;
      return apply(join(without(c1, {s.literals[0]}), without(c2, {s.literals[1]})), *u);
    }
    case InferenceRule::Factoring: {
      if (parents.size() != 1 || s.literals.size() != 2 || s.literals[0] == s.literals[1]) return std::nullopt;
      const Clause& c = *parents[0];
      const Literal* a = lit(c, s.literals[0]);
      const Literal* b = lit(c, s.literals[1]);
      if (!a || !b || a->positive != b->positive) return std::nullopt;
      auto u = unify(a->atom, b->atom, sig);
      if (!u) return std::nullopt;
      if (mgu) *mgu = *u;
      return apply(without(c, {s.literals[1]}), *u);
    }
    case InferenceRule::EqualityResolution: {
      if (parents.size() != 1 || s.literals.size() != 1) return std::nullopt;
      const Clause& c = *parents[0];
      const Literal* a = lit(c, s.literals[0]);
      if (!a || a->positive || !is_equality(a->atom)) return std::nullopt;
      auto u = unify(a->atom.arg(0), a->atom.arg(1), sig);
      if (!u) return std::nullopt;
      if (mgu) *mgu = *u;
      return apply(without(c, {s.literals[0]}), *u);
    }
    case InferenceRule::Paramodulation: {
      if (parents.size() != 2 || s.literals.size() != 2 || s.position.empty()) return std::nullopt;
      const Clause& from = *parents[0];
      Clause into = rename_variables(*parents[1], "Y");
      const Literal* eq = lit(from, s.literals[0]);
      const Literal* target = lit(into, s.literals[1]);
      if (!eq || !target || !eq->positive || !is_equality(eq->atom)) return std::nullopt;
      if (is_shadow_atom(target->atom)) return std::nullopt;
      const Term& l = eq->atom.arg(s.reversed ? 1 : 0);
      const Term& r = eq->atom.arg(s.reversed ? 0 : 1);
      const Term* sub = &target->atom;
      for (int i : s.position) {
        if (i < 0 || static_cast<std::size_t>(i) >= sub->arity()) return std::nullopt;
        sub = &sub->arg(static_cast<std::size_t>(i));
      }
      if (sub->is_variable()) return std::nullopt;
      auto u = unify(l, *sub, sig);
      if (!u) return std::nullopt;
      if (mgu) *mgu = *u;
      Clause rewritten = without(into, {s.literals[1]});
      rewritten.literals.push_back({target->positive, replace_at(target->atom, s.position, r)});
      return apply(join(without(from, {s.literals[0]}), rewritten), *u);
    }
  }
  return std::nullopt;
}

struct Entry {
  Clause clause;
  bool goal = false;
};

class Prover {
 public:
  Prover(const FoOptions& opts) : opts_(opts) {}

  FoResult run(const std::vector<Clause>& problem, const std::vector<bool>& goal_flags) {
    result_.proof.problem = problem;
    for (std::size_t i = 0; i < problem.size(); ++i) {
      ProofStep s;
      s.rule = InferenceRule::Input;
      if (add(std::move(s), problem[i], goal_flags[i])) return finish(ProofStatus::Proved);
    }
    std::size_t picks = 0;
    while (!passive_.empty()) {
      int given;
      if (++picks % 5 == 0) {
        given = *passive_age_.begin();
      } else {
        given = passive_.begin()->second;
      }
      passive_.erase({key(given), given});
      passive_age_.erase(given);
      const Clause& gc = entries_[given].clause;
      bool redundant = false;
      for (int a : active_) {
        if (subsumes(entries_[a].clause, gc, opts_.signature)) {
          redundant = true;
          break;
        }
      }
      if (redundant) continue;
      activate(given);
      if (generate(given)) return finish(ProofStatus::Proved);
      if (exhausted_) return finish(ProofStatus::ResourceOut);
    }
    return finish(ProofStatus::NotProved);
  }

 private:
  std::pair<std::size_t, int> key(int id) const {
    const Entry& e = entries_.at(id);
    std::size_t w = e.clause.weight() + e.clause.size();
    return {e.goal ? w : 2 * w, id};
  }

  FoResult finish(ProofStatus status) {
    result_.status = status;
    result_.steps_used = generated_;
    if (status == ProofStatus::Proved) {
      std::set<int> needed;
      std::vector<int> stack{empty_id_};
      while (!stack.empty()) {
        int id = stack.back();
        stack.pop_back();
        if (!needed.insert(id).second) continue;
        for (int p : steps_[static_cast<std::size_t>(id)].parents) stack.push_back(p);
      }
      for (int id : needed) result_.proof.steps.push_back(steps_[static_cast<std::size_t>(id)]);
    }
    return std::move(result_);
  }

  // Records a step; returns true when it derives the empty clause.
  bool add(ProofStep step, const Clause& raw, bool goal) {
    auto c = normalize(raw);
    if (!c || is_tautology(*c)) return false;
    std::string printed = to_string(*c);
    if (!seen_.insert(printed).second) return false;
    int id = static_cast<int>(steps_.size());
    step.id = id;
    step.clause = *c;
    steps_.push_back(std::move(step));
    entries_.emplace(id, Entry{*c, goal});
    if (c->empty()) {
      empty_id_ = id;
      return true;
    }
    passive_.insert({key(id), id});
    passive_age_.insert(id);
    return false;
  }

  void activate(int id) {
    active_.push_back(id);
    const Clause& c = entries_[id].clause;
    for (std::size_t i = 0; i < c.literals.size(); ++i) {
      const Literal& l = c.literals[i];
      index_[{l.atom.name(), l.positive}].push_back({id, static_cast<int>(i)});
      if (l.positive && is_equality(l.atom)) equations_.push_back({id, static_cast<int>(i)});
    }
  }

  // Derives and records one inference. Returns true on the empty clause.
  bool infer(ProofStep step, bool goal) {
    if (++generated_ > opts_.budget) {
      exhausted_ = true;
      return false;
    }
    std::vector<const Clause*> parents;
    for (int p : step.parents) parents.push_back(&entries_[p].clause);
    auto c = conclude(step, parents, &step.unifier, opts_.signature);
    if (!c) return false;
    return add(std::move(step), *c, goal);
  }

  bool generate(int g) {
    const Clause gc = entries_[g].clause;
    const bool ggoal = entries_[g].goal;
    const int n = static_cast<int>(gc.literals.size());

    for (int i = 0; i < n && !exhausted_; ++i) {
      const Literal& li = gc.literals[static_cast<std::size_t>(i)];
      for (int j = i + 1; j < n; ++j) {
        const Literal& lj = gc.literals[static_cast<std::size_t>(j)];
        if (li.positive != lj.positive || li.atom.name() != lj.atom.name()) continue;
        if (!unify(li.atom, lj.atom, opts_.signature)) continue;
        ProofStep s;
        s.rule = InferenceRule::Factoring;
        s.parents = {g};
        s.literals = {i, j};
        if (infer(std::move(s), ggoal)) return true;
      }
      if (!li.positive && is_equality(li.atom) && unify(li.atom.arg(0), li.atom.arg(1), opts_.signature)) {
        ProofStep s;
        s.rule = InferenceRule::EqualityResolution;
        s.parents = {g};
        s.literals = {i};
        if (infer(std::move(s), ggoal)) return true;
      }
    }

    for (int i = 0; i < n && !exhausted_; ++i) {
      const Literal& li = gc.literals[static_cast<std::size_t>(i)];
      auto it = index_.find({li.atom.name(), !li.positive});
      if (it == index_.end()) continue;
      auto partners = it->second;
      for (auto [p, j] : partners) {
        if (exhausted_) break;
        const Literal& lj = entries_[p].clause.literals[static_cast<std::size_t>(j)];
        if (lj.atom.arity() != li.atom.arity()) continue;
        ProofStep s;
        s.rule = InferenceRule::Resolution;
        s.parents = {g, p};
        s.literals = {i, j};
        if (infer(std::move(s), ggoal || entries_[p].goal)) return true;
      }
    }

    if (equations_.empty()) return false;
    // From the given clause's equations into every active clause.
    for (int i = 0; i < n && !exhausted_; ++i) {
      const Literal& li = gc.literals[static_cast<std::size_t>(i)];
      if (!li.positive || !is_equality(li.atom)) continue;
      for (int into : std::vector<int>(active_)) {
        if (paramodulate(g, i, into)) return true;
        if (exhausted_) return false;
      }
    }
    // From active equations into the given clause.
    for (auto [from, i] : std::vector<std::pair<int, int>>(equations_)) {
      if (from == g) continue;
      if (paramodulate(from, i, g)) return true;
      if (exhausted_) return false;
    }
    return false;
  }

  bool paramodulate(int from, int eq_index, int into) {
    const Clause fc = entries_[from].clause;
    const Literal& eq = fc.literals[static_cast<std::size_t>(eq_index)];
    const Clause ic = rename_variables(entries_[into].clause, "Y");
    bool goal = entries_[from].goal || entries_[into].goal;
    for (int dir = 0; dir < 2; ++dir) {
      const Term& l = eq.atom.arg(dir ? 1 : 0);
      const Term& r = eq.atom.arg(dir ? 0 : 1);
      if (l.is_variable() || term_greater(r, l)) continue;
      if (dir == 1 && eq.atom.arg(0) == eq.atom.arg(1)) continue;
      for (std::size_t j = 0; j < ic.literals.size(); ++j) {
        const Term& atom = ic.literals[j].atom;
        if (is_shadow_atom(atom)) continue;
        std::vector<int> prefix;
        std::vector<std::vector<int>> paths;
        positions(atom, prefix, paths);
        for (auto& path : paths) {
          const Term& sub = subterm_at(atom, path);
          if (!sub.is_application() && !sub.is_number()) continue;
          if (sub.name() != l.name() && !l.is_variable()) continue;
          if (!unify(l, sub, opts_.signature)) continue;
          ProofStep s;
          s.rule = InferenceRule::Paramodulation;
          s.parents = {from, into};
          s.literals = {eq_index, static_cast<int>(j)};
          s.position = path;
          s.reversed = dir == 1;
          if (infer(std::move(s), goal)) return true;
          if (exhausted_) return false;
        }
      }
    }
    return false;
  }

  FoOptions opts_;
  FoResult result_;
  std::vector<ProofStep> steps_;
  std::map<int, Entry> entries_;
  std::set<std::pair<std::pair<std::size_t, int>, int>> passive_;
  std::set<int> passive_age_;
  std::vector<int> active_;
  std::map<std::pair<std::string, bool>, std::vector<std::pair<int, int>>> index_;
  std::vector<std::pair<int, int>> equations_;
  std::unordered_set<std::string> seen_;
  std::int64_t generated_ = 0;
  bool exhausted_ = false;
  int empty_id_ = -1;
};

void collect_predicates(const Formula& f, std::set<std::string>& out) {
  for_each_subformula(f, [&](const Formula& g) {
    if (g.is(Formula::Kind::Atom) && g.term().is_application()) out.insert(g.term().name());
  });
}

}  // namespace

std::set<std::string> predicates_of(const Formula& f) {
  std::set<std::string> out;
  collect_predicates(f, out);
  return out;
}

std::vector<int> relevant_axiom_indices(const std::vector<Formula>& kb, const Formula& goal) {
  static const std::set<std::string> kWeak = {"=", ">", ">=", "<", "<="};
  auto strong = [&](const Formula& f) {
    std::set<std::string> p = predicates_of(f);
    for (const auto& w : kWeak) p.erase(w);
    return p;
  };
  std::set<std::string> reached = strong(goal);
  std::vector<std::set<std::string>> preds;
  for (const auto& f : kb) preds.push_back(strong(f));
  std::vector<bool> taken(kb.size(), false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t i = 0; i < kb.size(); ++i) {
      if (taken[i]) continue;
      bool touches = preds[i].empty();
      for (const auto& p : preds[i]) touches = touches || reached.count(p) > 0;
      if (!touches) continue;
      taken[i] = true;
      changed = true;
      reached.insert(preds[i].begin(), preds[i].end());
    }
  }
  std::vector<int> out;
  for (std::size_t i = 0; i < kb.size(); ++i) {
    if (taken[i]) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<Formula> relevant_axioms(const std::vector<Formula>& kb, const Formula& goal) {
  std::vector<Formula> out;
  for (int i : relevant_axiom_indices(kb, goal)) out.push_back(kb[static_cast<std::size_t>(i)]);
  return out;
}

FoResult refute(const std::vector<Clause>& clauses, const FoOptions& opts) {
  std::vector<Clause> problem;
  for (const auto& c : clauses) {
    if (auto n = normalize(c)) problem.push_back(*n);
  }
  FoResult r = Prover(opts).run(problem, std::vector<bool>(problem.size(), false));
  r.proof.origins.assign(r.proof.problem.size(), -1);
  return r;
}

FoResult fo_prove(const std::vector<Formula>& kb, const Formula& goal, const FoOptions& opts) {
  std::vector<int> kept;
  if (opts.relevance_filter) {
    kept = relevant_axiom_indices(kb, goal);
  } else {
    for (std::size_t i = 0; i < kb.size(); ++i) kept.push_back(static_cast<int>(i));
  }
  Clausifier c;
  std::vector<Clause> problem;
  std::vector<bool> goal_flags;
  std::vector<int> origins;
  for (int i : kept) {
    for (auto& cl : c.clausify(kb[static_cast<std::size_t>(i)])) {
      problem.push_back(std::move(cl));
      goal_flags.push_back(false);
      origins.push_back(i);
    }
  }
  for (auto& cl : c.clausify(Formula::negation(goal))) {
    problem.push_back(std::move(cl));
    goal_flags.push_back(true);
    origins.push_back(-1);
  }
  FoResult r = Prover(opts).run(problem, goal_flags);
  r.proof.origins = std::move(origins);
  return r;
}

std::optional<std::size_t> first_invalid_step(const Proof& proof, const Signature* sig) {
  std::map<int, const Clause*> derived;
  for (std::size_t k = 0; k < proof.steps.size(); ++k) {
    const auto& s = proof.steps[k];
    if (derived.count(s.id)) return k;
    if (s.rule == InferenceRule::Input) {
      if (!s.parents.empty()) return k;
      auto n = normalize(s.clause);
      if (!n || std::find(proof.problem.begin(), proof.problem.end(), *n) == proof.problem.end()) return k;
    } else {
      std::vector<const Clause*> parents;
      for (int p : s.parents) {
        auto it = derived.find(p);
        if (it == derived.end()) return k;
        parents.push_back(it->second);
      }
      auto c = conclude(s, parents, nullptr, sig);
      if (!c) return k;
      auto n = normalize(*c);
      if (!n || !(*n == s.clause)) return k;
    }
    derived[s.id] = &s.clause;
  }
  if (proof.steps.empty() || !proof.steps.back().clause.empty()) return proof.steps.size();
  return std::nullopt;
}

bool replay_proof(const Proof& proof, const Signature* sig) { return !first_invalid_step(proof, sig); }

std::set<int> used_axioms(const Proof& proof) {
  std::set<int> out;
  for (const auto& s : proof.steps) {
    if (s.rule != InferenceRule::Input) continue;
    for (std::size_t i = 0; i < proof.problem.size(); ++i) {
      if (proof.problem[i] == s.clause && i < proof.origins.size() && proof.origins[i] >= 0) {
        out.insert(proof.origins[i]);
      }
    }
  }
  return out;
}

}  // namespace dde
