#include "dde/dde.hpp"

#include <chrono>
#include <future>
#include <sstream>

namespace dde {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

bool mentions_any(const Formula& f, const std::set<Term>& theta) {
  for (const auto& t : theta)
    if (contains_term(f, t)) return true;
  return false;
}

Term moment(std::int64_t y) { return Term::number(static_cast<double>(y)); }

std::string signed_number(double v) {
  std::ostringstream os;
  if (v > 0) os << '+';
  os << v;
  return os.str();
}

// Profile fluents split by valence over (t, H].
struct Valence {
  std::vector<std::pair<Term, bool>> good;  // (fluent, initiated)
  std::vector<std::pair<Term, bool>> bad;
};

Valence classify(const ScenarioDocument& doc, const EffectProfile& profile) {
  Valence v;
  auto scan = [&](const Term& f, bool initiated) {
    bool pos = false, neg = false;
    for (std::int64_t y = doc.time + 1; y <= doc.horizon; ++y) {
      double u = doc.utility(f, y);
      pos = pos || u > 0;
      neg = neg || u < 0;
    }
    // An initiated fluent is good when valued positively, a terminated one
    // when valued negatively; the opposite makes it bad.
    if (initiated ? pos : neg) v.good.emplace_back(f, initiated);
    if (initiated ? neg : pos) v.bad.emplace_back(f, initiated);
  };
  for (const auto& [f, y] : profile.initiated) scan(f, true);
  for (const auto& [f, y] : profile.terminated) scan(f, false);
  return v;
}

bool fo_entails(const Formula& premise, const Formula& goal, const ModalOptions& m) {
  FoOptions fo{m.fo_budget, m.signature, false};
  return fo_prove({premise}, goal, fo).status == ProofStatus::Proved;
}

ModalOptions modal_options(const ScenarioDocument& doc, const CheckOptions& opts) {
  ModalOptions m = opts.modal;
  m.signature = &doc.signature;
  return m;
}

}  // namespace

Formula FluentLiteral::formula() const {
  Formula h = holds_atom(fluent, moment(time));
  return positive ? h : Formula::negation(h);
}

std::string FluentLiteral::to_string() const { return print_formula(formula()); }

std::set<Term> entity_terms(const Term& fluent) {
  if (!fluent.is_ground()) throw ContractError("entity_terms needs a ground fluent: " + dde::to_string(fluent));
  std::set<Term> out;
  for (const auto& a : fluent.args()) {
    std::vector<Term> subs;
    collect_subterms(a, subs);
    out.insert(subs.begin(), subs.end());
  }
  return out;
}

std::vector<Formula> prune(const std::vector<Formula>& gamma, const std::set<Term>& theta) {
  std::vector<Formula> out;
  for (const auto& f : gamma)
    if (!mentions_any(f, theta)) out.push_back(f);
  return out;
}

std::vector<NamedFormula> prune(const std::vector<NamedFormula>& gamma, const std::set<Term>& theta) {
  std::vector<NamedFormula> out;
  for (const auto& f : gamma)
    if (!mentions_any(f.formula, theta)) out.push_back(f);
  return out;
}

std::vector<NamedFormula> retain(const std::vector<NamedFormula>& gamma, const std::set<Term>& theta) {
  std::vector<NamedFormula> out;
  for (const auto& f : gamma)
    if (mentions_any(f.formula, theta)) out.push_back(f);
  return out;
}

CausalModel::CausalModel(std::vector<NamedFormula> theory, Signature sig, std::int64_t horizon, MeansMode mode)
    : theory_(std::move(theory)), sig_(std::move(sig)), horizon_(horizon), mode_(mode) {
  trace_ = simulate(compile_domain(theory_, sig_), horizon_, sig_);
}

CausalModel::CausalModel(std::vector<NamedFormula> theory, Signature sig, Trace trace, MeansMode mode)
    : theory_(std::move(theory)), sig_(std::move(sig)), horizon_(trace.horizon()), mode_(mode), trace_(std::move(trace)) {}

bool CausalModel::entails(const FluentLiteral& lit) const {
  if (lit.time < 0 || lit.time > horizon_) return false;
  return trace_.holds(lit.fluent, lit.time) == lit.positive;
}

const Trace& CausalModel::pruned_trace(const Term& fluent) {
  std::set<Term> theta = entity_terms(fluent);
  std::lock_guard lock(mutex_);
  auto it = pruned_.find(theta);
  if (it == pruned_.end()) {
    auto reduced = mode_ == MeansMode::Prose ? prune(theory_, theta) : retain(theory_, theta);
    it = pruned_.emplace(theta, simulate(compile_domain(reduced, sig_), horizon_, sig_)).first;
  }
  return it->second;
}

bool CausalModel::means(const FluentLiteral& f, const FluentLiteral& g) {
  if (!f.fluent.is_ground() || !g.fluent.is_ground()) throw ContractError("means needs ground literals");
  if (g.time <= f.time) return false;
  if (!entails(f) || !entails(g)) return true;
  const Trace& reduced = pruned_trace(f.fluent);
  return reduced.holds(g.fluent, g.time) != g.positive;
}

bool means(const std::vector<NamedFormula>& theory, const Signature& sig, std::int64_t horizon,
           const FluentLiteral& f, const FluentLiteral& g, MeansMode mode) {
  if (!f.fluent.is_ground() || !g.fluent.is_ground()) throw ContractError("means needs ground literals");
  if (g.time <= f.time) return false;
  return CausalModel(theory, sig, horizon, mode).means(f, g);
}

UtilityLedger utility_ledger(const EffectProfile& profile, const UtilityFunction& mu, std::int64_t t,
                             std::int64_t horizon, F2SumMode mode) {
  UtilityLedger ledger;
  auto add = [&](const Term& f, std::int64_t start, bool initiated) {
    LedgerEntry e{f, initiated, mode == F2SumMode::Onset ? start : t + 1, horizon, 0};
    double sum = 0;
    for (std::int64_t y = e.from; y <= e.to; ++y) sum += mu(f, y);
    e.contribution = initiated ? sum : -sum;
    if (e.contribution == 0) return;
    ledger.net += e.contribution;
    ledger.entries.push_back(std::move(e));
  };
  for (const auto& [f, y] : profile.initiated) add(f, y, true);
  for (const auto& [f, y] : profile.terminated) add(f, y, false);
  return ledger;
}

Analysis analyze(const ScenarioDocument& doc) {
  auto t0 = Clock::now();
  Analysis a;
  a.acted_theory = doc.axioms;
  a.acted_theory.push_back({"action", doc.action_happens(), 0});
  a.baseline = simulate(compile_domain(doc.axioms, doc.signature), doc.horizon, doc.signature);
  a.acted = simulate(compile_domain(a.acted_theory, doc.signature), doc.horizon, doc.signature);
  a.profile = effect_profile(a.baseline, a.acted);
  a.seconds = seconds_since(t0);
  return a;
}

IntentionSet derive_intentions(const ScenarioDocument& doc, const ModalOptions& opts) {
  ModalOptions m = opts;
  m.signature = &doc.signature;
  ModalResult r = modal_prove(doc.background(), Formula::truth(false), m);
  IntentionSet out;
  out.status = r.status;
  out.fo_steps = r.fo_steps;
  std::set<Formula> seen;
  for (const auto& f : r.knowledge) {
    if (!f.is(Formula::Kind::Modal) || f.op() != ModalOp::Intends) continue;
    if (f.agent() != doc.agent || f.time() != doc.moment) continue;
    if (seen.insert(f.body()).second) out.contents.push_back(f.body());
  }
  return out;
}

ClauseVerdict check_F1(const ScenarioDocument& doc, const CheckOptions& opts) {
  auto t0 = Clock::now();
  ClauseVerdict v;
  v.id = "F1";
  Formula refrain = Formula::negation(doc.action_happens());
  Formula goal = Formula::modal(ModalOp::Ought, {doc.agent, doc.moment}, {doc.situation, refrain});
  if (doc.interpretation.f1 == F1Mode::Literal) goal = Formula::negation(goal);
  ModalResult r = modal_prove(doc.background(), goal, modal_options(doc, opts));
  v.pass = r.status != ProofStatus::Proved;
  v.approximate = r.status == ProofStatus::ResourceOut;
  v.evidence_kind = v.pass ? "non-provability" : "proof";
  v.summary = std::string(v.pass ? "not derivable: " : "derivable: ") + print_formula(goal) + " [" +
              std::string(to_string(r.status)) + ", " + std::to_string(r.rounds) + " rounds]";
  if (!v.pass) {
    std::istringstream lines(r.trace_text());
    for (std::string l; std::getline(lines, l);) v.details.push_back(l);
  }
  v.seconds = seconds_since(t0);
  return v;
}

ClauseVerdict check_F2(const ScenarioDocument& doc, const EffectProfile& profile) {
  auto t0 = Clock::now();
  ClauseVerdict v;
  v.id = "F2";
  v.evidence_kind = "ledger";
  v.ledger = utility_ledger(profile, doc.utility, doc.time, doc.horizon, doc.interpretation.f2_sum);
  v.pass = v.ledger.net > doc.gamma;
  std::ostringstream os;
  os << "net " << signed_number(v.ledger.net) << (v.pass ? " > " : " <= ") << "gamma " << doc.gamma << " ("
     << to_string(doc.interpretation.f2_sum) << " summation)";
  v.summary = os.str();
  for (const auto& e : v.ledger.entries) {
    std::ostringstream d;
    d << (e.initiated ? "initiated " : "terminated ") << to_string(e.fluent) << " [" << e.from << ".." << e.to
      << "] " << signed_number(e.contribution);
    v.details.push_back(d.str());
  }
  v.seconds = seconds_since(t0);
  return v;
}

ClauseVerdict check_F3a(const ScenarioDocument& doc, const EffectProfile& profile, const IntentionSet& intentions,
                        const CheckOptions& opts) {
  auto t0 = Clock::now();
  ClauseVerdict v;
  v.id = "F3a";
  v.evidence_kind = "proof";
  ModalOptions m = modal_options(doc, opts);
  Valence val = classify(doc, profile);

  std::set<Term> intended;
  for (const auto& [f, initiated] : val.good) {
    bool hit = false;
    for (std::int64_t y = doc.time + 1; y <= doc.horizon && !hit; ++y) {
      double u = doc.utility(f, y);
      if (initiated ? u <= 0 : u >= 0) continue;
      FluentLiteral lit{f, y, initiated};
      for (const auto& chi : intentions.contents) {
        if (!fo_entails(chi, lit.formula(), m)) continue;
        v.details.push_back("I(" + to_string(doc.agent) + ", " + to_string(doc.moment) + ", " + print_formula(chi) +
                            ") entails " + lit.to_string());
        hit = true;
        break;
      }
    }
    if (hit) intended.insert(f);
  }

  if (intended.empty()) {
    v.pass = false;
    v.approximate = intentions.status == ProofStatus::ResourceOut;
    v.summary = "no good effect is intended (" + std::to_string(intentions.contents.size()) + " intentions derived)";
    v.seconds = seconds_since(t0);
    return v;
  }
  // F2 again, crediting only the intended good effects.
  UtilityLedger ledger = utility_ledger(profile, doc.utility, doc.time, doc.horizon, doc.interpretation.f2_sum);
  ledger.net = 0;
  for (auto& e : ledger.entries) {
    if (e.contribution > 0 && !intended.count(e.fluent)) e.contribution = 0;
    ledger.net += e.contribution;
  }
  v.ledger = ledger;
  v.pass = ledger.net > doc.gamma;
  v.summary = std::to_string(intended.size()) + " good effect(s) intended; net with only those " +
              signed_number(ledger.net) + (v.pass ? " > gamma" : " <= gamma");
  v.seconds = seconds_since(t0);
  return v;
}

ClauseVerdict check_F3a(const ScenarioDocument& doc, const EffectProfile& profile, const CheckOptions& opts) {
  return check_F3a(doc, profile, derive_intentions(doc, opts.modal), opts);
}

ClauseVerdict check_F3b(const ScenarioDocument& doc, const EffectProfile& profile, const IntentionSet& intentions,
                        const CheckOptions& opts) {
  auto t0 = Clock::now();
  ClauseVerdict v;
  v.id = "F3b";
  v.evidence_kind = "non-provability";
  ModalOptions m = modal_options(doc, opts);
  Valence val = classify(doc, profile);

  std::vector<FluentLiteral> forbidden;
  for (const auto& [f, initiated] : val.bad) {
    for (std::int64_t y = doc.time + 1; y <= doc.horizon; ++y) {
      double u = doc.utility(f, y);
      if (initiated ? u < 0 : u > 0) forbidden.push_back({f, y, initiated});
    }
  }
  if (forbidden.empty()) {
    v.pass = true;
    v.summary = "no bad effects";
    v.seconds = seconds_since(t0);
    return v;
  }

  for (const auto& chi : intentions.contents)
    for (const auto& lit : forbidden)
      if (fo_entails(chi, lit.formula(), m))
        v.details.push_back("I(" + to_string(doc.agent) + ", " + to_string(doc.moment) + ", " + print_formula(chi) +
                            ") entails " + lit.to_string());

  std::vector<Formula> goals;
  for (const auto& lit : forbidden) goals.push_back(Formula::modal(ModalOp::Intends, {doc.agent, doc.moment}, {lit.formula()}));
  Formula goal = goals.size() == 1 ? goals.front() : Formula::disjunction(goals);
  ModalResult r = modal_prove(doc.background(), goal, m);
  if (r.status == ProofStatus::Proved) v.details.push_back("derivable: some intention toward a bad effect");

  v.pass = v.details.empty();
  v.approximate = v.pass && (r.status == ProofStatus::ResourceOut || intentions.status == ProofStatus::ResourceOut);
  if (!v.pass) v.evidence_kind = "proof";
  v.summary = v.pass ? "no intention toward any of " + std::to_string(forbidden.size()) + " bad literal(s) [" +
                           std::string(to_string(r.status)) + "]"
                     : "a bad effect is intended";
  v.seconds = seconds_since(t0);
  return v;
}

ClauseVerdict check_F3b(const ScenarioDocument& doc, const EffectProfile& profile, const CheckOptions& opts) {
  return check_F3b(doc, profile, derive_intentions(doc, opts.modal), opts);
}

ClauseVerdict check_F4(const ScenarioDocument& doc, const Analysis& analysis) {
  auto t0 = Clock::now();
  ClauseVerdict v;
  v.id = "F4";
  v.evidence_kind = "means";
  Valence val = classify(doc, analysis.profile);
  CausalModel model(analysis.acted_theory, doc.signature, analysis.acted, doc.interpretation.means);

  std::size_t checked = 0, violations = 0;
  for (const auto& [fb, bi] : val.bad) {
    for (std::int64_t t1 = doc.time + 1; t1 <= doc.horizon; ++t1) {
      for (bool pb : {true, false}) {
        FluentLiteral b{fb, t1, pb};
        if (!model.entails(b)) continue;
        for (const auto& [fg, gi] : val.good) {
          for (std::int64_t t2 = t1 + 1; t2 <= doc.horizon; ++t2) {
            for (bool pg : {true, false}) {
              FluentLiteral g{fg, t2, pg};
              if (!model.entails(g)) continue;
              ++checked;
              if (!model.means(b, g)) continue;
              if (violations++ < 8) v.details.push_back(b.to_string() + " is a means to " + g.to_string());
            }
          }
        }
      }
    }
  }
  v.pass = violations == 0;
  v.summary = v.pass ? "no bad effect is a means to a good one (" + std::to_string(checked) + " pairs)"
                     : std::to_string(violations) + " of " + std::to_string(checked) + " pairs violate";
  v.seconds = seconds_since(t0);
  return v;
}

const ClauseVerdict* Verdict::clause(std::string_view id) const {
  for (const auto& c : clauses)
    if (c.id == id) return &c;
  return nullptr;
}

bool Verdict::approximate() const {
  for (const auto& c : clauses)
    if (c.required && c.approximate) return true;
  return false;
}

std::vector<std::string> Verdict::failing() const {
  std::vector<std::string> out;
  for (const auto& c : clauses)
    if (c.required && !c.pass) out.push_back(c.id);
  return out;
}

Verdict dde_verdict(const ScenarioDocument& doc, const CheckOptions& opts) {
  auto t0 = Clock::now();
  Verdict v;
  v.scenario = doc.name;
  v.doctrine = doc.doctrine;
  Analysis a = analyze(doc);
  v.simulation_seconds = a.seconds;

  auto policy = opts.parallel ? std::launch::async : std::launch::deferred;
  auto f1 = std::async(policy, [&] { return check_F1(doc, opts); });
  auto f3 = std::async(policy, [&] {
    auto t = Clock::now();
    IntentionSet intents = derive_intentions(doc, opts.modal);
    double shared = seconds_since(t);
    auto f3a = check_F3a(doc, a.profile, intents, opts);
    auto f3b = check_F3b(doc, a.profile, intents, opts);
    f3a.seconds += shared / 2;
    f3b.seconds += shared / 2;
    return std::make_pair(std::move(f3a), std::move(f3b));
  });
  auto f4 = std::async(policy, [&] { return check_F4(doc, a); });

  v.clauses.push_back(f1.get());
  v.clauses.push_back(check_F2(doc, a.profile));
  auto [f3a, f3b] = f3.get();
  v.clauses.push_back(std::move(f3a));
  v.clauses.push_back(std::move(f3b));
  v.clauses.push_back(f4.get());
  if (doc.doctrine == Doctrine::DTE) v.clauses.back().required = false;

  v.compliant = true;
  for (const auto& c : v.clauses)
    if (c.required && !c.pass) v.compliant = false;
  if (a.profile.empty()) v.warnings.push_back("the action changes nothing within the horizon");
  v.total_seconds = seconds_since(t0);
  return v;
}

SweepResult agent_compliance_sweep(const ScenarioDocument& doc, const std::vector<Term>& actions,
                                   const std::vector<std::int64_t>& times, const CheckOptions& opts) {
  SweepResult s;
  if (actions.empty() || times.empty()) {
    s.warnings.push_back("empty enumeration: vacuously compliant");
    return s;
  }
  for (const auto& act : actions) {
    for (auto t : times) {
      ScenarioDocument cell = doc;
      cell.action_type = act;
      if (doc.moment == moment(doc.time)) cell.moment = moment(t);
      cell.time = t;
      validate(cell);
      Verdict v = dde_verdict(cell, opts);
      s.all_compliant = s.all_compliant && v.compliant;
      s.cells.push_back({act, t, std::move(v)});
    }
  }
  return s;
}

}  // namespace dde
