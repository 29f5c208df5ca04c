#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <set>
#include <string>
#include <vector>

#include "dde/ec.hpp"
#include "dde/modal.hpp"

namespace dde {

/// holds(fluent, time) or its negation.
struct FluentLiteral {
  Term fluent;
  std::int64_t time = 0;
  bool positive = true;

  Formula formula() const;
  std::string to_string() const;
};

/// ⊙: every constant and function-expression subterm of a ground fluent,
/// excluding the fluent symbol itself. Throws ContractError on a non-ground
/// fluent.
std::set<Term> entity_terms(const Term& fluent);

/// ⊗: the formulas of gamma that mention none of theta.
std::vector<Formula> prune(const std::vector<Formula>& gamma, const std::set<Term>& theta);
std::vector<NamedFormula> prune(const std::vector<NamedFormula>& gamma, const std::set<Term>& theta);
/// gamma minus prune(gamma, theta): only the formulas that do mention theta.
std::vector<NamedFormula> retain(const std::vector<NamedFormula>& gamma, const std::set<Term>& theta);

/// A theory whose ground holds-literals are decided by simulation under the
/// closed-world completion. Pruned re-simulations are cached per entity set,
/// so one instance serves many ▷ queries.
class CausalModel {
 public:
  CausalModel(std::vector<NamedFormula> theory, Signature sig, std::int64_t horizon,
              MeansMode mode = MeansMode::Prose);
  /// Reuses an already simulated trace of `theory`.
  CausalModel(std::vector<NamedFormula> theory, Signature sig, Trace trace, MeansMode mode = MeansMode::Prose);

  const Trace& trace() const { return trace_; }
  std::int64_t horizon() const { return horizon_; }
  bool entails(const FluentLiteral& lit) const;

  /// ▷: t2 > t1, and when both literals are entailed, the theory re-simulated
  /// after removing f's entities (prose) or keeping only the formulas that
  /// mention them (literal) no longer entails g.
  bool means(const FluentLiteral& f, const FluentLiteral& g);
  /// The re-simulated trace used for f.
  const Trace& pruned_trace(const Term& fluent);

 private:
  std::vector<NamedFormula> theory_;
  Signature sig_;
  std::int64_t horizon_;
  MeansMode mode_;
  Trace trace_;
  std::mutex mutex_;
  std::map<std::set<Term>, Trace> pruned_;
};

/// One-shot ▷ over a theory (the theory already includes the action).
bool means(const std::vector<NamedFormula>& theory, const Signature& sig, std::int64_t horizon,
           const FluentLiteral& f, const FluentLiteral& g, MeansMode mode = MeansMode::Prose);

struct LedgerEntry {
  Term fluent;
  bool initiated = true;  ///< α_I (else α_T)
  std::int64_t from = 0;
  std::int64_t to = 0;
  double contribution = 0;
};

struct UtilityLedger {
  std::vector<LedgerEntry> entries;
  double net = 0;
};

/// Σ over α_I of μ minus Σ over α_T of μ. Onset mode sums each fluent from
/// its onset/offset to H; literal mode from t+1 to H.
UtilityLedger utility_ledger(const EffectProfile& profile, const UtilityFunction& mu, std::int64_t t,
                             std::int64_t horizon, F2SumMode mode);

struct CheckOptions {
  ModalOptions modal;
  /// Run F1, F3 and F4 concurrently.
  bool parallel = true;
};

struct ClauseVerdict {
  std::string id;  ///< F1 F2 F3a F3b F4
  bool pass = false;
  /// Counts toward the overall verdict (F4 does not under DTE).
  bool required = true;
  /// A non-provability check ended in ResourceOut.
  bool approximate = false;
  /// proof | non-provability | ledger | means
  std::string evidence_kind;
  std::string summary;
  std::vector<std::string> details;
  UtilityLedger ledger;
  double seconds = 0;
};

/// Baseline and acted simulations plus their difference.
struct Analysis {
  std::vector<NamedFormula> acted_theory;
  Trace baseline;
  Trace acted;
  EffectProfile profile;
  double seconds = 0;
};

Analysis analyze(const ScenarioDocument& doc);

/// Intentions of the scenario's agent at its moment, from saturating Γ.
struct IntentionSet {
  std::vector<Formula> contents;
  ProofStatus status = ProofStatus::NotProved;
  std::int64_t fo_steps = 0;
};
IntentionSet derive_intentions(const ScenarioDocument& doc, const ModalOptions& opts);

ClauseVerdict check_F1(const ScenarioDocument& doc, const CheckOptions& opts = {});
ClauseVerdict check_F2(const ScenarioDocument& doc, const EffectProfile& profile);
ClauseVerdict check_F3a(const ScenarioDocument& doc, const EffectProfile& profile, const IntentionSet& intentions,
                        const CheckOptions& opts = {});
ClauseVerdict check_F3a(const ScenarioDocument& doc, const EffectProfile& profile, const CheckOptions& opts = {});
ClauseVerdict check_F3b(const ScenarioDocument& doc, const EffectProfile& profile, const IntentionSet& intentions,
                        const CheckOptions& opts = {});
ClauseVerdict check_F3b(const ScenarioDocument& doc, const EffectProfile& profile, const CheckOptions& opts = {});
ClauseVerdict check_F4(const ScenarioDocument& doc, const Analysis& analysis);

struct Verdict {
  std::string scenario;
  Doctrine doctrine = Doctrine::DDE;
  std::vector<ClauseVerdict> clauses;
  bool compliant = false;
  double simulation_seconds = 0;
  double total_seconds = 0;
  std::vector<std::string> warnings;

  const ClauseVerdict* clause(std::string_view id) const;
  bool approximate() const;
  /// Required clauses that failed.
  std::vector<std::string> failing() const;
};

/// F1 ∧ F2 ∧ F3a ∧ F3b ∧ F4 (DDE) or without F4 (DTE), per doc.doctrine.
Verdict dde_verdict(const ScenarioDocument& doc, const CheckOptions& opts = {});

struct SweepCell {
  Term action_type;
  std::int64_t time = 0;
  Verdict verdict;
};

struct SweepResult {
  std::vector<SweepCell> cells;
  bool all_compliant = true;
  std::vector<std::string> warnings;
};

SweepResult agent_compliance_sweep(const ScenarioDocument& doc, const std::vector<Term>& actions,
                                   const std::vector<std::int64_t>& times, const CheckOptions& opts = {});

std::string to_text(const Verdict& v);
std::string to_json(const Verdict& v, int indent = 2);
std::string to_text(const SweepResult& s);
std::string to_json(const SweepResult& s, int indent = 2);

}  // namespace dde
