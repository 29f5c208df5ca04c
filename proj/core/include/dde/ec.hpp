#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "dde/dsl.hpp"

namespace dde {

/// initiates / terminates rule: when `event` happens at `time` and `guard`
/// holds in the current state, `fluent` starts (stops) holding next tick.
struct EffectRule {
  bool initiates = true;
  Term event;
  Term fluent;
  Term time;
  Formula guard;
  std::string source;
};

/// happens(event, time) <- guard, evaluated on the state at `time`.
struct TriggerRule {
  Term event;
  Term time;
  Formula guard;
  std::string source;
};

/// holds(fluent, time) <- guard, same tick. Derived fluents persist by inertia.
struct StateConstraint {
  Term fluent;
  Term time;
  Formula guard;
  std::string source;
};

/// trajectory(base, start, derived, delta): once `base` is initiated at
/// `start`, `derived` with delta = y - start holds at every y until `base`
/// is clipped (the clipping tick itself included).
struct TrajectoryDecl {
  Term base;
  Term start;
  Term derived;
  Term delta;
  std::string source;
};

struct DomainAxioms {
  std::vector<Term> initially;
  std::set<Term> statics;  ///< Ground atoms of non-event-calculus predicates.
  std::vector<EffectRule> effects;
  std::vector<TriggerRule> triggers;
  std::vector<StateConstraint> constraints;
  std::vector<TrajectoryDecl> trajectories;
  std::vector<std::pair<Term, std::int64_t>> schedule;
  /// Formulas that carry no simulation content (modal facts, distinctness,
  /// non-effect statements).
  std::vector<std::string> passive;
};

/// Classifies each formula as an initially fact, a scheduled event, an
/// effect rule, a trigger, a state constraint, a trajectory declaration or a
/// static fact. Throws DomainError when a rule's conclusion has a variable
/// not bound by its event pattern or positive guard atoms.
DomainAxioms compile_domain(const std::vector<NamedFormula>& axioms, const Signature& sig);
DomainAxioms compile_domain(const std::vector<Formula>& axioms, const Signature& sig);

class Trace {
 public:
  Trace() = default;
  explicit Trace(std::int64_t horizon)
      : states_(static_cast<std::size_t>(horizon + 1)),
        events_(states_.size()),
        derived_(states_.size()),
        constrained_(states_.size()),
        initiated_(states_.size()),
        terminated_(states_.size()) {}

  std::int64_t horizon() const { return static_cast<std::int64_t>(states_.size()) - 1; }
  const std::set<Term>& state(std::int64_t y) const { return states_.at(static_cast<std::size_t>(y)); }
  std::set<Term>& state(std::int64_t y) { return states_.at(static_cast<std::size_t>(y)); }
  const std::set<Term>& events(std::int64_t y) const { return events_.at(static_cast<std::size_t>(y)); }
  std::set<Term>& events(std::int64_t y) { return events_.at(static_cast<std::size_t>(y)); }
  bool holds(const Term& fluent, std::int64_t y) const;
  /// Fluents placed by a trajectory at y (exempt from inertia).
  const std::set<Term>& derived(std::int64_t y) const { return derived_.at(static_cast<std::size_t>(y)); }
  std::set<Term>& derived(std::int64_t y) { return derived_.at(static_cast<std::size_t>(y)); }
  /// Fluents added at y by a state constraint rather than carried over.
  const std::set<Term>& constrained(std::int64_t y) const { return constrained_.at(static_cast<std::size_t>(y)); }
  std::set<Term>& constrained(std::int64_t y) { return constrained_.at(static_cast<std::size_t>(y)); }
  /// Effects of the events at y (they take hold at y + 1).
  const std::set<Term>& initiated(std::int64_t y) const { return initiated_.at(static_cast<std::size_t>(y)); }
  std::set<Term>& initiated(std::int64_t y) { return initiated_.at(static_cast<std::size_t>(y)); }
  const std::set<Term>& terminated(std::int64_t y) const { return terminated_.at(static_cast<std::size_t>(y)); }
  std::set<Term>& terminated(std::int64_t y) { return terminated_.at(static_cast<std::size_t>(y)); }
  /// Every fluent that holds somewhere in the trace.
  std::set<Term> fluents() const;

  /// One "<y> <fluent>" line per held pair, ordered by time then fluent text.
  std::string dump() const;

  friend bool operator==(const Trace& a, const Trace& b) { return a.states_ == b.states_; }

 private:
  std::vector<std::set<Term>> states_;
  std::vector<std::set<Term>> events_;
  std::vector<std::set<Term>> derived_;
  std::vector<std::set<Term>> constrained_;
  std::vector<std::set<Term>> initiated_;
  std::vector<std::set<Term>> terminated_;
};

/// Forward simulation over [0, H]. Each tick: inertial state plus active
/// trajectories, same-tick ramification, then events (schedule and
/// triggers) and their effects; fluents started by a trajectory at delta 0
/// join the current tick. Throws DomainError on a simultaneous initiate and
/// terminate of one fluent.
Trace simulate(const DomainAxioms& d, std::int64_t horizon, const Signature& sig);

struct EffectProfile {
  /// α_I with onset time: holds somewhere in acted but not in baseline.
  std::map<Term, std::int64_t> initiated;
  /// α_T with offset time: holds somewhere in baseline but not in acted.
  std::map<Term, std::int64_t> terminated;

  bool empty() const { return initiated.empty() && terminated.empty(); }
};

EffectProfile effect_profile(const Trace& baseline, const Trace& acted);

/// All ground fluent terms of the signature: constants for object sorts,
/// 0..H for numeric argument positions. Throws DomainError when an argument
/// sort has generator functions (infinite universe).
std::vector<Term> fluent_universe(const Signature& sig, std::int64_t horizon);
/// Closed-world export: holds(f,y) for every held pair and ¬holds(f,y) for
/// every other fluent in the universe.
std::vector<Formula> holds_facts(const Trace& trace, const Signature& sig);

/// Checks the inertia law between consecutive ticks: a carried fluent
/// (held and not trajectory-placed, not terminated, or just initiated) must
/// hold next tick, and anything new must be trajectory- or constraint-placed.
/// Returns "<y> <fluent>" descriptions of violations.
std::vector<std::string> inertia_violations(const Trace& trace);

}  // namespace dde
