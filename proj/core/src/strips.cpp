#include "dde/strips.hpp"

#include <chrono>
#include <map>
#include <sstream>

namespace dde {

namespace {

using Clock = std::chrono::steady_clock;

std::string atoms_text(const std::set<Term>& s) {
  std::string out;
  for (const auto& a : s) out += (out.empty() ? "" : " ") + to_string(a);
  return out;
}

std::string literal_text(const Term& atom, bool positive) {
  return positive ? to_string(atom) : "(not " + to_string(atom) + ")";
}

struct Reader {
  int wildcards = 0;

  Term atom(const Sexpr& s, bool patterns = false) {
    switch (s.kind) {
      case Sexpr::Kind::Number: return Term::number(s.number);
      case Sexpr::Kind::String: s.fail("unexpected string");
      case Sexpr::Kind::Symbol:
        if (patterns && s.text == "_") return Term::variable("_" + std::to_string(wildcards++), sort::kAny);
        return Term::constant(s.text, sort::kAny);
      case Sexpr::Kind::List: break;
    }
    if (s.items.empty() || !s.items[0].is_symbol()) s.fail("atom must be (symbol args...)");
    if (s.items[0].is_symbol("not")) s.fail("negation is not an atom");
    std::vector<Term> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(atom(s.items[i], patterns));
    return Term::apply(s.items[0].text, std::move(args), sort::kAny);
  }

  std::pair<Term, bool> literal(const Sexpr& s) {
    if (s.is_list() && s.items.size() == 2 && s.items[0].is_symbol("not")) return {atom(s.items[1]), false};
    return {atom(s), true};
  }

  std::set<Term> atoms(const Sexpr& field) {
    std::set<Term> out;
    for (std::size_t i = 1; i < field.items.size(); ++i) out.insert(atom(field.items[i]));
    return out;
  }
};

const std::string& symbol(const Sexpr& s, const char* what) {
  if (!s.is_symbol()) s.fail(std::string("expected ") + what);
  return s.text;
}

double number(const Sexpr& s) {
  if (!s.is_number()) s.fail("expected a number");
  return s.number;
}

const Sexpr* field(const Sexpr& section, std::string_view key) {
  const Sexpr* found = nullptr;
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const Sexpr& f = section.items[i];
    if (!f.is_list() || f.items.empty() || !f.items[0].is_symbol()) f.fail("expected a field (key ...)");
    if (f.items[0].text != key) continue;
    if (found) f.fail("duplicate field '" + std::string(key) + "'");
    found = &f;
  }
  return found;
}

ClauseVerdict make(const std::string& id, const std::string& kind) {
  ClauseVerdict v;
  v.id = id;
  v.evidence_kind = kind;
  return v;
}

}  // namespace

std::vector<std::set<Term>> execute_plan(const Plan& p) {
  std::vector<std::set<Term>> states{p.initial};
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    const auto& a = p.actions[i];
    std::set<Term> s = states.back();
    for (const auto& q : a.pre)
      if (!s.count(q))
        throw DomainError("action " + std::to_string(i) + " (" + a.name + "): precondition " + to_string(q) +
                          " not satisfied");
    for (const auto& d : a.del) s.erase(d);
    s.insert(a.add.begin(), a.add.end());
    states.push_back(std::move(s));
  }
  return states;
}

bool plan_means(const Plan& p, const Term& e1, const Term& e2) {
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    if (!p.actions[i].pre.count(e1)) continue;
    for (std::size_t j = i + 1; j < p.actions.size(); ++j)
      if (p.actions[j].add.count(e2)) return true;
  }
  return false;
}

Verdict strips_dde_check(const Plan& p, const GrayBoxAssertions& gb, const UtilityFunction& mu, double gamma,
                         const std::set<std::string>& forbidden, const StripsCheckOptions& opts) {
  auto t0 = Clock::now();
  Verdict v;
  v.doctrine = opts.doctrine;

  const auto states = execute_plan(p);
  const auto base = execute_plan(Plan{opts.baseline, p.initial, {}});
  v.simulation_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  const auto& final_state = states.back();
  const auto& base_state = base.back();
  const auto T = static_cast<std::int64_t>(p.actions.size());

  std::set<Term> initiated, terminated;
  for (const auto& a : final_state)
    if (!base_state.count(a)) initiated.insert(a);
  for (const auto& a : base_state)
    if (!final_state.count(a)) terminated.insert(a);

  std::vector<Term> good_added, good_removed, bad_added, bad_removed;
  for (const auto& a : initiated) {
    if (mu(a, T) > 0) good_added.push_back(a);
    if (mu(a, T) < 0) bad_added.push_back(a);
  }
  for (const auto& a : terminated) {
    if (mu(a, T) < 0) good_removed.push_back(a);
    if (mu(a, T) > 0) bad_removed.push_back(a);
  }

  std::set<std::pair<Term, bool>> intended(p.goal.begin(), p.goal.end());
  for (const auto& i : gb.intentions) intended.emplace(i.atom, i.positive);

  // F1
  ClauseVerdict f1 = make("F1", "non-provability");
  for (std::size_t i = 0; i < p.actions.size(); ++i) {
    const auto& name = p.actions[i].name;
    if (forbidden.count(name)) f1.details.push_back("action " + std::to_string(i) + " (" + name + ") is forbidden");
    for (const auto& pr : gb.prohibitions)
      if (pr == name) f1.details.push_back("action " + std::to_string(i) + " (" + name + ") is prohibited");
  }
  f1.pass = f1.details.empty();
  f1.summary = f1.pass ? "no plan action is forbidden" : "plan uses a forbidden action";

  // F2
  ClauseVerdict f2 = make("F2", "ledger");
  for (const auto& a : initiated)
    if (double u = mu(a, T); u != 0) f2.ledger.entries.push_back({a, true, T, T, u});
  for (const auto& a : terminated)
    if (double u = mu(a, T); u != 0) f2.ledger.entries.push_back({a, false, T, T, -u});
  for (const auto& e : f2.ledger.entries) {
    f2.ledger.net += e.contribution;
    std::ostringstream d;
    d << (e.initiated ? "added " : "removed ") << to_string(e.fluent) << ' ' << e.contribution;
    f2.details.push_back(d.str());
  }
  f2.pass = f2.ledger.net > gamma;
  {
    std::ostringstream os;
    os << "net " << f2.ledger.net << (f2.pass ? " > " : " <= ") << "gamma " << gamma;
    f2.summary = os.str();
  }

  // F3a
  ClauseVerdict f3a = make("F3a", "proof");
  std::set<Term> intended_good;
  for (const auto& a : good_added)
    if (intended.count({a, true})) intended_good.insert(a);
  for (const auto& a : good_removed)
    if (intended.count({a, false})) intended_good.insert(a);
  for (const auto& a : intended_good) f3a.details.push_back("intends good effect on " + to_string(a));
  if (intended_good.empty()) {
    f3a.pass = false;
    f3a.summary = "no good effect is intended";
  } else {
    f3a.ledger = f2.ledger;
    f3a.ledger.net = 0;
    for (auto& e : f3a.ledger.entries) {
      if (e.contribution > 0 && !intended_good.count(e.fluent)) e.contribution = 0;
      f3a.ledger.net += e.contribution;
    }
    f3a.pass = f3a.ledger.net > gamma;
    f3a.summary = std::to_string(intended_good.size()) + " good effect(s) intended";
  }

  // F3b
  ClauseVerdict f3b = make("F3b", "non-provability");
  for (const auto& a : bad_added)
    if (intended.count({a, true})) f3b.details.push_back("intends " + literal_text(a, true));
  for (const auto& a : bad_removed)
    if (intended.count({a, false})) f3b.details.push_back("intends " + literal_text(a, false));
  f3b.pass = f3b.details.empty();
  if (!f3b.pass) f3b.evidence_kind = "proof";
  f3b.summary = f3b.pass ? "no bad effect is intended" : "a bad effect is intended";

  // F4
  ClauseVerdict f4 = make("F4", "means");
  std::vector<Term> bad = bad_added;
  bad.insert(bad.end(), bad_removed.begin(), bad_removed.end());
  for (const auto& e1 : bad)
    for (const auto& e2 : good_added)
      if (plan_means(p, e1, e2)) f4.details.push_back(to_string(e1) + " is a means to " + to_string(e2));
  f4.pass = f4.details.empty();
  f4.summary = f4.pass ? "no bad effect is a means to a good one" : "a bad effect is a means to a good one";
  if (opts.doctrine == Doctrine::DTE) f4.required = false;

  v.clauses = {f1, f2, f3a, f3b, f4};
  v.compliant = true;
  for (const auto& c : v.clauses)
    if (c.required && !c.pass) v.compliant = false;
  if (initiated.empty() && terminated.empty()) v.warnings.push_back("the plan changes nothing relative to the baseline");
  v.total_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  return v;
}

StripsDocument parse_strips(std::string_view text) {
  auto top = read_sexprs(text);
  std::map<std::string, const Sexpr*> sections;
  for (const auto& s : top) {
    if (!s.is_list() || s.items.empty() || !s.items[0].is_symbol()) s.fail("expected a section (NAME ...)");
    const std::string& name = s.items[0].text;
    if (name != "DOMAIN" && name != "PROBLEM" && name != "PLAN" && name != "GRAYBOX")
      s.items[0].fail("unknown section '" + name + "'");
    if (sections.count(name)) s.items[0].fail("duplicate section '" + name + "'");
    sections[name] = &s;
  }
  for (const char* required : {"DOMAIN", "PROBLEM", "PLAN"})
    if (!sections.count(required)) throw ParseError(std::string("missing section ") + required, 1, 1);

  StripsDocument doc;
  Reader r;
  std::map<std::string, std::size_t> by_name;
  const Sexpr& domain = *sections["DOMAIN"];
  for (std::size_t i = 1; i < domain.items.size(); ++i) {
    const Sexpr& a = domain.items[i];
    if (!a.is_list() || a.items.size() < 2 || !a.items[0].is_symbol("action")) a.fail("expected (action name ...)");
    StripsAction act;
    act.name = symbol(a.items[1], "an action name");
    for (std::size_t k = 2; k < a.items.size(); ++k) {
      const Sexpr& f = a.items[k];
      if (!f.is_list() || f.items.empty()) f.fail("expected (pre ...), (add ...) or (del ...)");
      if (f.items[0].is_symbol("pre")) {
        act.pre = r.atoms(f);
      } else if (f.items[0].is_symbol("add")) {
        act.add = r.atoms(f);
      } else if (f.items[0].is_symbol("del")) {
        act.del = r.atoms(f);
      } else {
        f.fail("expected (pre ...), (add ...) or (del ...)");
      }
    }
    for (const auto& x : act.add)
      if (act.del.count(x)) a.fail("action '" + act.name + "' both adds and deletes " + to_string(x));
    if (by_name.count(act.name)) a.items[1].fail("duplicate action '" + act.name + "'");
    by_name[act.name] = doc.domain.size();
    doc.domain.push_back(std::move(act));
  }

  auto lookup = [&](const Sexpr& s) -> const StripsAction& {
    auto it = by_name.find(symbol(s, "an action name"));
    if (it == by_name.end()) s.fail("unknown action '" + s.text + "'");
    return doc.domain[it->second];
  };

  const Sexpr& problem = *sections["PROBLEM"];
  if (const Sexpr* f = field(problem, "name")) doc.name = symbol(f->items.at(1), "a name");
  if (const Sexpr* f = field(problem, "init")) doc.plan.initial = r.atoms(*f);
  if (const Sexpr* f = field(problem, "goal"))
    for (std::size_t i = 1; i < f->items.size(); ++i) doc.plan.goal.push_back(r.literal(f->items[i]));
  if (const Sexpr* f = field(problem, "baseline"))
    for (std::size_t i = 1; i < f->items.size(); ++i) doc.options.baseline.push_back(lookup(f->items[i]));
  if (const Sexpr* f = field(problem, "forbidden"))
    for (std::size_t i = 1; i < f->items.size(); ++i) doc.forbidden.insert(symbol(f->items[i], "an action name"));
  if (const Sexpr* f = field(problem, "doctrine")) {
    const Sexpr& d = f->items.at(1);
    try {
      doc.options.doctrine = parse_doctrine(symbol(d, "dde or dte"));
    } catch (const ParseError& e) {
      d.fail(e.message());
    }
  }
  const Sexpr* g = field(problem, "gamma");
  if (!g || g->items.size() != 2) problem.fail("missing field 'gamma' in PROBLEM");
  doc.gamma = number(g->items[1]);
  std::vector<UtilityRule> rules;
  double fallback = 0;
  if (const Sexpr* u = field(problem, "utility")) {
    for (std::size_t i = 1; i < u->items.size(); ++i) {
      const Sexpr& row = u->items[i];
      if (!row.is_list() || row.items.size() != 2) row.fail("utility row must be (pattern value) or (default value)");
      if (row.items[0].is_symbol("default")) {
        fallback = number(row.items[1]);
      } else {
        rules.push_back({r.atom(row.items[0], true), number(row.items[1])});
      }
    }
  }
  doc.utility = UtilityFunction(std::move(rules), fallback);

  const Sexpr& plan = *sections["PLAN"];
  for (std::size_t i = 1; i < plan.items.size(); ++i) doc.plan.actions.push_back(lookup(plan.items[i]));

  if (auto it = sections.find("GRAYBOX"); it != sections.end()) {
    const Sexpr& gb = *it->second;
    for (std::size_t i = 1; i < gb.items.size(); ++i) {
      const Sexpr& e = gb.items[i];
      if (e.is_list() && e.items.size() == 4 && e.items[0].is_symbol("intends")) {
        GrayBoxIntention in;
        in.agent = symbol(e.items[1], "an agent");
        double t = number(e.items[2]);
        if (t < 0 || t > static_cast<double>(doc.plan.actions.size()))
          e.items[2].fail("intention time outside the plan");
        in.time = static_cast<std::int64_t>(t);
        std::tie(in.atom, in.positive) = r.literal(e.items[3]);
        doc.graybox.intentions.push_back(std::move(in));
      } else if (e.is_list() && e.items.size() == 2 && e.items[0].is_symbol("prohibits")) {
        doc.graybox.prohibitions.push_back(symbol(e.items[1], "an action name"));
      } else {
        e.fail("expected (intends agent time literal) or (prohibits action)");
      }
    }
  }
  return doc;
}

StripsDocument load_strips(const std::filesystem::path& path) { return parse_strips(read_file(path)); }

Verdict strips_dde_check(const StripsDocument& doc) {
  Verdict v = strips_dde_check(doc.plan, doc.graybox, doc.utility, doc.gamma, doc.forbidden, doc.options);
  v.scenario = doc.name;
  return v;
}

}  // namespace dde
