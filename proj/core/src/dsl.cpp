#include "dde/dsl.hpp"

#include <functional>
#include <fstream>
#include <set>
#include <sstream>

namespace dde {

namespace {

const std::set<std::string, std::less<>> kReservedHeads = {
    "not", "and", "or", "implies", "iff", "forall", "exists", "P", "K", "B", "C", "S", "D", "I", "O"};

bool is_builtin_predicate(std::string_view s) {
  return s == "=" || s == ">" || s == ">=" || s == "<" || s == "<=";
}

std::optional<ModalOp> modal_head(std::string_view s) {
  if (s == "P") return ModalOp::Perceives;
  if (s == "K") return ModalOp::Knows;
  if (s == "B") return ModalOp::Believes;
  if (s == "C") return ModalOp::Common;
  if (s == "S") return ModalOp::Says;
  if (s == "D") return ModalOp::Desires;
  if (s == "I") return ModalOp::Intends;
  if (s == "O") return ModalOp::Ought;
  return std::nullopt;
}

struct Converter {
  const Signature& sig;
  const ParseOptions& opts;
  int wildcard_counter = 0;

  Term term(const Sexpr& s, const VariableScope& scope) {
    switch (s.kind) {
      case Sexpr::Kind::Number: return Term::number(s.number);
      case Sexpr::Kind::String: s.fail("unexpected string literal in term position");
      case Sexpr::Kind::Symbol: return symbol(s, scope);
      case Sexpr::Kind::List: break;
    }
    if (s.items.empty()) s.fail("empty application");
    const Sexpr& head = s.items[0];
    if (!head.is_symbol()) head.fail("function position must be a symbol");
    if (kReservedHeads.count(head.text) || is_builtin_predicate(head.text)) {
      head.fail("'" + head.text + "' cannot be used as a function symbol");
    }
    const FunctionDecl* decl = sig.function(head.text);
    if (!decl) head.fail("unknown symbol '" + head.text + "'");
    if (decl->args.size() != s.items.size() - 1) {
      s.fail("arity error: '" + head.text + "' takes " + std::to_string(decl->args.size()) + " arguments, got " +
             std::to_string(s.items.size() - 1));
    }
    std::vector<Term> args;
    for (std::size_t i = 1; i < s.items.size(); ++i) args.push_back(term(s.items[i], scope));
    return Term::apply(head.text, std::move(args), decl->result);
  }

  Term symbol(const Sexpr& s, const VariableScope& scope) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->name() == s.text) return *it;
    }
    if (opts.patterns && s.text.size() > 1 && s.text[0] == '?') return Term::variable(s.text, sort::kAny);
    if (opts.wildcards && s.text == "_") return Term::variable("_" + std::to_string(wildcard_counter++), sort::kAny);
    const FunctionDecl* decl = sig.function(s.text);
    if (!decl) s.fail("unknown symbol '" + s.text + "'");
    if (!decl->args.empty()) {
      s.fail("arity error: '" + s.text + "' takes " + std::to_string(decl->args.size()) + " arguments, got 0");
    }
    return Term::constant(s.text, decl->result);
  }

  std::vector<Term> binders(const Sexpr& list) {
    if (!list.is_list() || list.items.empty()) list.fail("expected binder list ((var Sort) ...)");
    std::vector<Term> vars;
    for (const auto& b : list.items) {
      if (!b.is_list() || b.items.size() != 2 || !b.items[0].is_symbol() || !b.items[1].is_symbol()) {
        b.fail("binder must have the form (var Sort)");
      }
      if (!sig.has_sort(b.items[1].text)) b.items[1].fail("unknown sort '" + b.items[1].text + "'");
      vars.push_back(Term::variable(b.items[0].text, b.items[1].text));
    }
    return vars;
  }

  Formula formula(const Sexpr& s, VariableScope& scope) {
    if (s.is_symbol()) {
      if (s.text == "true") return Formula::truth(true);
      if (s.text == "false") return Formula::truth(false);
      if (opts.patterns && s.text.size() > 1 && s.text[0] == '?') {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
          if (it->name() == s.text) return Formula::atom(*it);
        }
        return Formula::meta(s.text);
      }
      return Formula::atom(symbol(s, scope));
    }
    if (!s.is_list()) s.fail("expected a formula");
    if (s.items.empty()) s.fail("empty formula");
    const Sexpr& head = s.items[0];
    if (!head.is_symbol()) head.fail("formula head must be a symbol");
    const std::string& h = head.text;
    const std::size_t n = s.items.size() - 1;
    auto sub = [&](std::size_t i) { return formula(s.items[i], scope); };

    if (h == "not") {
      if (n != 1) s.fail("'not' takes exactly one argument");
      return Formula::negation(sub(1));
    }
    if (h == "and" || h == "or") {
      if (n < 2) s.fail("'" + h + "' takes at least two arguments");
      std::vector<Formula> cs;
      for (std::size_t i = 1; i <= n; ++i) cs.push_back(sub(i));
      return h == "and" ? Formula::conjunction(std::move(cs)) : Formula::disjunction(std::move(cs));
    }
    if (h == "implies" || h == "iff") {
      if (n != 2) s.fail("'" + h + "' takes exactly two arguments");
      Formula a = sub(1);
      Formula b = sub(2);
      return h == "implies" ? Formula::implication(a, b) : Formula::biconditional(a, b);
    }
    if (h == "forall" || h == "exists") {
      if (n != 2) s.fail("'" + h + "' takes a binder list and a body");
      auto vars = binders(s.items[1]);
      for (const auto& v : vars) scope.push_back(v);
      Formula body = sub(2);
      for (std::size_t i = 0; i < vars.size(); ++i) scope.pop_back();
      for (auto it = vars.rbegin(); it != vars.rend(); ++it) {
        body = h == "forall" ? Formula::forall(*it, body) : Formula::exists(*it, body);
      }
      return body;
    }
    if (auto op = modal_head(h)) {
      std::size_t terms = 2;
      std::size_t formulas = 1;
      if (*op == ModalOp::Common) terms = 1;
      if (*op == ModalOp::Ought) formulas = 2;
      if (*op == ModalOp::Says && n == 4) terms = 3;
      if (n != terms + formulas) {
        s.fail("arity error: '" + h + "' takes " + std::to_string(terms + formulas) + " arguments, got " +
               std::to_string(n));
      }
      std::vector<Term> ts;
      for (std::size_t i = 1; i <= terms; ++i) ts.push_back(term(s.items[i], scope));
      std::vector<Formula> fs;
      for (std::size_t i = terms + 1; i <= n; ++i) fs.push_back(sub(i));
      return Formula::modal(*op, std::move(ts), std::move(fs));
    }
    if (is_builtin_predicate(h)) {
      if (n != 2) s.fail("arity error: '" + h + "' takes 2 arguments, got " + std::to_string(n));
      return Formula::atom(
          Term::apply(h, {term(s.items[1], scope), term(s.items[2], scope)}, sort::kBoolean));
    }
    return Formula::atom(term(s, scope));
  }
};

void check_sorts(const Formula& f, const Signature& sig, const Sexpr& where) {
  auto violations = sort_check(f, sig);
  if (violations.empty()) return;
  std::string msg = "sort violation: " + violations.front().message;
  if (violations.size() > 1) msg += " (and " + std::to_string(violations.size() - 1) + " more)";
  where.fail(msg);
}

}  // namespace

Formula formula_from_sexpr(const Sexpr& s, const Signature& sig, VariableScope& scope, const ParseOptions& opts) {
  Converter c{sig, opts};
  Formula f = c.formula(s, scope);
  if (opts.check_sorts) check_sorts(f, sig, s);
  return f;
}

Term term_from_sexpr(const Sexpr& s, const Signature& sig, const VariableScope& scope, const ParseOptions& opts) {
  Converter c{sig, opts};
  Term t = c.term(s, scope);
  if (opts.check_sorts) {
    auto v = sort_check(t, sig);
    if (!v.empty()) s.fail("sort violation: " + v.front().message);
  }
  return t;
}

Formula parse_formula(std::string_view text, const Signature& sig, const ParseOptions& opts) {
  Sexpr s = read_sexpr(text);
  VariableScope scope;
  return formula_from_sexpr(s, sig, scope, opts);
}

Term parse_term(std::string_view text, const Signature& sig, const ParseOptions& opts) {
  Sexpr s = read_sexpr(text);
  return term_from_sexpr(s, sig, {}, opts);
}

void read_signature(const Sexpr& section, Signature& sig) {
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const Sexpr& d = section.items[i];
    if (!d.is_list() || d.items.empty() || !d.items[0].is_symbol()) d.fail("malformed declaration");
    const std::string& kind = d.items[0].text;
    auto name_at = [&](std::size_t k) -> const std::string& {
      if (k >= d.items.size() || !d.items[k].is_symbol()) d.fail("expected a symbol in '" + kind + "' declaration");
      return d.items[k].text;
    };
    try {
      if (kind == "sort") {
        if (d.items.size() == 2) {
          sig.declare_sort(name_at(1));
        } else if (d.items.size() == 3) {
          sig.declare_sort(name_at(1), name_at(2));
        } else {
          d.fail("(sort Name [Parent])");
        }
      } else if (kind == "fn") {
        if (d.items.size() != 4 || !d.items[2].is_list()) d.fail("(fn name (ArgSort ...) ResultSort)");
        FunctionDecl decl{name_at(1), {}, name_at(3)};
        for (const auto& a : d.items[2].items) {
          if (!a.is_symbol()) a.fail("argument sort must be a symbol");
          decl.args.push_back(a.text);
        }
        if (kReservedHeads.count(decl.name) || is_builtin_predicate(decl.name)) d.fail("reserved symbol '" + decl.name + "'");
        sig.declare_function(std::move(decl));
      } else if (kind == "const") {
        if (d.items.size() < 3) d.fail("(const name... Sort)");
        const std::string& s = name_at(d.items.size() - 1);
        for (std::size_t k = 1; k + 1 < d.items.size(); ++k) sig.declare_function({name_at(k), {}, s});
      } else {
        d.items[0].fail("unknown declaration '" + kind + "'");
      }
    } catch (const SortError& e) {
      d.fail(e.what());
    }
  }
}

std::string_view to_string(Doctrine d) { return d == Doctrine::DDE ? "dde" : "dte"; }
std::string_view to_string(MeansMode m) { return m == MeansMode::Prose ? "prose" : "literal"; }
std::string_view to_string(F1Mode m) { return m == F1Mode::Standard ? "standard" : "literal"; }
std::string_view to_string(F2SumMode m) { return m == F2SumMode::Onset ? "onset" : "literal"; }

namespace {
std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}
}  // namespace

Doctrine parse_doctrine(std::string_view s) {
  auto l = lower(s);
  if (l == "dde") return Doctrine::DDE;
  if (l == "dte") return Doctrine::DTE;
  throw ParseError("unknown doctrine '" + std::string(s) + "' (expected dde or dte)");
}

MeansMode parse_means_mode(std::string_view s) {
  auto l = lower(s);
  if (l == "prose") return MeansMode::Prose;
  if (l == "literal") return MeansMode::Literal;
  throw ParseError("unknown means mode '" + std::string(s) + "' (expected prose or literal)");
}

F1Mode parse_f1_mode(std::string_view s) {
  auto l = lower(s);
  if (l == "standard") return F1Mode::Standard;
  if (l == "literal") return F1Mode::Literal;
  throw ParseError("unknown f1 mode '" + std::string(s) + "' (expected standard or literal)");
}

F2SumMode parse_f2_sum_mode(std::string_view s) {
  auto l = lower(s);
  if (l == "onset") return F2SumMode::Onset;
  if (l == "literal") return F2SumMode::Literal;
  throw ParseError("unknown f2 summation mode '" + std::string(s) + "' (expected onset or literal)");
}

// ---------------------------------------------------------------------------
// Scenario documents

std::vector<Formula> ScenarioDocument::background() const {
  std::vector<Formula> out;
  out.reserve(axioms.size());
  for (const auto& a : axioms) out.push_back(a.formula);
  return out;
}

Term ScenarioDocument::action_event() const {
  return Term::apply("action", {agent, action_type}, sort::kAction);
}

Formula ScenarioDocument::action_happens() const {
  return happens_atom(action_event(), Term::number(static_cast<double>(time)));
}

void validate(const ScenarioDocument& doc) {
  for (const auto& a : doc.axioms) {
    auto v = sort_check(a.formula, doc.signature);
    if (!v.empty()) throw ParseError("axiom '" + a.name + "': sort violation: " + v.front().message, a.line, 1);
  }
  if (doc.situation.valid()) {
    auto v = sort_check(doc.situation, doc.signature);
    if (!v.empty()) throw ParseError("situation: sort violation: " + v.front().message);
  }
  if (!doc.agent.valid() || !doc.signature.is_subsort(doc.agent.sort(), sort::kAgent)) {
    throw ParseError("ACTION: agent must be a term of sort Agent");
  }
  if (!doc.action_type.valid() || !doc.signature.is_subsort(doc.action_type.sort(), sort::kActionType)) {
    throw ParseError("ACTION: type must be a term of sort ActionType");
  }
  if (doc.time < 0) throw ParseError("ACTION: time must be a non-negative moment");
  if (doc.horizon <= doc.time) {
    throw ParseError("PARAMS: horizon " + std::to_string(doc.horizon) + " must exceed the action time " +
                     std::to_string(doc.time));
  }
  if (!(doc.gamma > 0)) throw ParseError("PARAMS: gamma must be a positive real");
}

namespace {

const Sexpr* find_field(const Sexpr& section, std::string_view key) {
  for (std::size_t i = 1; i < section.items.size(); ++i) {
    const Sexpr& f = section.items[i];
    if (f.is_list() && f.items.size() >= 2 && f.items[0].is_symbol(key)) return &f;
  }
  return nullptr;
}

const Sexpr& require_field(const Sexpr& section, std::string_view key) {
  const Sexpr* f = find_field(section, key);
  if (!f) section.fail("missing field '" + std::string(key) + "' in " + section.items[0].text);
  if (f->items.size() != 2) f->fail("field '" + std::string(key) + "' takes one value");
  return f->items[1];
}

std::int64_t as_integer(const Sexpr& s) {
  if (!s.is_number() || s.number != static_cast<double>(static_cast<std::int64_t>(s.number))) {
    s.fail("expected an integer");
  }
  return static_cast<std::int64_t>(s.number);
}

double as_real(const Sexpr& s) {
  if (!s.is_number()) s.fail("expected a number");
  return s.number;
}

const std::string& as_symbol(const Sexpr& s) {
  if (!s.is_symbol()) s.fail("expected a symbol");
  return s.text;
}

template <typename F>
auto positioned(const Sexpr& where, F&& f) {
  try {
    return f();
  } catch (const ParseError& e) {
    if (e.line() > 0) throw;
    where.fail(e.message());
  }
}

}  // namespace

ScenarioDocument parse_scenario(std::string_view text) {
  auto top = read_sexprs(text);
  std::map<std::string, const Sexpr*> sections;
  for (const auto& s : top) {
    if (!s.is_list() || s.items.empty() || !s.items[0].is_symbol()) s.fail("expected a section (NAME ...)");
    const std::string& name = s.items[0].text;
    static const std::set<std::string> known = {"SCENARIO", "SIGNATURE", "AXIOMS", "SITUATION",
                                                "ACTION",   "UTILITY",   "PARAMS"};
    if (!known.count(name)) s.items[0].fail("unknown section '" + name + "'");
    if (sections.count(name)) s.items[0].fail("duplicate section '" + name + "'");
    sections[name] = &s;
  }
  for (const char* required : {"SIGNATURE", "AXIOMS", "SITUATION", "ACTION", "UTILITY", "PARAMS"}) {
    if (!sections.count(required)) throw ParseError(std::string("missing section ") + required, 1, 1);
  }

  ScenarioDocument doc;
  if (auto it = sections.find("SCENARIO"); it != sections.end()) {
    const Sexpr& s = *it->second;
    if (s.items.size() != 2) s.fail("(SCENARIO name)");
    doc.name = s.items[1].text;
  }

  read_signature(*sections["SIGNATURE"], doc.signature);
  const Signature& sig = doc.signature;

  const Sexpr& axioms = *sections["AXIOMS"];
  std::set<std::string> names;
  for (std::size_t i = 1; i < axioms.items.size(); ++i) {
    const Sexpr& a = axioms.items[i];
    if (!a.is_list() || a.items.size() != 2 || !a.items[0].is_symbol()) a.fail("axiom must be (name formula)");
    if (!names.insert(a.items[0].text).second) a.items[0].fail("duplicate axiom name '" + a.items[0].text + "'");
    VariableScope scope;
    doc.axioms.push_back({a.items[0].text, formula_from_sexpr(a.items[1], sig, scope), a.line});
  }

  const Sexpr& situation = *sections["SITUATION"];
  if (situation.items.size() != 2) situation.fail("(SITUATION formula)");
  {
    VariableScope scope;
    doc.situation = formula_from_sexpr(situation.items[1], sig, scope);
  }

  const Sexpr& action = *sections["ACTION"];
  doc.agent = term_from_sexpr(require_field(action, "agent"), sig, {});
  doc.action_type = term_from_sexpr(require_field(action, "type"), sig, {});
  doc.time = as_integer(require_field(action, "time"));
  if (const Sexpr* m = find_field(action, "moment")) {
    doc.moment = term_from_sexpr(m->items.at(1), sig, {});
    if (!sig.is_subsort(doc.moment.sort(), sort::kMoment)) m->fail("moment must have sort Moment");
  } else {
    doc.moment = Term::number(static_cast<double>(doc.time));
  }

  const Sexpr& utility = *sections["UTILITY"];
  std::vector<UtilityRule> rules;
  double fallback = 0;
  ParseOptions wild;
  wild.wildcards = true;
  wild.check_sorts = false;
  for (std::size_t i = 1; i < utility.items.size(); ++i) {
    const Sexpr& r = utility.items[i];
    if (!r.is_list() || r.items.size() != 2) r.fail("utility row must be (pattern value) or (default value)");
    if (r.items[0].is_symbol("default")) {
      fallback = as_real(r.items[1]);
      continue;
    }
    Term pattern = term_from_sexpr(r.items[0], sig, {}, wild);
    if (!sig.is_subsort(pattern.sort(), sort::kFluent)) r.items[0].fail("utility pattern must be a fluent");
    rules.push_back({pattern, as_real(r.items[1])});
  }
  doc.utility = UtilityFunction(std::move(rules), fallback);

  const Sexpr& params = *sections["PARAMS"];
  doc.horizon = as_integer(require_field(params, "horizon"));
  doc.gamma = as_real(require_field(params, "gamma"));
  if (const Sexpr* f = find_field(params, "doctrine")) {
    doc.doctrine = positioned(*f, [&] { return parse_doctrine(as_symbol(f->items[1])); });
  }
  if (const Sexpr* f = find_field(params, "means")) {
    doc.interpretation.means = positioned(*f, [&] { return parse_means_mode(as_symbol(f->items[1])); });
  }
  if (const Sexpr* f = find_field(params, "f1")) {
    doc.interpretation.f1 = positioned(*f, [&] { return parse_f1_mode(as_symbol(f->items[1])); });
  }
  if (const Sexpr* f = find_field(params, "f2-sum")) {
    doc.interpretation.f2_sum = positioned(*f, [&] { return parse_f2_sum_mode(as_symbol(f->items[1])); });
  }

  positioned(params, [&] {
    validate(doc);
    return 0;
  });
  return doc;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot read file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScenarioDocument load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

std::string print_scenario(const ScenarioDocument& doc) {
  std::ostringstream out;
  if (!doc.name.empty()) out << "(SCENARIO " << doc.name << ")\n";
  out << "(SIGNATURE\n";
  static const Signature builtin;
  std::set<std::string> emitted;
  std::function<void(const std::string&)> emit_sort = [&](const std::string& name) {
    auto parent = doc.signature.parent(name);
    auto base = builtin.sorts().find(name);
    if ((base != builtin.sorts().end() && base->second == parent) || !emitted.insert(name).second) return;
    if (parent) emit_sort(*parent);
    out << "  (sort " << name;
    if (parent) out << ' ' << *parent;
    out << ")\n";
  };
  for (const auto& entry : doc.signature.sorts()) emit_sort(entry.first);
  for (const auto& [name, decl] : doc.signature.functions()) {
    if (builtin.function(name)) continue;
    if (decl.args.empty()) {
      out << "  (const " << name << ' ' << decl.result << ")\n";
      continue;
    }
    out << "  (fn " << name << " (";
    for (std::size_t i = 0; i < decl.args.size(); ++i) out << (i ? " " : "") << decl.args[i];
    out << ") " << decl.result << ")\n";
  }
  out << ")\n(AXIOMS\n";
  for (const auto& a : doc.axioms) out << "  (" << a.name << ' ' << print_formula(a.formula) << ")\n";
  out << ")\n(SITUATION " << print_formula(doc.situation) << ")\n";
  out << "(ACTION (agent " << to_string(doc.agent) << ") (type " << to_string(doc.action_type) << ") (time "
      << doc.time << ") (moment " << to_string(doc.moment) << "))\n";
  out << "(UTILITY";
  for (const auto& r : doc.utility.rules()) {
    Term pattern = r.pattern;
    std::set<Term> wild;
    collect_variables(pattern, wild);
    for (const auto& v : wild) pattern = replace_term(pattern, v, Term::constant("_", sort::kAny));
    out << " (" << to_string(pattern) << ' ' << r.value << ')';
  }
  out << " (default " << doc.utility.default_value() << "))\n";
  out << "(PARAMS (horizon " << doc.horizon << ") (gamma " << doc.gamma << ") (doctrine " << to_string(doc.doctrine)
      << ") (means " << to_string(doc.interpretation.means) << ") (f1 " << to_string(doc.interpretation.f1)
      << ") (f2-sum " << to_string(doc.interpretation.f2_sum) << "))\n";
  return out.str();
}

}  // namespace dde
