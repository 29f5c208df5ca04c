#include "dde/printer.hpp"

namespace dde {

namespace {

void print(const Formula& f, std::string& out) {
  using K = Formula::Kind;
  auto list = [&](const char* head) {
    out += '(';
    out += head;
    for (const auto& c : f.children()) {
      out += ' ';
      print(c, out);
    }
    out += ')';
  };
  switch (f.kind()) {
    case K::True: out += "true"; return;
    case K::False: out += "false"; return;
    case K::Atom: out += to_string(f.term()); return;
    case K::Meta: out += f.meta_name(); return;
    case K::Not: list("not"); return;
    case K::And: list("and"); return;
    case K::Or: list("or"); return;
    case K::Implies: list("implies"); return;
    case K::Iff: list("iff"); return;
    case K::Forall:
    case K::Exists:
      out += f.is(K::Forall) ? "(forall ((" : "(exists ((";
      out += f.bound().name();
      if (!f.bound().sort().empty()) {
        out += ' ';
        out += f.bound().sort();
      }
      out += ")) ";
      print(f.child(0), out);
      out += ')';
      return;
    case K::Modal:
      out += '(';
      out += modal_symbol(f.op());
      for (const auto& t : f.modal_terms()) {
        out += ' ';
        out += to_string(t);
      }
      for (const auto& c : f.children()) {
        out += ' ';
        print(c, out);
      }
      out += ')';
      return;
  }
}

}  // namespace

std::string print_formula(const Formula& f) {
  if (!f.valid()) return "<null>";
  std::string out;
  print(f, out);
  return out;
}

}  // namespace dde
