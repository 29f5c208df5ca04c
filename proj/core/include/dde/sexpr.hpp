#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "dde/error.hpp"

namespace dde {

/// Positioned s-expression node produced by the reader.
struct Sexpr {
  enum class Kind { Symbol, Number, String, List };

  Kind kind = Kind::List;
  std::string text;  ///< Symbol name, string contents, or the number as written.
  double number = 0;
  std::vector<Sexpr> items;
  int line = 0;
  int column = 0;

  bool is_symbol() const { return kind == Kind::Symbol; }
  bool is_symbol(std::string_view s) const { return kind == Kind::Symbol && text == s; }
  bool is_list() const { return kind == Kind::List; }
  bool is_number() const { return kind == Kind::Number; }

  /// Throws ParseError located at this node.
  [[noreturn]] void fail(const std::string& message) const { throw ParseError(message, line, column); }
};

/// Reads every top-level expression. `;` starts a comment running to end of line.
std::vector<Sexpr> read_sexprs(std::string_view text);
/// Reads exactly one expression.
Sexpr read_sexpr(std::string_view text);

std::string to_string(const Sexpr& s);

}  // namespace dde
