#include "dde/sexpr.hpp"

#include <cctype>
#include <charconv>

namespace dde {

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  bool at_end() {
    skip();
    return pos_ >= text_.size();
  }

  Sexpr read() {
    skip();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", line_, col_);
    Sexpr node;
    node.line = line_;
    node.column = col_;
    char c = text_[pos_];
    if (c == '(') {
      advance();
      node.kind = Sexpr::Kind::List;
      for (;;) {
        skip();
        if (pos_ >= text_.size()) throw ParseError("unbalanced '(': missing ')'", node.line, node.column);
        if (text_[pos_] == ')') {
          advance();
          return node;
        }
        node.items.push_back(read());
      }
    }
    if (c == ')') throw ParseError("unexpected ')'", line_, col_);
    if (c == '"') {
      advance();
      node.kind = Sexpr::Kind::String;
      while (pos_ < text_.size() && text_[pos_] != '"') {
        if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) advance();
        node.text += text_[pos_];
        advance();
      }
      if (pos_ >= text_.size()) throw ParseError("unterminated string", node.line, node.column);
      advance();
      return node;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) && text_[pos_] != '(' &&
           text_[pos_] != ')' && text_[pos_] != ';' && text_[pos_] != '"') {
      unsigned char u = static_cast<unsigned char>(text_[pos_]);
      if (u < 0x20) throw ParseError("invalid character in symbol", line_, col_);
      advance();
    }
    node.text = std::string(text_.substr(start, pos_ - start));
    node.kind = Sexpr::Kind::Symbol;
    if (looks_numeric(node.text)) {
      double v = 0;
      const char* b = node.text.data();
      const char* e = b + node.text.size();
      auto [ptr, ec] = std::from_chars(b, e, v);
      if (ec != std::errc() || ptr != e) throw ParseError("malformed number '" + node.text + "'", node.line, node.column);
      node.kind = Sexpr::Kind::Number;
      node.number = v;
    }
    return node;
  }

 private:
  static bool looks_numeric(const std::string& s) {
    std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
    if (i >= s.size()) return false;
    return std::isdigit(static_cast<unsigned char>(s[i])) ||
           (s[i] == '.' && i + 1 < s.size() && std::isdigit(static_cast<unsigned char>(s[i + 1])));
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Sexpr> read_sexprs(std::string_view text) {
  Reader r(text);
  std::vector<Sexpr> out;
  while (!r.at_end()) out.push_back(r.read());
  return out;
}

Sexpr read_sexpr(std::string_view text) {
  Reader r(text);
  if (r.at_end()) throw ParseError("empty input", 1, 1);
  Sexpr s = r.read();
  if (!r.at_end()) {
    Sexpr extra = r.read();
    throw ParseError("trailing input after expression", extra.line, extra.column);
  }
  return s;
}

std::string to_string(const Sexpr& s) {
  switch (s.kind) {
    case Sexpr::Kind::Symbol:
    case Sexpr::Kind::Number: return s.text;
    case Sexpr::Kind::String: return "\"" + s.text + "\"";
    case Sexpr::Kind::List: break;
  }
  std::string out = "(";
  for (std::size_t i = 0; i < s.items.size(); ++i) {
    if (i) out += ' ';
    out += to_string(s.items[i]);
  }
  return out + ")";
}

}  // namespace dde
