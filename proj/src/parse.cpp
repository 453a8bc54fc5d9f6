#include "jetham/parse.hpp"

#include <cctype>
#include <optional>
#include <vector>

namespace jetham::sym {

namespace {

constexpr int kMaxExponent = 10000;

enum class Tok { number, name, op, end };

struct Token {
  Tok kind = Tok::end;
  std::string text;
  std::size_t column = 0;  // 1-based
};

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

std::vector<Token> lex(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i < s.size() && s[i] == '.') {
        ++i;
        if (i >= s.size() || !std::isdigit(static_cast<unsigned char>(s[i]))) {
          throw ParseError(ParseErrorKind::lexical, 0, i + 1, "malformed number", "write decimals as 0.5");
        }
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      }
      out.push_back({Tok::number, std::string(s.substr(start, i - start)), start + 1});
      continue;
    }
    if (ident_start(c)) {
      while (i < s.size() && ident_char(s[i])) ++i;
      std::string name(s.substr(start, i - start));
      if (i < s.size() && s[i] == '[') {
        // bracket reference such as p[1,2]; whitespace is dropped
        name += '[';
        ++i;
        while (i < s.size() && s[i] != ']') {
          char b = s[i];
          if (std::isdigit(static_cast<unsigned char>(b)) || b == ',') {
            name += b;
          } else if (b != ' ') {
            throw ParseError(ParseErrorKind::lexical, 0, i + 1, "unexpected character in index list",
                             "indices are comma-separated integers, e.g. p[1,2]");
          }
          ++i;
        }
        if (i >= s.size()) {
          throw ParseError(ParseErrorKind::lexical, 0, start + 1, "unterminated index list", "close it with ']'");
        }
        name += ']';
        ++i;
      }
      out.push_back({Tok::name, std::move(name), start + 1});
      continue;
    }
    if (std::string_view("+-*/^(),").find(c) != std::string_view::npos) {
      out.push_back({Tok::op, std::string(1, c), start + 1});
      ++i;
      continue;
    }
    throw ParseError(ParseErrorKind::lexical, 0, start + 1,
                     std::string("unexpected character '") + (std::isprint(static_cast<unsigned char>(c)) ? std::string(1, c) : "?") + "'",
                     "expressions use + - * / ^ ( ) and identifiers");
  }
  out.push_back({Tok::end, "", s.size() + 1});
  return out;
}

// Decimal digits only: a leading 0 would otherwise select octal.
boost::multiprecision::cpp_int decimal(const std::string& digits) {
  auto first = digits.find_first_not_of('0');
  if (first == std::string::npos) return 0;
  return boost::multiprecision::cpp_int(digits.substr(first));
}

Rational parse_number(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(decimal(text));
  std::string digits = text.substr(0, dot) + text.substr(dot + 1);
  boost::multiprecision::cpp_int scale = 1;
  for (std::size_t k = dot + 1; k < text.size(); ++k) scale *= 10;
  return Rational(decimal(digits), scale);
}

class Parser {
 public:
  Parser(std::string_view text, const Resolver& resolve) : toks_(lex(text)), resolve_(resolve) {}

  Expr run() {
    Expr e = expr();
    if (peek().kind != Tok::end) fail(ParseErrorKind::syntax, peek(), "unexpected '" + peek().text + "'", "check operators and parentheses");
    return e;
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& take() { return toks_[pos_++]; }
  bool at_op(char c) const { return peek().kind == Tok::op && peek().text[0] == c; }

  [[noreturn]] static void fail(ParseErrorKind kind, const Token& at, std::string msg, std::string hint = {}) {
    throw ParseError(kind, 0, at.column, std::move(msg), std::move(hint));
  }

  void expect(char c) {
    if (!at_op(c)) {
      fail(ParseErrorKind::syntax, peek(),
           std::string("expected '") + c + "'" + (peek().kind == Tok::end ? " before end of expression" : " before '" + peek().text + "'"));
    }
    take();
  }

  Expr expr() {
    Expr e = term();
    while (at_op('+') || at_op('-')) {
      bool minus = take().text[0] == '-';
      Expr rhs = term();
      e = minus ? e - rhs : e + rhs;
    }
    return e;
  }

  Expr term() {
    Expr e = unary();
    while (at_op('*') || at_op('/')) {
      const Token& op = take();
      const Token& at = peek();
      Expr rhs = unary();
      if (op.text[0] == '*') {
        e *= rhs;
        continue;
      }
      auto k = rhs.constant();
      if (!k) fail(ParseErrorKind::malformed_arithmetic, at, "division by a non-constant expression", "only rational constants may divide");
      if (*k == 0) fail(ParseErrorKind::malformed_arithmetic, at, "division by zero");
      e *= Expr(Rational(1) / *k);
    }
    return e;
  }

  Expr unary() {
    if (at_op('-')) {
      take();
      return -unary();
    }
    if (at_op('+')) {
      take();
      return unary();
    }
    return power();
  }

  Expr power() {
    Expr base = primary();
    if (!at_op('^')) return base;
    take();
    const Token& at = peek();
    Expr ex = unary();
    auto k = ex.constant();
    if (!k || denominator(*k) != 1 || *k < 0) {
      fail(ParseErrorKind::malformed_arithmetic, at, "exponent must be a non-negative integer constant",
           "negative or symbolic powers are outside the polynomial language");
    }
    if (*k > kMaxExponent) fail(ParseErrorKind::malformed_arithmetic, at, "exponent too large");
    return pow(base, numerator(*k).convert_to<unsigned>());
  }

  std::vector<Expr> arguments() {
    expect('(');
    std::vector<Expr> args;
    if (at_op(')')) {
      take();
      return args;
    }
    args.push_back(expr());
    while (at_op(',')) {
      take();
      args.push_back(expr());
    }
    expect(')');
    return args;
  }

  std::vector<int> derivative_record() {
    expect('(');
    std::vector<int> out;
    while (true) {
      const Token& t = peek();
      if (t.kind != Tok::number || t.text.find('.') != std::string::npos || t.text.size() > 4) {
        fail(ParseErrorKind::syntax, t, "expected a derivative order", "write F^(0,1)(y, p)");
      }
      out.push_back(std::stoi(take().text));
      if (at_op(',')) {
        take();
        continue;
      }
      break;
    }
    expect(')');
    return out;
  }

  Expr primary() {
    const Token& t = peek();
    if (t.kind == Tok::number) {
      take();
      return Expr(parse_number(t.text));
    }
    if (at_op('(')) {
      take();
      Expr e = expr();
      expect(')');
      return e;
    }
    if (t.kind != Tok::name) {
      fail(ParseErrorKind::syntax, t, t.kind == Tok::end ? "unexpected end of expression" : "unexpected '" + t.text + "'",
           "expected a number, a name or '('");
    }
    take();
    Resolution r = resolve_(t.text);
    if (auto* u = std::get_if<Unresolved>(&r)) {
      std::string what = u->kind == ParseErrorKind::undeclared_parameter ? "undeclared parameter '" : "unknown coordinate '";
      fail(u->kind, t, what + t.text + "'", u->hint);
    }
    if (auto* c = std::get_if<Coord>(&r)) return Expr(*c);
    const auto& sig = std::get<FunctionSignature>(r);
    std::vector<int> record;
    if (at_op('^') && pos_ + 1 < toks_.size() && toks_[pos_ + 1].kind == Tok::op && toks_[pos_ + 1].text == "(") {
      take();
      const Token& rec_at = peek();
      record = derivative_record();
      if (record.size() != sig.arity) {
        fail(ParseErrorKind::arity_mismatch, rec_at, "derivative record has " + std::to_string(record.size()) +
             " entries but '" + sig.name + "' takes " + std::to_string(sig.arity) + " arguments");
      }
    }
    if (!at_op('(')) fail(ParseErrorKind::syntax, peek(), "function '" + sig.name + "' needs an argument list", "write " + sig.name + "(...)");
    auto args = arguments();
    if (args.size() != sig.arity) {
      fail(ParseErrorKind::arity_mismatch, t, "'" + sig.name + "' expects " + std::to_string(sig.arity) +
           " arguments, got " + std::to_string(args.size()));
    }
    if (record.empty()) record.assign(args.size(), 0);
    return Expr::atom(FunctionApp{sig.name, std::move(args), std::move(record)});
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  const Resolver& resolve_;
};

}  // namespace

Expr parse_expr(std::string_view text, const Resolver& resolve) {
  return Parser(text, resolve).run();
}

}  // namespace jetham::sym
