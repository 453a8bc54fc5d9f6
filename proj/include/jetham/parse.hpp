#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <string_view>
#include <variant>

#include "jetham/error.hpp"
#include "jetham/expr.hpp"

namespace jetham::sym {

struct FunctionSignature {
  std::string name;
  std::size_t arity = 0;
};

/// Why a name failed to resolve; turned into a positioned ParseError.
struct Unresolved {
  ParseErrorKind kind = ParseErrorKind::unknown_coordinate;
  std::string hint;
};

using Resolution = std::variant<Coord, FunctionSignature, Unresolved>;

/// Maps an identifier (or a bracket reference such as `p[1,2]`) to a symbol.
using Resolver = std::function<Resolution(std::string_view name)>;

/// Parse and canonicalize an expression.
///
/// Grammar (polynomial with rational constants and formal functions):
///
///     expr    := term (('+' | '-') term)*
///     term    := unary (('*' | '/') unary)*
///     unary   := ('-' | '+') unary | power
///     power   := primary ('^' unary)?
///     primary := number | name | name '(' args ')'
///              | name '^' '(' ints ')' '(' args ')' | '(' expr ')'
///
/// Exponents must be non-negative integer constants and divisors nonzero
/// constants. Errors are ParseError with line 0 and a 1-based column.
Expr parse_expr(std::string_view text, const Resolver& resolve);

/// Alias of parse_expr; the result is canonical, so make_expr(e.str()) == e.
inline Expr make_expr(std::string_view text, const Resolver& resolve) { return parse_expr(text, resolve); }

}  // namespace jetham::sym
