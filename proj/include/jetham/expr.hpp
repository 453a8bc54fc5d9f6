#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "jetham/coord.hpp"

namespace jetham::sym {

using Rational = boost::multiprecision::cpp_rational;

class Expr;
std::strong_ordering operator<=>(const Expr& a, const Expr& b);
bool operator==(const Expr& a, const Expr& b);

/// Application of a declared-but-unspecified function. Formal partial
/// derivatives are recorded as a multi-index over the argument slots, so
/// mixed partials commute by construction.
struct FunctionApp {
  std::string name;
  std::vector<Expr> args;
  std::vector<int> derivatives;

  friend std::strong_ordering operator<=>(const FunctionApp& a, const FunctionApp& b);
  friend bool operator==(const FunctionApp& a, const FunctionApp& b);
};

/// Coordinates sort before function applications.
using Atom = std::variant<Coord, FunctionApp>;

struct Factor {
  Atom atom;
  int power = 1;

  friend std::strong_ordering operator<=>(const Factor& a, const Factor& b);
  friend bool operator==(const Factor& a, const Factor& b);
};

/// Strictly sorted by atom, every power >= 1. The empty monomial is 1.
using Monomial = std::vector<Factor>;
using TermMap = std::map<Monomial, Rational>;

/// Canonical polynomial over atoms with exact rational coefficients.
///
/// The representation is fully expanded: a sorted map from monomial to
/// nonzero coefficient. Two expressions are mathematically equal under the
/// ring laws (plus commuting formal partials) iff their maps are equal.
/// Values are immutable and cheap to copy.
class Expr {
 public:
  Expr() = default;
  Expr(int value);  // NOLINT(google-explicit-constructor)
  Expr(Rational value);  // NOLINT(google-explicit-constructor)
  Expr(const Coord& c);  // NOLINT(google-explicit-constructor)

  static Expr atom(Atom a);
  static Expr function(std::string name, std::vector<Expr> args);
  static Expr from_terms(TermMap terms);

  const TermMap& terms() const;
  std::size_t size() const { return terms_ ? terms_->size() : 0; }
  bool is_zero() const { return size() == 0; }
  bool is_constant() const;
  /// Value when the expression is a rational constant.
  std::optional<Rational> constant() const;
  /// The coordinate when the expression is exactly one coordinate atom.
  std::optional<Coord> as_coord() const;

  /// Every coordinate mentioned, including inside function arguments.
  CoordSet coordinates() const;
  bool mentions(const Coord& c) const;
  bool mentions_any(const CoordSet& cs) const;
  bool has_functions() const;

  Expr operator-() const;
  Expr& operator+=(const Expr& other);
  Expr& operator-=(const Expr& other);
  Expr& operator*=(const Expr& other);
  friend Expr operator+(Expr a, const Expr& b) { return a += b; }
  friend Expr operator-(Expr a, const Expr& b) { return a -= b; }
  friend Expr operator*(Expr a, const Expr& b) { return a *= b; }

  /// Plain-text rendering, re-readable by the expression parser.
  std::string str() const;
  std::string tex() const;

 private:
  explicit Expr(std::shared_ptr<const TermMap> terms) : terms_(std::move(terms)) {}

  std::shared_ptr<const TermMap> terms_;
};

Expr pow(const Expr& base, unsigned exponent);

/// Exact partial derivative. Coordinates are independent symbols; function
/// applications differentiate by the chain rule over their arguments.
Expr diff(const Expr& e, const Coord& c);

/// Repeated partial derivative along a multi-index over `coords`.
Expr diff(const Expr& e, const std::vector<Coord>& coords, const MultiIndex& alpha);

using Bindings = std::map<Coord, Expr>;

/// Simultaneous substitution followed by canonicalization. Throws
/// DomainError when a bound coordinate appears in any replacement.
Expr subst(const Expr& e, const Bindings& bindings);

/// Total number of terms an expression may reach before LimitError.
/// Read once from JETHAM_MAX_TERMS, default 100000.
std::size_t max_terms();

std::string to_string(const Rational& q);

}  // namespace jetham::sym
