#pragma once

#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <vector>

#include "jetham/chart.hpp"
#include "jetham/expr.hpp"
#include "jetham/form.hpp"
#include "jetham/parse.hpp"

namespace jetham::sym {
inline void PrintTo(const Expr& e, std::ostream* os) { *os << e.str(); }
}  // namespace jetham::sym

namespace jetham::ext {
inline void PrintTo(const Form& f, std::ostream* os) { *os << f.str(); }
inline void PrintTo(const ValuedForm& f, std::ostream* os) { *os << f.str(); }
}  // namespace jetham::ext

namespace jetham::testing {

using sym::Coord;
using sym::Expr;
using sym::Rational;

using Rng = std::mt19937;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Rational random_rational(Rng& rng) {
  int num = 0;
  while (num == 0) num = uniform(rng, -5, 5);
  return Rational(num, uniform(rng, 1, 3));
}

/// Sum of up to `terms` monomials of total degree <= `degree` in `vars`.
inline Expr random_poly(Rng& rng, const std::vector<Coord>& vars, int terms, int degree) {
  Expr out;
  const int count = uniform(rng, 1, terms);
  for (int t = 0; t < count; ++t) {
    Expr mono(random_rational(rng));
    const int d = uniform(rng, 0, degree);
    for (int k = 0; k < d && !vars.empty(); ++k) {
      mono *= Expr(vars[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(vars.size()) - 1))]);
    }
    out += mono;
  }
  return out;
}

/// Direct numeric evaluation of a coordinate polynomial (no function atoms),
/// reading nothing but the term list.
inline Rational evaluate(const Expr& e, const std::map<Coord, Rational>& at) {
  Rational total = 0;
  for (const auto& [mono, coef] : e.terms()) {
    Rational v = coef;
    for (const auto& f : mono) {
      const auto* c = std::get_if<Coord>(&f.atom);
      if (!c) throw std::logic_error("evaluate: function atom");
      for (int k = 0; k < f.power; ++k) v *= at.at(*c);
    }
    total += v;
  }
  return total;
}

inline std::map<Coord, Rational> random_point(Rng& rng, const std::vector<Coord>& vars) {
  std::map<Coord, Rational> out;
  for (const auto& c : vars) out[c] = Rational(uniform(rng, -7, 7), uniform(rng, 1, 4));
  return out;
}

inline Expr parse(const geom::Chart& chart, const std::string& text) { return sym::parse_expr(text, chart.resolver()); }

/// Random form of the given degree over `vars`, coefficients random
/// polynomials in `coef_vars`.
inline ext::Form random_form(Rng& rng, const std::vector<Coord>& vars, const std::vector<Coord>& coef_vars, int degree,
                             int terms = 3) {
  ext::Form out(degree);
  const int count = uniform(rng, 1, terms);
  for (int t = 0; t < count; ++t) {
    ext::Word w;
    for (int k = 0; k < degree; ++k) w.push_back(vars[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(vars.size()) - 1))]);
    out += ext::Form::term(random_poly(rng, coef_vars, 3, 2), w);
  }
  return out;
}

}  // namespace jetham::testing
