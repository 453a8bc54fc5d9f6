#pragma once

#include <map>
#include <vector>

#include "jetham/chart.hpp"
#include "jetham/expr.hpp"
#include "jetham/form.hpp"

namespace jetham::geom {

using ext::Form;
using sym::Expr;

/// Total derivative D_λ e = ∂_λ e + Σ u_{α+λ} ∂e/∂u_α over every field of
/// the chart. Throws DomainError if e mentions a jet of the chart's top
/// order (no automatic prolongation) or a coordinate outside the chart.
Expr total_derivative(const Chart& chart, int lambda, const Expr& e);

/// Iterated total derivative D_α e.
Expr total_derivative(const Chart& chart, const MultiIndex& alpha, const Expr& e);

struct ContactForm {
  Coord coordinate;  ///< the jet u_α this form belongs to
  Form form;         ///< du_α − u_{α+λ} dx^λ
};

/// Contact form of a single field coordinate of order < chart order.
ContactForm contact_form(const Chart& chart, const Coord& c);

/// Contact forms of every field coordinate with 0 <= |α| <= r-1, in
/// inventory order. Throws DomainError on an order-0 chart.
std::vector<ContactForm> contact_forms(const Chart& chart);

struct Split {
  Form horizontal;  ///< Σ a(D_λ) dx^λ
  Form vertical;    ///< Σ a(∂_u) ϑ_u
};

/// Fibered splitting of a 1-form on J_{r-1}: a = horizontal + vertical.
Split horizontal_vertical_split(const Chart& chart, const Form& a);

/// Holonomic jet of a section given as field -> Expr in base coordinates:
/// binds every jet u_α with |α| <= order to ∂^α s_u.
sym::Bindings holonomic_bindings(const Chart& chart, const std::map<Coord, Expr>& section, int order);

}  // namespace jetham::geom
