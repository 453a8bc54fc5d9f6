#include "jetham/jet.hpp"

#include "jetham/error.hpp"

namespace jetham::geom {

Expr total_derivative(const Chart& chart, int lambda, const Expr& e) {
  const Coord& x = chart.base(lambda);
  Expr out = sym::diff(e, x);
  for (const auto& c : e.coordinates()) {
    if (c.role == Role::parameter || c.role == Role::base) continue;
    if (!chart.contains(c)) throw DomainError("'" + c.name + "' is not a coordinate of the chart");
    if (Chart::jet_order(c) >= chart.order()) {
      throw DomainError("total derivative of '" + c.name + "' needs jets beyond chart order " +
                        std::to_string(chart.order()) + " (prolong the chart first)");
    }
    Expr partial = sym::diff(e, c);
    if (!partial.is_zero()) out += Expr(chart.shift(c, lambda)) * partial;
  }
  return out;
}

Expr total_derivative(const Chart& chart, const MultiIndex& alpha, const Expr& e) {
  Expr out = e;
  for (std::size_t l = 0; l < alpha.size(); ++l) {
    for (int t = 0; t < alpha[l]; ++t) out = total_derivative(chart, static_cast<int>(l + 1), out);
  }
  return out;
}

ContactForm contact_form(const Chart& chart, const Coord& c) {
  if (!Chart::is_field_coordinate(c) || !chart.contains(c)) {
    throw DomainError("'" + c.name + "' is not a field coordinate of the chart");
  }
  if (Chart::jet_order(c) >= chart.order()) {
    throw DomainError("contact form of '" + c.name + "' needs jets beyond chart order");
  }
  Form f = Form::differential(c);
  for (int l = 1; l <= chart.n(); ++l) {
    f -= Form::term(Expr(chart.shift(c, l)), {chart.base(l)});
  }
  return {c, f};
}

std::vector<ContactForm> contact_forms(const Chart& chart) {
  if (chart.order() < 1) throw DomainError("contact forms need a chart of order >= 1");
  std::vector<ContactForm> out;
  for (const auto& c : chart.coordinates()) {
    if (Chart::is_field_coordinate(c) && Chart::jet_order(c) < chart.order()) out.push_back(contact_form(chart, c));
  }
  return out;
}

Split horizontal_vertical_split(const Chart& chart, const Form& a) {
  if (a.is_zero()) return {Form(1), Form(1)};
  if (a.degree() != 1) throw DomainError("splitting applies to 1-forms");
  Split out{Form(1), Form(1)};
  for (const auto& [w, coef] : a.terms()) {
    const Coord& c = w.front();
    if (c.role == Role::base) {
      out.horizontal += Form::term(coef, {c});
      continue;
    }
    if (!Chart::is_field_coordinate(c)) throw DomainError("d" + c.name + " is not a chart differential");
    ContactForm theta = contact_form(chart, c);
    out.vertical += coef * theta.form;
    for (int l = 1; l <= chart.n(); ++l) {
      out.horizontal += Form::term(coef * Expr(chart.shift(c, l)), {chart.base(l)});
    }
  }
  return out;
}

sym::Bindings holonomic_bindings(const Chart& chart, const std::map<Coord, Expr>& section, int order) {
  sym::Bindings out;
  for (const auto& [field, value] : section) {
    for (const auto& c : value.coordinates()) {
      if (c.role != Role::base && c.role != Role::parameter) {
        throw DomainError("section component for '" + field.name + "' mentions non-base coordinate '" + c.name + "'");
      }
    }
    for (int k = 0; k <= order; ++k) {
      for (const auto& alpha : multi_indices(chart.n(), k)) {
        out[chart.jet(field, alpha)] = sym::diff(value, chart.base(), alpha);
      }
    }
  }
  return out;
}

}  // namespace jetham::geom
