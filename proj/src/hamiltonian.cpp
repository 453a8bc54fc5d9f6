#include "jetham/hamiltonian.hpp"

#include <algorithm>

#include "jetham/error.hpp"
#include "jetham/jet.hpp"

namespace jetham::ham {

using ext::Form;
using ext::LegKey;
using geom::Fibration;
using sym::Rational;
using sym::Role;

namespace {

using Matrix = std::vector<std::vector<Rational>>;

sym::MultiIndex unit(int n, int lambda) {
  sym::MultiIndex a(static_cast<std::size_t>(n), 0);
  a[static_cast<std::size_t>(lambda - 1)] = 1;
  return a;
}

// Gauss–Jordan inverse; nullopt when singular.
std::optional<Matrix> invert(Matrix a) {
  const std::size_t n = a.size();
  Matrix inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(inv[pivot], inv[col]);
    Rational s = a[col][col];
    for (std::size_t j = 0; j < n; ++j) {
      a[col][j] /= s;
      inv[col][j] /= s;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rational f = a[r][col];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[col][j];
        inv[r][j] -= f * inv[col][j];
      }
    }
  }
  return inv;
}

// Constant second derivatives of `e` in `vars`, or a DomainError naming `what`.
Matrix constant_hessian(const Expr& e, const std::vector<Coord>& vars, const std::string& what) {
  Matrix h(vars.size(), std::vector<Rational>(vars.size(), Rational(0)));
  for (std::size_t a = 0; a < vars.size(); ++a) {
    Expr da = sym::diff(e, vars[a]);
    for (std::size_t b = 0; b < vars.size(); ++b) {
      auto c = sym::diff(da, vars[b]).constant();
      if (!c) throw DomainError(what + " is not quadratic with constant coefficients in " + vars[b].name);
      h[a][b] = *c;
    }
  }
  return h;
}

// Velocities y^i_λ paired with momenta p^λ_i, in matching order.
void velocity_pairs(const Chart& chart, std::vector<Coord>& v, std::vector<Coord>& p) {
  for (int i = 1; i <= chart.m(); ++i) {
    for (int l = 1; l <= chart.n(); ++l) {
      v.push_back(chart.jet(chart.fiber(i), unit(chart.n(), l)));
      p.push_back(chart.momentum(l, i));
    }
  }
}

std::string term_witness(const ValuedForm& f, const Chart& chart) {
  for (const auto& [key, form] : f.pieces()) {
    const auto& [word, coef] = *form.terms().begin();
    Form single = Form::term(coef, word);
    ValuedForm one(key, single);
    return one.str(chart.base_labels(), chart.theta().name);
  }
  return {};
}

}  // namespace

LegendreChart::LegendreChart(const Chart& chart) : chart_(chart) {
  if (!chart.composite() || !chart.has_momenta()) {
    throw DomainError("a Legendre chart needs the coordinate tau and momenta");
  }
  if (chart.order() < 1) throw DomainError("a Legendre chart needs jets of order >= 1");
}

LegendreChart LegendreChart::from_spec(geom::ChartSpec spec) {
  spec.composite = true;
  spec.momenta = true;
  spec.order = std::max(spec.order, 1);
  return LegendreChart(Chart(std::move(spec)));
}

HamiltonianSpec::HamiltonianSpec(LegendreChart chart, Expr hamiltonian)
    : chart_(std::move(chart)), hamiltonian_(std::move(hamiltonian)) {
  for (const auto& c : hamiltonian_.coordinates()) {
    if (c.role == Role::parameter) {
      if (!chart_.chart().contains(c)) throw DomainError("undeclared parameter '" + c.name + "' in the Hamiltonian");
      continue;
    }
    if (!chart_.chart().contains(c)) throw DomainError("'" + c.name + "' is not a coordinate of the chart");
    if (Chart::is_field_coordinate(c) && Chart::jet_order(c) > 0) {
      throw DomainError("the Hamiltonian mentions the jet coordinate '" + c.name + "'");
    }
  }
}

Expr normalized_residual(const Expr& residual) {
  if (residual.is_zero()) return residual;
  Rational lead = residual.terms().begin()->second;
  return Expr(Rational(1) / lead) * residual;
}

std::set<Expr> EquationSystem::canonical_residuals() const {
  std::set<Expr> out;
  for (const auto& e : equations_) out.insert(normalized_residual(e.residual()));
  return out;
}

ValuedForm liouville_form(const LegendreChart& lc) {
  const Chart& chart = lc.chart();
  ValuedForm out;
  for (int l = 1; l <= chart.n(); ++l) {
    Form piece(chart.n() + 1);
    for (int i = 1; i <= chart.m(); ++i) {
      ext::Word w{chart.fiber(i)};
      w.insert(w.end(), chart.base().begin(), chart.base().end());
      piece += Form::term(Expr(chart.momentum(l, i)), w);
    }
    out += ValuedForm(LegKey{l, true}, piece);
  }
  return out;
}

ValuedForm polysymplectic_form(const LegendreChart& lc) {
  const Chart& chart = lc.chart();
  ValuedForm out;
  for (int l = 1; l <= chart.n(); ++l) {
    Form piece(chart.n() + 2);
    for (int i = 1; i <= chart.m(); ++i) {
      ext::Word w{chart.momentum(l, i), chart.fiber(i)};
      w.insert(w.end(), chart.base().begin(), chart.base().end());
      piece += Form::term(Expr(1), w);
    }
    out += ValuedForm(LegKey{l, true}, piece);
  }
  return out;
}

ValuedForm absorbed(const ValuedForm& two_leg, const LegendreChart& lc) {
  return ext::absorb_tx_leg(two_leg, lc.chart().base());
}

ValuedForm hamiltonian_form(const HamiltonianSpec& spec) {
  const Chart& chart = spec.chart();
  Form h = -(spec.hamiltonian() * ext::volume_form(chart.base()));
  for (int l = 1; l <= chart.n(); ++l) {
    Form omega_l = ext::volume_form_contracted(chart.base(), l);
    for (int i = 1; i <= chart.m(); ++i) {
      h += ext::wedge(Form::term(Expr(chart.momentum(l, i)), {chart.fiber(i)}), omega_l);
    }
  }
  return ValuedForm(LegKey{0, true}, h);
}

ValuedForm hamiltonian_differential(const HamiltonianSpec& spec, TauMode mode) {
  sym::CoordSet held;
  if (mode == TauMode::held_fixed) held.insert(spec.chart().theta());
  return ext_d(hamiltonian_form(spec), held);
}

ValuedForm hamiltonian_connection_contraction(const Connection& gamma, const ValuedForm& omega) {
  if (gamma.on() != Fibration::PiX) throw DomainError("a Hamiltonian connection lives on Pi->X");
  const Chart& chart = gamma.chart();
  ValuedForm out;
  for (const auto& [key, form] : omega.pieces()) {
    if (key.tx < 1 || key.tx > chart.n()) throw DomainError("contraction needs a TX leg on every piece");
    if (form.degree() == 0) throw DomainError("cannot contract a 0-form");
    out += ValuedForm(LegKey{0, key.vtheta}, ext::interior(gamma.horizontal_lift(chart.base(key.tx)), form));
  }
  return out;
}

ClosednessReport check_hamiltonian_connection(const Connection& gamma, TauMode mode) {
  LegendreChart lc(gamma.chart());
  sym::CoordSet held;
  if (mode == TauMode::held_fixed) held.insert(lc.chart().theta());
  ClosednessReport report;
  report.defect = ext_d(hamiltonian_connection_contraction(gamma, polysymplectic_form(lc)), held);
  report.closed = report.defect.is_zero();
  report.witness = term_witness(report.defect, lc.chart());
  return report;
}

bool is_hamiltonian_connection(const Connection& gamma, TauMode mode) {
  return check_hamiltonian_connection(gamma, mode).closed;
}

Connection solve_hamiltonian_connection(const HamiltonianSpec& spec) {
  const Chart& chart = spec.chart();
  const Expr& h = spec.hamiltonian();
  const Expr share(Rational(-1, chart.n()));
  std::map<geom::ComponentKey, Expr> comps;
  for (int l = 1; l <= chart.n(); ++l) {
    const Coord& x = chart.base(l);
    for (int i = 1; i <= chart.m(); ++i) {
      const Coord& y = chart.fiber(i);
      comps[{y, x}] = sym::diff(h, chart.momentum(l, i));
      comps[{chart.momentum(l, i), x}] = share * sym::diff(h, y);
    }
  }
  return Connection::make(chart, Fibration::PiX, comps);
}

Expr hamiltonian_lagrangian(const HamiltonianSpec& spec) {
  const Chart& chart = spec.chart();
  Expr out = -spec.hamiltonian();
  for (int l = 1; l <= chart.n(); ++l) {
    for (int i = 1; i <= chart.m(); ++i) {
      out += Expr(chart.momentum(l, i)) * Expr(chart.jet(chart.fiber(i), unit(chart.n(), l)));
    }
  }
  return out;
}

EquationSystem euler_lagrange(const Chart& chart, const Expr& lagrangian, const std::vector<Coord>& fields) {
  if (chart.order() < 2) {
    throw DomainError("euler-lagrange needs a chart of order >= 2 (prolong the chart first)");
  }
  for (const auto& c : lagrangian.coordinates()) {
    if (c.role == Role::parameter || c.role == Role::base) continue;
    if (!chart.contains(c)) throw DomainError("'" + c.name + "' is not a coordinate of the chart");
    if (Chart::jet_order(c) > 1) throw DomainError("the Lagrangian must be first order; it mentions '" + c.name + "'");
  }
  std::vector<Equation> eqs;
  for (const auto& u : fields) {
    if (!Chart::is_field_coordinate(u) || Chart::jet_order(u) != 0 || !chart.contains(u)) {
      throw DomainError("'" + u.name + "' is not a field of the chart");
    }
    Expr lhs = sym::diff(lagrangian, u);
    for (int l = 1; l <= chart.n(); ++l) {
      Expr partial = sym::diff(lagrangian, chart.jet(u, unit(chart.n(), l)));
      if (!partial.is_zero()) lhs -= geom::total_derivative(chart, l, partial);
    }
    eqs.push_back({"E(" + u.name + ")", lhs, Expr(0)});
  }
  return EquationSystem(chart, std::move(eqs));
}

EquationSystem hamilton_equations(const HamiltonianSpec& spec) {
  const Chart& chart = spec.chart();
  const Expr& h = spec.hamiltonian();
  std::vector<Equation> eqs;
  for (int i = 1; i <= chart.m(); ++i) {
    for (int l = 1; l <= chart.n(); ++l) {
      Coord v = chart.jet(chart.fiber(i), unit(chart.n(), l));
      eqs.push_back({"velocity " + v.name, Expr(v), sym::diff(h, chart.momentum(l, i))});
    }
  }
  for (int i = 1; i <= chart.m(); ++i) {
    Expr div;
    for (int l = 1; l <= chart.n(); ++l) div += Expr(chart.jet(chart.momentum(l, i), unit(chart.n(), l)));
    eqs.push_back({"momentum " + chart.fiber(i).name, div, -sym::diff(h, chart.fiber(i))});
  }
  return EquationSystem(chart, std::move(eqs));
}

EquationSystem restrict_by_section(const EquationSystem& sys, const SectionSpec& h,
                                   const std::optional<SectionSpec>& sigma) {
  const Chart& chart = sys.chart();
  if (!chart.composite()) throw DomainError("restriction needs a composite chart");
  sym::Bindings b = geom::theta_section_bindings(chart, h);
  if (sigma) {
    if (sigma->of != Fibration::YTheta || sigma->jet) throw DomainError("sigma must be a section of Y->Theta");
    sym::Bindings at_h{{chart.theta(), h(chart.theta())}};
    std::map<Coord, Expr> composed;
    for (const auto& y : chart.fibers()) composed[y] = sym::subst((*sigma)(y), at_h);
    sym::Bindings more = geom::holonomic_bindings(chart, composed, chart.order());
    b.insert(more.begin(), more.end());
  }
  std::vector<Equation> eqs;
  for (const auto& e : sys.equations()) eqs.push_back({e.label, sym::subst(e.lhs, b), sym::subst(e.rhs, b)});
  return EquationSystem(chart, std::move(eqs));
}

HamiltonianSpec substitute_section(const HamiltonianSpec& spec, const SectionSpec& h) {
  sym::Bindings b = geom::theta_section_bindings(spec.chart(), h);
  return HamiltonianSpec(spec.legendre(), sym::subst(spec.hamiltonian(), b));
}

HamiltonianSpec legendre_of_lagrangian(const LegendreChart& lc, const Expr& lagrangian) {
  const Chart& chart = lc.chart();
  std::vector<Coord> v, p;
  velocity_pairs(chart, v, p);
  const sym::CoordSet velocities(v.begin(), v.end());
  for (const auto& c : lagrangian.coordinates()) {
    if (c.role == Role::parameter || c.role == Role::base) continue;
    if (!chart.contains(c)) throw DomainError("'" + c.name + "' is not a coordinate of the chart");
    bool allowed = c.role == Role::y_fiber || c.role == Role::theta_fiber || velocities.count(c);
    if (!allowed) throw DomainError("the Lagrangian may depend on x, tau, y and y_x only; it mentions '" + c.name + "'");
  }
  if (lagrangian.has_functions()) throw DomainError("the Legendre transform needs an explicit Lagrangian");

  Matrix hess = constant_hessian(lagrangian, v, "the Lagrangian");
  auto inv = invert(hess);
  if (!inv) throw DomainError("the Lagrangian is degenerate: its velocity Hessian is singular");

  sym::Bindings at_rest;
  for (const auto& c : v) at_rest[c] = Expr(0);
  // p_a = Σ_b A_ab v_b + b_a, so v_a = Σ_b Ainv_ab (p_b − b_b).
  std::vector<Expr> shifted;
  for (std::size_t a = 0; a < v.size(); ++a) {
    shifted.push_back(Expr(p[a]) - sym::subst(sym::diff(lagrangian, v[a]), at_rest));
  }
  sym::Bindings solved;
  for (std::size_t a = 0; a < v.size(); ++a) {
    Expr va;
    for (std::size_t b = 0; b < v.size(); ++b) {
      if ((*inv)[a][b] != 0) va += Expr((*inv)[a][b]) * shifted[b];
    }
    solved[v[a]] = va;
  }
  Expr h = -sym::subst(lagrangian, solved);
  for (std::size_t a = 0; a < v.size(); ++a) h += Expr(p[a]) * solved[v[a]];
  return HamiltonianSpec(lc, h);
}

EquationSystem eliminate_momenta(const HamiltonianSpec& spec) {
  const Chart& chart = spec.chart();
  if (chart.order() < 2) throw DomainError("momentum elimination needs a chart of order >= 2 (prolong the chart first)");
  const Expr& h = spec.hamiltonian();
  if (h.has_functions()) throw DomainError("momentum elimination needs an explicit Hamiltonian");
  std::vector<Coord> v, p;
  velocity_pairs(chart, v, p);

  Matrix hess = constant_hessian(h, p, "the Hamiltonian");
  auto inv = invert(hess);
  if (!inv) throw DomainError("the velocity equations cannot be solved for the momenta: singular momentum Hessian");

  sym::Bindings at_rest;
  for (const auto& c : p) at_rest[c] = Expr(0);
  // v_a = Σ_b B_ab p_b + c_a, so p_a = Σ_b Binv_ab (v_b − c_b).
  std::vector<Expr> shifted;
  for (std::size_t a = 0; a < p.size(); ++a) {
    shifted.push_back(Expr(v[a]) - sym::subst(sym::diff(h, p[a]), at_rest));
  }
  sym::Bindings solved;
  std::vector<Expr> momentum_values(p.size());
  for (std::size_t a = 0; a < p.size(); ++a) {
    Expr pa;
    for (std::size_t b = 0; b < p.size(); ++b) {
      if ((*inv)[a][b] != 0) pa += Expr((*inv)[a][b]) * shifted[b];
    }
    momentum_values[a] = pa;
    solved[p[a]] = pa;
  }
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (int l = 1; l <= chart.n(); ++l) {
      solved[chart.jet(p[a], unit(chart.n(), l))] = geom::total_derivative(chart, l, momentum_values[a]);
    }
  }

  std::vector<Equation> eqs;
  const EquationSystem hamilton = hamilton_equations(spec);
  for (const auto& e : hamilton.equations()) {
    if (e.label.rfind("momentum ", 0) != 0) continue;
    eqs.push_back({e.label, sym::subst(e.lhs, solved), sym::subst(e.rhs, solved)});
  }
  return EquationSystem(chart, std::move(eqs));
}

}  // namespace jetham::ham
