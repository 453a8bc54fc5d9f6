#include "jetham/connection.hpp"

#include <algorithm>

#include "jetham/error.hpp"
#include "jetham/jet.hpp"

namespace jetham::geom {

std::string_view fibration_name(Fibration f) {
  switch (f) {
    case Fibration::YX: return "Y->X";
    case Fibration::YTheta: return "Y->Theta";
    case Fibration::ThetaX: return "Theta->X";
    case Fibration::YhX: return "Yh->X";
    case Fibration::PiX: return "Pi->X";
    case Fibration::PiY: return "Pi->Y";
  }
  return "?";
}

std::optional<Fibration> parse_fibration(std::string_view s) {
  for (auto f : {Fibration::YX, Fibration::YTheta, Fibration::ThetaX, Fibration::YhX, Fibration::PiX, Fibration::PiY}) {
    if (fibration_name(f) == s) return f;
  }
  return std::nullopt;
}

namespace {

void require_theta(const Chart& chart, Fibration f) {
  if (!chart.composite()) {
    throw DomainError(std::string(fibration_name(f)) + " needs a composite chart with a line-bundle coordinate");
  }
}

void require_momenta(const Chart& chart, Fibration f) {
  require_theta(chart, f);
  if (!chart.has_momenta()) throw DomainError(std::string(fibration_name(f)) + " needs a chart with momenta");
}

bool over_x(Fibration f) {
  return f == Fibration::YX || f == Fibration::ThetaX || f == Fibration::YhX || f == Fibration::PiX;
}

}  // namespace

std::vector<Coord> fiber_coordinates(const Chart& chart, Fibration f) {
  std::vector<Coord> out;
  switch (f) {
    case Fibration::YX:
      if (chart.composite()) out.push_back(chart.theta());
      out.insert(out.end(), chart.fibers().begin(), chart.fibers().end());
      break;
    case Fibration::YTheta:
      require_theta(chart, f);
      out = chart.fibers();
      break;
    case Fibration::ThetaX:
      require_theta(chart, f);
      out.push_back(chart.theta());
      break;
    case Fibration::YhX: out = chart.fibers(); break;
    case Fibration::PiX:
      require_momenta(chart, f);
      out.push_back(chart.theta());
      out.insert(out.end(), chart.fibers().begin(), chart.fibers().end());
      for (const auto& p : chart.momenta()) out.push_back(p);
      break;
    case Fibration::PiY:
      require_momenta(chart, f);
      out = chart.momenta();
      break;
  }
  return out;
}

std::vector<Coord> base_coordinates(const Chart& chart, Fibration f) {
  std::vector<Coord> out = chart.base();
  switch (f) {
    case Fibration::YTheta: out.push_back(chart.theta()); break;
    case Fibration::PiY:
      out.push_back(chart.theta());
      out.insert(out.end(), chart.fibers().begin(), chart.fibers().end());
      break;
    default: break;
  }
  return out;
}

CoordSet total_space(const Chart& chart, Fibration f) {
  CoordSet out;
  for (const auto& c : fiber_coordinates(chart, f)) out.insert(c);
  for (const auto& c : base_coordinates(chart, f)) out.insert(c);
  return out;
}

namespace {

void require_depends_on(const Expr& e, const CoordSet& allowed, const std::string& what) {
  for (const auto& c : e.coordinates()) {
    if (c.role == Role::parameter || allowed.count(c)) continue;
    throw DomainError(what + " depends on '" + c.name + "', which is outside its domain");
  }
}

}  // namespace

Connection Connection::make(const Chart& chart, Fibration on, const std::map<ComponentKey, Expr>& components) {
  Connection out(chart, on);
  auto fibers = fiber_coordinates(chart, on);
  auto bases = base_coordinates(chart, on);
  auto domain = total_space(chart, on);
  for (const auto& [key, value] : components) {
    bool known = std::find(fibers.begin(), fibers.end(), key.first) != fibers.end() &&
                 std::find(bases.begin(), bases.end(), key.second) != bases.end();
    if (!known) {
      throw DomainError("component (" + key.first.name + ", " + key.second.name + ") is not a fiber x base pair of " +
                        std::string(fibration_name(on)));
    }
    require_depends_on(value, domain, "component (" + key.first.name + ", " + key.second.name + ")");
  }
  for (const auto& a : fibers) {
    for (const auto& b : bases) {
      auto it = components.find({a, b});
      out.components_[{a, b}] = it == components.end() ? Expr() : it->second;
    }
  }
  return out;
}

Expr Connection::operator()(const Coord& fiber, const Coord& base) const {
  auto it = components_.find({fiber, base});
  if (it == components_.end()) {
    throw DomainError("no component (" + fiber.name + ", " + base.name + ") on " + std::string(fibration_name(on_)));
  }
  return it->second;
}

ext::VectorField Connection::horizontal_lift(const Coord& base) const {
  ext::VectorField v = ext::VectorField::basis(base);
  for (const auto& a : fibers()) v.set(a, (*this)(a, base));
  return v;
}

SectionSpec SectionSpec::make(const Chart& chart, Fibration of, std::map<Coord, Expr> assignments, bool jet) {
  auto fibers = fiber_coordinates(chart, of);
  CoordSet allowed;
  std::vector<Coord> keys;
  if (jet) {
    if (!over_x(of)) throw DomainError("jet sections are modelled only for fibrations over X");
    allowed = total_space(chart, of);
    for (const auto& a : fibers) {
      for (int l = 1; l <= chart.n(); ++l) keys.push_back(chart.shift(a, l));
    }
  } else {
    for (const auto& b : base_coordinates(chart, of)) allowed.insert(b);
    keys = fibers;
  }
  for (const auto& [k, v] : assignments) {
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) {
      throw DomainError("'" + k.name + "' is not assigned by a section of " + std::string(fibration_name(of)));
    }
    require_depends_on(v, allowed, "section component for '" + k.name + "'");
  }
  SectionSpec out;
  out.of = of;
  out.jet = jet;
  for (const auto& k : keys) {
    auto it = assignments.find(k);
    out.assignments[k] = it == assignments.end() ? Expr() : it->second;
  }
  return out;
}

Expr SectionSpec::operator()(const Coord& c) const {
  auto it = assignments.find(c);
  if (it == assignments.end()) throw DomainError("section does not assign '" + c.name + "'");
  return it->second;
}

SectionSpec connection_to_section(const Connection& gamma) {
  const Chart& chart = gamma.chart();
  if (!over_x(gamma.on())) {
    throw DomainError("connection on " + std::string(fibration_name(gamma.on())) + " has no jet-section form over X");
  }
  std::map<Coord, Expr> out;
  for (const auto& [key, value] : gamma.components()) {
    out[chart.shift(key.first, key.second.indices.at(0))] = value;
  }
  return SectionSpec::make(chart, gamma.on(), std::move(out), true);
}

Connection section_to_connection(const Chart& chart, const SectionSpec& s) {
  if (!s.jet) throw DomainError("only jet sections correspond to connections");
  std::map<ComponentKey, Expr> comps;
  for (const auto& [jet, value] : s.assignments) {
    MultiIndex alpha = chart.multi_index(jet);
    auto lambda = std::find(alpha.begin(), alpha.end(), 1) - alpha.begin();
    comps[{chart.field_of(jet), chart.base(static_cast<int>(lambda) + 1)}] = value;
  }
  return Connection::make(chart, s.of, comps);
}

Connection composite_connection(const Connection& h_theta, const Connection& gamma) {
  if (h_theta.on() != Fibration::YTheta || gamma.on() != Fibration::ThetaX) {
    throw DomainError("composite connection needs connections on Y->Theta and Theta->X");
  }
  const Chart& chart = h_theta.chart();
  if (!(chart.base() == gamma.chart().base()) || !(chart.theta() == gamma.chart().theta())) {
    throw DomainError("component tables of the two connections do not share base and line-bundle coordinates");
  }
  const Coord& tau = chart.theta();
  std::map<ComponentKey, Expr> comps;
  for (const auto& x : chart.base()) {
    Expr g = gamma(tau, x);
    comps[{tau, x}] = g;
    for (const auto& y : chart.fibers()) comps[{y, x}] = h_theta(y, x) + h_theta(y, tau) * g;
  }
  return Connection::make(chart, Fibration::YX, comps);
}

sym::Bindings theta_section_bindings(const Chart& chart, const SectionSpec& h) {
  if (h.of != Fibration::ThetaX || h.jet) throw DomainError("expected a section of Theta->X");
  return holonomic_bindings(chart, {{chart.theta(), h(chart.theta())}}, chart.order());
}

Connection pullback_connection(const Connection& h_theta, const SectionSpec& h) {
  if (h_theta.on() != Fibration::YTheta) throw DomainError("pull-back needs a connection on Y->Theta");
  const Chart& chart = h_theta.chart();
  if (h.of != Fibration::ThetaX || h.jet) throw DomainError("expected a section of Theta->X");
  const Coord& tau = chart.theta();
  Expr hv = h(tau);
  for (const auto& c : hv.coordinates()) {
    if (c.role != Role::base && c.role != Role::parameter) throw DomainError("section h mentions non-base coordinate '" + c.name + "'");
  }
  sym::Bindings at_h{{tau, hv}};
  std::map<ComponentKey, Expr> comps;
  for (const auto& x : chart.base()) {
    Expr dh = sym::diff(hv, x);
    for (const auto& y : chart.fibers()) {
      comps[{y, x}] = sym::subst(h_theta(y, x) + h_theta(y, tau) * dh, at_h);
    }
  }
  return Connection::make(chart, Fibration::YhX, comps);
}

Connection restrict_connection(const Connection& gamma, const SectionSpec& h) {
  if (gamma.on() != Fibration::YX) throw DomainError("restriction applies to connections on Y->X");
  if (h.of != Fibration::ThetaX || h.jet) throw DomainError("expected a section of Theta->X");
  const Chart& chart = gamma.chart();
  sym::Bindings at_h{{chart.theta(), h(chart.theta())}};
  std::map<ComponentKey, Expr> comps;
  for (const auto& x : chart.base()) {
    for (const auto& y : chart.fibers()) comps[{y, x}] = sym::subst(gamma(y, x), at_h);
  }
  return Connection::make(chart, Fibration::YhX, comps);
}

std::string Mismatch::describe() const {
  return "component (" + key.first.name + ", " + key.second.name + "): " + left.str() + " != " + right.str();
}

std::optional<Mismatch> compare_connections(const Connection& a, const Connection& b) {
  if (a.on() != b.on()) throw DomainError("connections live on different fibrations");
  for (const auto& [key, value] : a.components()) {
    Expr other = b(key.first, key.second);
    if (!(value == other)) return Mismatch{key, value, other};
  }
  return std::nullopt;
}

std::optional<Mismatch> integral_section_defect(const SectionSpec& h, const Connection& gamma) {
  if (h.of != gamma.on() || h.jet) throw DomainError("section and connection live on different fibrations");
  if (!over_x(h.of)) throw DomainError("integral sections are defined for fibrations over X");
  sym::Bindings at_h(h.assignments.begin(), h.assignments.end());
  for (const auto& a : gamma.fibers()) {
    for (const auto& x : gamma.bases()) {
      Expr lhs = sym::diff(h(a), x);
      Expr rhs = sym::subst(gamma(a, x), at_h);
      if (!(lhs == rhs)) return Mismatch{{a, x}, lhs, rhs};
    }
  }
  return std::nullopt;
}

bool is_integral_section(const SectionSpec& h, const Connection& gamma) {
  return !integral_section_defect(h, gamma).has_value();
}

ext::Form CovariantDifferential::form(const Coord& fiber, const std::vector<Coord>& base) const {
  ext::Form out(1);
  for (const auto& x : base) {
    auto it = components.find({fiber, x});
    if (it != components.end()) out += ext::Form::term(it->second, {x});
  }
  return out;
}

CovariantDifferential vertical_covariant_differential(const Connection& h_theta, const Chart& chart) {
  if (h_theta.on() != Fibration::YTheta) throw DomainError("vertical covariant differential needs a connection on Y->Theta");
  if (!chart.composite() || chart.order() < 1) {
    throw DomainError("vertical covariant differential needs the first jets of τ (composite chart of order >= 1)");
  }
  const Coord& tau = chart.theta();
  CovariantDifferential out;
  out.fibers = chart.fibers();
  for (int l = 1; l <= chart.n(); ++l) {
    const Coord& x = chart.base(l);
    Expr tau_l(chart.shift(tau, l));
    for (const auto& y : chart.fibers()) {
      out.components[{y, x}] = Expr(chart.shift(y, l)) - h_theta(y, x) - h_theta(y, tau) * tau_l;
    }
  }
  return out;
}

CovariantDifferential covariant_differential(const Connection& gamma, const Chart& chart) {
  if (gamma.on() != Fibration::YX && gamma.on() != Fibration::YhX) {
    throw DomainError("covariant differential over the y fibers needs a connection on Y->X or Yh->X");
  }
  if (chart.order() < 1) throw DomainError("covariant differential needs a chart of order >= 1");
  CovariantDifferential out;
  out.fibers = chart.fibers();
  for (int l = 1; l <= chart.n(); ++l) {
    const Coord& x = chart.base(l);
    for (const auto& y : chart.fibers()) out.components[{y, x}] = Expr(chart.shift(y, l)) - gamma(y, x);
  }
  return out;
}

CovariantDifferential restrict_differential(const CovariantDifferential& delta, const Chart& chart,
                                            const SectionSpec& h) {
  auto b = theta_section_bindings(chart, h);
  CovariantDifferential out = delta;
  for (auto& [key, value] : out.components) value = sym::subst(value, b);
  return out;
}

}  // namespace jetham::geom
