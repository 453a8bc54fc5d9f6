#include "jetham/run.hpp"

#include <algorithm>
#include <iterator>
#include <set>

#include "jetham/jet.hpp"

namespace jetham::cli {

namespace {

using geom::Chart;
using geom::Connection;
using geom::Fibration;
using ham::EquationSystem;

Rendered render(const Expr& e) { return {e.str(), e.tex()}; }

std::vector<EquationRow> rows(const EquationSystem& sys) {
  std::vector<EquationRow> out;
  for (const auto& e : sys.equations()) out.push_back({e.label, render(e.lhs), render(e.rhs)});
  return out;
}

TaskResult equations(const std::string& name, const EquationSystem& sys) {
  TaskResult r{name, "equations", rows(sys), {}, std::nullopt};
  return r;
}

// Components as "fiber:base = value", the notation of connection blocks.
std::vector<EntryRow> component_rows(const std::map<geom::ComponentKey, Expr>& comps, const std::string& symbol,
                                     const std::string& tex_symbol) {
  std::vector<EntryRow> out;
  for (const auto& [key, value] : comps) {
    Rendered name{symbol + "[" + key.first.name + ":" + key.second.name + "]",
                  tex_symbol + "^{" + sym::tex_identifier(key.first.name) + "}_{" + sym::tex_identifier(key.second.name) + "}"};
    out.push_back({name, render(value)});
  }
  return out;
}

/// First residual present in one system but not the other.
std::string system_difference(const EquationSystem& a, const EquationSystem& b) {
  auto ra = a.canonical_residuals();
  auto rb = b.canonical_residuals();
  std::vector<Expr> only_a;
  std::vector<Expr> only_b;
  std::set_difference(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(only_a));
  std::set_difference(rb.begin(), rb.end(), ra.begin(), ra.end(), std::back_inserter(only_b));
  if (!only_a.empty()) return "only on the left: " + only_a.front().str() + " = 0";
  if (!only_b.empty()) return "only on the right: " + only_b.front().str() + " = 0";
  return {};
}

CheckResult compare_systems(const EquationSystem& a, const EquationSystem& b) {
  std::string w = system_difference(a, b);
  return {w.empty(), w};
}

TaskResult check(const std::string& name, CheckResult c, std::vector<EntryRow> entries = {}) {
  return TaskResult{name, "check", {}, std::move(entries), std::move(c)};
}

CheckResult closedness(const Connection& gamma) {
  auto report = ham::check_hamiltonian_connection(gamma);
  return {report.closed, report.closed ? std::string() : "d(gamma _| Omega) contains " + report.witness};
}

TaskResult hamiltonian_connection_check(const std::string& name, const ModelFile& m) {
  auto spec = m.hamiltonian_spec();
  Connection gamma = ham::solve_hamiltonian_connection(spec);
  CheckResult c = closedness(gamma);
  if (c.holds) {
    auto contraction = ham::hamiltonian_connection_contraction(gamma, ham::polysymplectic_form(spec.legendre()));
    auto dh = ham::hamiltonian_differential(spec);
    if (!(contraction == dh)) c = {false, "gamma _| Omega - dH = " + (contraction - dh).str()};
  }
  return check(name, c, component_rows(gamma.components(), "gamma", "\\gamma"));
}

std::vector<Coord> all_fields(const Chart& c) {
  std::vector<Coord> f = c.fibers();
  for (const auto& p : c.momenta()) f.push_back(p);
  return f;
}

EquationSystem lagrangian_equations(const ModelFile& m) {
  if (m.lagrangian) return ham::euler_lagrange(m.chart, m.lagrangian->value, m.chart.fibers());
  return ham::euler_lagrange(m.chart, ham::hamiltonian_lagrangian(m.hamiltonian_spec()), all_fields(m.chart));
}

TaskResult legendre(const std::string& name, const ModelFile& m) {
  auto spec = ham::legendre_of_lagrangian(m.legendre(), m.lagrangian->value);
  std::vector<EntryRow> entries{{Rendered{"H", "\\mathcal{H}"}, render(spec.hamiltonian())}};
  CheckResult c = compare_systems(ham::eliminate_momenta(spec), ham::euler_lagrange(m.chart, m.lagrangian->value, m.chart.fibers()));
  return check(name, c, std::move(entries));
}

TaskResult prolong(const std::string& name, const ModelFile& m, int r) {
  Chart c = m.chart.prolong(r);
  TaskResult out{name, "entries", {}, {}, std::nullopt};
  for (const auto& f : c.fields()) {
    for (int k = 0; k <= r; ++k) {
      Rendered value;
      for (const auto& j : c.jets(f, k)) {
        if (!value.text.empty()) {
          value.text += ", ";
          value.tex += ", ";
        }
        value.text += j.name;
        value.tex += sym::tex_identifier(j.name);
      }
      Rendered label{f.name + " order " + std::to_string(k), sym::tex_identifier(f.name) + "^{(" + std::to_string(k) + ")}"};
      out.entries.push_back({label, value});
    }
  }
  out.entries.push_back({Rendered{"coordinates", "\\#\\text{coordinates}"},
                         Rendered{std::to_string(c.coordinates().size()), std::to_string(c.coordinates().size())}});
  return out;
}

TaskResult contact_forms(const std::string& name, const ModelFile& m) {
  TaskResult out{name, "entries", {}, {}, std::nullopt};
  for (const auto& cf : geom::contact_forms(m.chart)) {
    Rendered label{"theta[" + cf.coordinate.name + "]", "\\vartheta[" + sym::tex_identifier(cf.coordinate.name) + "]"};
    out.entries.push_back({label, Rendered{cf.form.str(), cf.form.tex()}});
  }
  return out;
}

TaskResult run_one(const ModelFile& m, const Task& t) {
  const std::string name = t.label();
  switch (t.kind) {
    case TaskKind::prolong: return prolong(name, m, std::stoi(t.args.at(0)));
    case TaskKind::hamilton: return equations(name, ham::hamilton_equations(m.hamiltonian_spec()));
    case TaskKind::euler_lagrange: return equations(name, lagrangian_equations(m));
    case TaskKind::check_closed: {
      if (t.args.empty()) return hamiltonian_connection_check(name, m);
      Connection gamma = m.connections.at(t.args[0]).make(m.chart);
      return check(name, closedness(gamma));
    }
    case TaskKind::restrict: {
      auto h = m.sections.at(t.args[0]).spec(m.chart);
      std::optional<geom::SectionSpec> sigma;
      if (t.args.size() == 2) sigma = m.sections.at(t.args[1]).spec(m.chart);
      return equations(name, ham::restrict_by_section(ham::hamilton_equations(m.hamiltonian_spec()), h, sigma));
    }
    case TaskKind::legendre: return legendre(name, m);
    case TaskKind::eliminate_momenta: return equations(name, ham::eliminate_momenta(m.hamiltonian_spec()));
    case TaskKind::contact_forms: return contact_forms(name, m);
    case TaskKind::composite_connection: {
      Connection g = geom::composite_connection(m.connections.at(t.args[0]).make(m.chart), m.connections.at(t.args[1]).make(m.chart));
      return TaskResult{name, "entries", {}, component_rows(g.components(), "gamma", "\\gamma"), std::nullopt};
    }
    case TaskKind::pullback_connection: {
      Connection g = geom::pullback_connection(m.connections.at(t.args[0]).make(m.chart), m.sections.at(t.args[1]).spec(m.chart));
      return TaskResult{name, "entries", {}, component_rows(g.components(), "gamma", "\\gamma"), std::nullopt};
    }
    case TaskKind::vertical_differential: {
      auto delta = geom::vertical_covariant_differential(m.connections.at(t.args[0]).make(m.chart), m.chart);
      return TaskResult{name, "entries", {}, component_rows(delta.components, "Delta", "\\Delta"), std::nullopt};
    }
  }
  throw DomainError("unhandled task");
}

template <class F>
TaskResult guarded(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const TaskError&) {
    throw;
  } catch (const Error& e) {
    throw TaskError(name, e.what());
  }
}

}  // namespace

OutputDocument run_tasks(const ModelFile& model) {
  OutputDocument doc;
  for (const auto& t : model.tasks) doc.tasks.push_back(guarded(t.label(), [&] { return run_one(model, t); }));
  return doc;
}

OutputDocument run_checks(const ModelFile& input) {
  // Euler-Lagrange comparisons need second-order jets.
  ModelFile model = input;
  model.chart = input.chart.prolong(std::max(2, input.chart.order()));
  OutputDocument doc;
  std::set<std::string> done;
  for (const auto& t : model.tasks) {
    if (t.kind != TaskKind::check_closed && t.kind != TaskKind::legendre) continue;
    doc.tasks.push_back(guarded(t.label(), [&] { return run_one(model, t); }));
    done.insert(t.label());
  }
  if (model.hamiltonian) {
    if (!done.count("check-closed")) {
      doc.tasks.push_back(guarded("check-closed", [&] { return hamiltonian_connection_check("check-closed", model); }));
    }
    const std::string equiv = "hamilton = euler-lagrange(L_H)";
    doc.tasks.push_back(guarded(equiv, [&] {
      auto spec = model.hamiltonian_spec();
      auto el = ham::euler_lagrange(model.chart, ham::hamiltonian_lagrangian(spec), all_fields(model.chart));
      return check(equiv, compare_systems(ham::hamilton_equations(spec), el));
    }));
    for (const auto& [name, s] : model.sections) {
      if (s.of != Fibration::ThetaX) continue;
      const std::string label = "restrict " + name + " = hamilton(H|" + name + ")";
      doc.tasks.push_back(guarded(label, [&] {
        auto spec = model.hamiltonian_spec();
        auto h = s.spec(model.chart);
        return check(label, compare_systems(ham::restrict_by_section(ham::hamilton_equations(spec), h),
                                            ham::hamilton_equations(ham::substitute_section(spec, h))));
      }));
    }
  }
  if (model.lagrangian && !done.count("legendre")) {
    doc.tasks.push_back(guarded("legendre", [&] { return legendre("legendre", model); }));
  }
  for (const auto& [hn, hc] : model.connections) {
    if (hc.on != Fibration::YTheta) continue;
    for (const auto& [gn, gc] : model.connections) {
      if (gc.on != Fibration::ThetaX) continue;
      for (const auto& [sn, s] : model.sections) {
        if (s.of != Fibration::ThetaX) continue;
        const std::string label = "reducible " + hn + " " + gn + " " + sn;
        doc.tasks.push_back(guarded(label, [&] {
          Connection h_theta = hc.make(model.chart);
          Connection gamma = gc.make(model.chart);
          auto h = s.spec(model.chart);
          auto mismatch = geom::compare_connections(geom::restrict_connection(geom::composite_connection(h_theta, gamma), h),
                                                    geom::pullback_connection(h_theta, h));
          auto defect = geom::integral_section_defect(h, gamma);
          bool agree = mismatch.has_value() == defect.has_value();
          std::string witness;
          if (!agree) {
            witness = mismatch ? "restriction differs from pull-back at " + mismatch->describe() + " although the section is integral"
                               : "restriction equals pull-back although the section is not integral: " + defect->describe();
          }
          std::vector<EntryRow> entries{
              {Rendered{"integral", "\\text{integral}"}, Rendered{defect ? "false" : "true", defect ? "\\text{false}" : "\\text{true}"}}};
          return check(label, CheckResult{agree, witness}, std::move(entries));
        }));
      }
    }
  }
  return doc;
}

}  // namespace jetham::cli
