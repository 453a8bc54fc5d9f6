#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "jetham/chart.hpp"
#include "jetham/connection.hpp"
#include "jetham/expr.hpp"
#include "jetham/form.hpp"

namespace jetham::ham {

using ext::ValuedForm;
using geom::Chart;
using geom::Connection;
using geom::SectionSpec;
using sym::Coord;
using sym::Expr;

/// A composite chart carrying the momenta p^λ_i of the extended Legendre
/// bundle, with jets of every field up to at least order 1.
class LegendreChart {
 public:
  explicit LegendreChart(const Chart& chart);
  /// Builds the chart from `spec`, forcing τ and momenta on and the order
  /// to at least 1.
  static LegendreChart from_spec(geom::ChartSpec spec);

  const Chart& chart() const { return chart_; }
  LegendreChart prolong(int r) const { return LegendreChart(chart_.prolong(r)); }

 private:
  Chart chart_;
};

/// A Hamiltonian 𝓗 over (x, τ, y, p) and parameters; no jet coordinates.
class HamiltonianSpec {
 public:
  HamiltonianSpec(LegendreChart chart, Expr hamiltonian);

  const LegendreChart& legendre() const { return chart_; }
  const Chart& chart() const { return chart_.chart(); }
  const Expr& hamiltonian() const { return hamiltonian_; }

 private:
  LegendreChart chart_;
  Expr hamiltonian_;
};

struct Equation {
  std::string label;
  Expr lhs;
  Expr rhs;

  Expr residual() const { return lhs - rhs; }
};

/// Residual lhs − rhs scaled so that its leading canonical term has
/// coefficient 1 (0 stays 0). Equations that differ by a nonzero rational
/// factor share a normalized residual.
Expr normalized_residual(const Expr& residual);

class EquationSystem {
 public:
  EquationSystem() = default;
  EquationSystem(Chart chart, std::vector<Equation> equations)
      : chart_(std::move(chart)), equations_(std::move(equations)) {}

  const Chart& chart() const { return chart_; }
  const std::vector<Equation>& equations() const { return equations_; }
  std::set<Expr> canonical_residuals() const;

  /// Set equality of normalized residuals.
  friend bool operator==(const EquationSystem& a, const EquationSystem& b) {
    return a.canonical_residuals() == b.canonical_residuals();
  }

 private:
  Chart chart_;
  std::vector<Equation> equations_;
};

/// ϑ_Y = p^λ_i dy^i ∧ ω ⊗ ∂_λ ⊗ ∂_τ (two legs).
ValuedForm liouville_form(const LegendreChart& chart);

/// Ω_Y = dp^λ_i ∧ dy^i ∧ ω ⊗ ∂_λ ⊗ ∂_τ (two legs).
ValuedForm polysymplectic_form(const LegendreChart& chart);

/// The absorbed representation G ∧ ω_λ ⊗ ∂_τ of a two-leg form G ∧ ω ⊗ ∂_λ ⊗ ∂_τ.
ValuedForm absorbed(const ValuedForm& two_leg, const LegendreChart& chart);

/// H = p^λ_i dy^i ∧ ω_λ ⊗ ∂_τ − 𝓗 ω ⊗ ∂_τ.
ValuedForm hamiltonian_form(const HamiltonianSpec& spec);

/// How τ enters exterior derivatives of Hamiltonian forms.
///
/// With `held_fixed`, τ is a parameter of the Hamiltonian and dτ is
/// dropped; this is the differential under which every Hamiltonian form
/// admits a connection with γ_H⌋Ω_Y = dH. With `varying`, d is the full
/// exterior derivative on Π_Θ and a τ-dependent 𝓗 leaves the extra term
/// −∂_τ𝓗 dτ ∧ ω ⊗ ∂_τ in dH that no contraction with Ω_Y can produce.
enum class TauMode { held_fixed, varying };

/// dH under the chosen treatment of τ.
ValuedForm hamiltonian_differential(const HamiltonianSpec& spec, TauMode mode = TauMode::held_fixed);

/// γ⌋Ω: Σ_λ v_λ⌋Ω^λ ⊗ ∂_τ with v_λ = ∂_λ + γ^a_λ ∂_a, the inserted
/// horizontal lift matched to the TX-leg index. Needs γ on Π_Θ -> X and a
/// form whose pieces all carry a TX leg.
ValuedForm hamiltonian_connection_contraction(const Connection& gamma, const ValuedForm& omega);

struct ClosednessReport {
  bool closed = true;
  ValuedForm defect;    ///< d(γ⌋Ω_Y)
  std::string witness;  ///< a nonzero term of the defect, empty when closed
};

ClosednessReport check_hamiltonian_connection(const Connection& gamma, TauMode mode = TauMode::held_fixed);
bool is_hamiltonian_connection(const Connection& gamma, TauMode mode = TauMode::held_fixed);

/// γ_H with γ^i_λ = ∂𝓗/∂p^λ_i and the trace Σ_λ γ^λ_{iλ} = −∂_i𝓗 spread
/// evenly over the diagonal (off-diagonal momentum components and γ^τ_λ are
/// zero).
Connection solve_hamiltonian_connection(const HamiltonianSpec& spec);

/// Density of L_H = (p^λ_i y^i_λ − 𝓗) ω; the ∂_τ value is implied.
Expr hamiltonian_lagrangian(const HamiltonianSpec& spec);

/// ∂L/∂u − D_λ(∂L/∂u_λ) = 0 for every listed field u. L must be first order
/// and the chart of order >= 2.
EquationSystem euler_lagrange(const Chart& chart, const Expr& lagrangian, const std::vector<Coord>& fields);

/// y^i_λ = ∂𝓗/∂p^λ_i and Σ_λ p^λ_{i,λ} = −∂𝓗/∂y^i.
EquationSystem hamilton_equations(const HamiltonianSpec& spec);

/// Restrict by a section h of Θ -> X (τ ↦ h, τ_α ↦ ∂^α h) and optionally
/// by σ of Y -> Θ (y^i ↦ σ^i(x, h(x)) with its holonomic jets).
EquationSystem restrict_by_section(const EquationSystem& sys, const SectionSpec& h,
                                   const std::optional<SectionSpec>& sigma = std::nullopt);

/// The Hamiltonian 𝓗|_{τ=h}.
HamiltonianSpec substitute_section(const HamiltonianSpec& spec, const SectionSpec& h);

/// Legendre transform of a Lagrangian quadratic in the y^i_λ with an
/// invertible constant Hessian. Throws DomainError otherwise.
HamiltonianSpec legendre_of_lagrangian(const LegendreChart& chart, const Expr& lagrangian);

/// Solve the velocity equations for p (𝓗 quadratic in the momenta with an
/// invertible constant Hessian), then substitute p and D_μ p into the
/// divergence equations. The chart must have order >= 2.
EquationSystem eliminate_momenta(const HamiltonianSpec& spec);

}  // namespace jetham::ham
