#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "jetham/chart.hpp"
#include "jetham/expr.hpp"
#include "jetham/form.hpp"

namespace jetham::geom {

using sym::CoordSet;
using sym::Expr;

/// Fibrations of the composite bundle Y -> Θ -> X and of the extended
/// Legendre bundle Π_Θ that connections and sections may live on.
enum class Fibration {
  YX,      ///< Y -> X: fibers (τ, y), base x
  YTheta,  ///< Y -> Θ: fibers y, base (x, τ)
  ThetaX,  ///< Θ -> X: fiber τ, base x
  YhX,     ///< Y_h -> X, the restriction along a section h of Θ -> X
  PiX,     ///< Π_Θ -> X: fibers (τ, y, p), base x
  PiY,     ///< Π_Θ -> Y: fibers p, base (x, τ, y)
};

std::string_view fibration_name(Fibration f);
std::optional<Fibration> parse_fibration(std::string_view s);

std::vector<Coord> fiber_coordinates(const Chart& chart, Fibration f);
std::vector<Coord> base_coordinates(const Chart& chart, Fibration f);
/// fibers ∪ base: the coordinates component functions may depend on.
CoordSet total_space(const Chart& chart, Fibration f);

/// (fiber coordinate, base coordinate)
using ComponentKey = std::pair<Coord, Coord>;

/// Connection Γ = dx^μ ⊗ (∂_μ + Γ^a_μ ∂_a), stored as its component table.
/// The table always covers exactly fibers × bases of the fibration.
class Connection {
 public:
  /// Missing components are zero. Throws DomainError on keys outside
  /// fibers × bases or components depending on coordinates outside the
  /// fibration's total space.
  static Connection make(const Chart& chart, Fibration on, const std::map<ComponentKey, Expr>& components = {});

  const Chart& chart() const { return chart_; }
  Fibration on() const { return on_; }
  std::vector<Coord> fibers() const { return fiber_coordinates(chart_, on_); }
  std::vector<Coord> bases() const { return base_coordinates(chart_, on_); }
  const std::map<ComponentKey, Expr>& components() const { return components_; }
  Expr operator()(const Coord& fiber, const Coord& base) const;

  /// ∂_b + Γ^a_b ∂_a.
  ext::VectorField horizontal_lift(const Coord& base) const;

  friend bool operator==(const Connection& a, const Connection& b) {
    return a.on_ == b.on_ && a.components_ == b.components_;
  }

 private:
  Connection(Chart chart, Fibration on) : chart_(std::move(chart)), on_(on) {}

  Chart chart_;
  Fibration on_;
  std::map<ComponentKey, Expr> components_;
};

/// A section of a fibration (fiber -> Expr in base coordinates), or with
/// `jet` set, a section of J_1(of) -> (total space of `of`) assigning the
/// first-order jet coordinates.
struct SectionSpec {
  Fibration of = Fibration::ThetaX;
  bool jet = false;
  std::map<Coord, Expr> assignments;

  /// Validates keys and the coordinates the assignments may depend on.
  static SectionSpec make(const Chart& chart, Fibration of, std::map<Coord, Expr> assignments, bool jet = false);

  Expr operator()(const Coord& c) const;
  friend bool operator==(const SectionSpec&, const SectionSpec&) = default;
};

/// y^a_λ ↦ Γ^a_λ; only for fibrations over X (needs chart order >= 1).
SectionSpec connection_to_section(const Connection& gamma);
Connection section_to_connection(const Chart& chart, const SectionSpec& s);

/// γ = 𝔥_Θ ∘ Γ on Y -> X: γ^τ_λ = Γ^τ_λ, γ^i_λ = H^i_λ + H^i_τ Γ^τ_λ.
Connection composite_connection(const Connection& h_theta, const Connection& gamma);

/// 𝔥_h on Y_h -> X: (𝔥_h)^i_λ = (H^i_λ + H^i_τ ∂_λ h)|_{τ=h}.
Connection pullback_connection(const Connection& h_theta, const SectionSpec& h);

/// Restriction of a connection on Y -> X to Y_h: drop the τ components and
/// substitute τ ↦ h.
Connection restrict_connection(const Connection& gamma, const SectionSpec& h);

struct Mismatch {
  ComponentKey key;
  Expr left;
  Expr right;

  std::string describe() const;
};

/// First differing component of two connections on the same fibration.
std::optional<Mismatch> compare_connections(const Connection& a, const Connection& b);

/// First component where ∂_λ h^a differs from Γ^a_λ ∘ h, if any.
std::optional<Mismatch> integral_section_defect(const SectionSpec& h, const Connection& gamma);
bool is_integral_section(const SectionSpec& h, const Connection& gamma);

/// Covariant differential Δ = dx^λ ⊗ Δ^i_λ ∂̄_i, one horizontal 1-form per
/// fiber coordinate y^i.
struct CovariantDifferential {
  std::vector<Coord> fibers;
  std::map<ComponentKey, Expr> components;  ///< (y^i, x^λ) -> Δ^i_λ

  ext::Form form(const Coord& fiber, const std::vector<Coord>& base) const;
  friend bool operator==(const CovariantDifferential&, const CovariantDifferential&) = default;
};

/// Vertical covariant differential of a connection on Y -> Θ:
/// Δ^i_λ = y^i_λ − H^i_λ − H^i_τ τ_λ. Needs a composite chart of order >= 1.
CovariantDifferential vertical_covariant_differential(const Connection& h_theta, const Chart& chart);

/// Covariant differential of a connection on Y -> X or Y_h -> X over the
/// y fibers: Δ^i_λ = y^i_λ − Γ^i_λ.
CovariantDifferential covariant_differential(const Connection& gamma, const Chart& chart);

/// Substitute τ ↦ h and τ_α ↦ ∂^α h into every component.
CovariantDifferential restrict_differential(const CovariantDifferential& delta, const Chart& chart,
                                            const SectionSpec& h);

/// Bindings realizing a section h of Θ -> X on the jets of τ.
sym::Bindings theta_section_bindings(const Chart& chart, const SectionSpec& h);

}  // namespace jetham::geom
