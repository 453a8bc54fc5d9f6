#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace jetham::sym {

/// Role of a chart coordinate. The enumerator order is the role rank used by
/// the canonical atom order.
enum class Role : std::uint8_t {
  base,
  theta_fiber,
  y_fiber,
  jet,
  theta_jet,
  momentum,
  momentum_jet,
  parameter,
};

std::string_view role_name(Role role);

/// Symmetric multi-index stored as occurrence counts per base direction.
using MultiIndex = std::vector<int>;

/// A chart coordinate (or parameter). Identity is (role, name, indices).
///
/// Index layout by role:
///   base          {lambda}
///   theta_fiber   {}
///   y_fiber       {i}
///   jet           {i, alpha_1..alpha_n}
///   theta_jet     {alpha_1..alpha_n}
///   momentum      {lambda, i}
///   momentum_jet  {lambda, i, alpha_1..alpha_n}
///   parameter     {}
struct Coord {
  Role role = Role::parameter;
  std::string name;
  std::vector<int> indices;

  friend auto operator<=>(const Coord&, const Coord&) = default;
  friend bool operator==(const Coord&, const Coord&) = default;
};

using CoordSet = std::set<Coord>;

inline Coord parameter(std::string name) { return Coord{Role::parameter, std::move(name), {}}; }

/// LaTeX rendering of an identifier: `y_11` -> `y_{11}`, `tau` -> `\tau`.
std::string tex_identifier(std::string_view name);

}  // namespace jetham::sym
