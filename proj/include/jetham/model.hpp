#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetham/chart.hpp"
#include "jetham/connection.hpp"
#include "jetham/expr.hpp"
#include "jetham/hamiltonian.hpp"

namespace jetham::cli {

using sym::Coord;
using sym::Expr;

struct SourcePos {
  std::size_t line = 0;
  std::size_t column = 0;

  friend bool operator==(const SourcePos&, const SourcePos&) = default;
};

struct ExprNode {
  std::string text;
  SourcePos pos;
  Expr value;
};

struct SectionDecl {
  std::string name;
  SourcePos pos;
  geom::Fibration of = geom::Fibration::ThetaX;
  std::map<Coord, ExprNode> assignments;

  geom::SectionSpec spec(const geom::Chart& chart) const;
};

struct ConnectionDecl {
  std::string name;
  SourcePos pos;
  geom::Fibration on = geom::Fibration::YTheta;
  std::map<geom::ComponentKey, ExprNode> components;

  geom::Connection make(const geom::Chart& chart) const;
};

enum class TaskKind {
  prolong,
  hamilton,
  euler_lagrange,
  check_closed,
  restrict,
  legendre,
  eliminate_momenta,
  contact_forms,
  composite_connection,
  pullback_connection,
  vertical_differential,
};

std::string_view task_name(TaskKind k);
std::optional<TaskKind> parse_task_kind(std::string_view s);

struct Task {
  TaskKind kind = TaskKind::hamilton;
  std::vector<std::string> args;
  SourcePos pos;

  /// "kind arg1 arg2", as written.
  std::string label() const;
};

/// A parsed and checked model file.
///
///     # comment
///     bundle {
///       n = 2
///       m = 1
///       base = t, s        # optional, default x / x1..xn
///       fibers = phi       # optional, default y / y1..ym
///       theta = tau
///       momentum = p
///       order = 2          # jet order of the working chart, default 2
///     }
///     hamiltonian {
///       parameters = mu
///       functions = F/2
///       H = 1/2*(p1^2 - p2^2) + 1/2*mu^2*y^2
///     }
///     lagrangian { ... L = ... }
///     section h { tau = x1 }
///     section sigma { y = x1*tau }
///     connection G : Y->Theta { y:x1 = tau*y }
///     tasks {
///       hamilton
///       restrict h sigma
///     }
///
/// Blocks may come in any order; every expression is parsed in the chart of
/// the bundle block extended by momenta, parameters and functions.
struct ModelFile {
  geom::ChartSpec bundle;
  geom::Chart chart;
  std::optional<ExprNode> hamiltonian;
  std::optional<ExprNode> lagrangian;
  std::map<std::string, SectionDecl> sections;
  std::map<std::string, ConnectionDecl> connections;
  std::vector<Task> tasks;

  ham::LegendreChart legendre() const { return ham::LegendreChart(chart); }
  ham::HamiltonianSpec hamiltonian_spec() const;
};

/// Throws ParseError with a 1-based line/column and a fix hint.
ModelFile parse_model(std::string_view text);

}  // namespace jetham::cli
