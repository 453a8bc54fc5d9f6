#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "jetham/coord.hpp"
#include "jetham/parse.hpp"

namespace jetham::geom {

using sym::Coord;
using sym::MultiIndex;
using sym::Role;

/// Inputs from which a chart's coordinate inventory is generated.
struct ChartSpec {
  int n = 1;       ///< base dimension
  int m = 1;       ///< fiber dimension of Y -> Θ
  int order = 0;   ///< jet order, applied to every field
  bool composite = true;   ///< include the line-bundle coordinate τ
  bool momenta = false;    ///< include p^λ_i (extended Legendre bundle)
  std::vector<std::string> base_names;   ///< default: x (n = 1) or x1..xn
  std::vector<std::string> fiber_names;  ///< default: y (m = 1) or y1..ym
  std::string theta_name = "tau";
  std::string momentum_stem = "p";
  std::vector<std::string> parameters;
  std::vector<sym::FunctionSignature> functions;
};

/// All symmetric multi-indices of |α| = k over n directions (stars and
/// bars), in descending lexicographic order of the count vector.
std::vector<MultiIndex> multi_indices(int n, int k);

/// Coordinate inventory of Y -> Θ -> X with jets up to a fixed order and,
/// optionally, the momenta of the extended Legendre bundle.
///
/// Naming: a jet of field `u` along directions λ_1..λ_k is `u_` followed by
/// the base labels, e.g. `y_x`, `y_12`, `tau_1`; a momentum is the stem
/// followed by the λ label (when n > 1) and `_<fiber>` (when m > 1), e.g. `p`,
/// `p2`, `p1_y2`. Base labels are the base names, except for the default
/// x1..xn names whose labels are 1..n.
///
/// Charts are immutable and cheap to copy.
class Chart {
 public:
  explicit Chart(ChartSpec spec = {});

  /// The inputs the chart was built from, default names left unfilled.
  const ChartSpec& spec() const;
  int n() const;
  int m() const;
  int order() const;
  bool composite() const;
  bool has_momenta() const;

  const Coord& base(int lambda) const;
  const std::vector<Coord>& base() const;
  const Coord& theta() const;
  const Coord& fiber(int i) const;
  const std::vector<Coord>& fibers() const;
  const Coord& momentum(int lambda, int i) const;
  std::vector<Coord> momenta() const;
  /// Order-0 field coordinates: τ, y^i, p^λ_i (those present).
  std::vector<Coord> fields() const;
  const std::vector<Coord>& parameters() const;
  const std::vector<std::string>& base_labels() const;

  /// The complete inventory (base, fields, jets, parameters).
  const std::vector<Coord>& coordinates() const;
  bool contains(const Coord& c) const;
  std::optional<Coord> find(std::string_view name) const;

  /// True for fields and their jets.
  static bool is_field_coordinate(const Coord& c);
  static int jet_order(const Coord& c);
  /// Multi-index of a field coordinate, sized n (zeros for order 0).
  MultiIndex multi_index(const Coord& c) const;
  /// The order-0 field underlying a jet coordinate.
  Coord field_of(const Coord& c) const;

  /// Jet of `field` (an order-0 field coordinate) along α. Throws
  /// DomainError when |α| exceeds the chart order.
  Coord jet(const Coord& field, const MultiIndex& alpha) const;
  /// The jet with α + λ (λ 1-based).
  Coord shift(const Coord& c, int lambda) const;
  /// All jets of `field` of exact order k.
  std::vector<Coord> jets(const Coord& field, int k) const;

  /// Same chart with jets up to order r >= order(); names are unchanged.
  Chart prolong(int r) const;
  Chart with_parameters(const std::vector<std::string>& names) const;
  Chart with_functions(const std::vector<sym::FunctionSignature>& fns) const;

  /// Name lookup for the expression parser (also accepts p[λ,i]).
  sym::Resolution resolve(std::string_view name) const;
  sym::Resolver resolver() const;

  friend bool operator==(const Chart& a, const Chart& b);

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

}  // namespace jetham::geom
