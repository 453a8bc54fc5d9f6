#include "jetham/chart.hpp"

#include <cctype>
#include <numeric>

#include "jetham/error.hpp"

namespace jetham::geom {

std::vector<MultiIndex> multi_indices(int n, int k) {
  std::vector<MultiIndex> out;
  if (n <= 0 || k < 0) return out;
  MultiIndex cur(static_cast<std::size_t>(n), 0);
  // place the remaining budget over directions pos..n-1
  auto rec = [&](auto&& self, int pos, int left) -> void {
    if (pos == n - 1) {
      cur[static_cast<std::size_t>(pos)] = left;
      out.push_back(cur);
      return;
    }
    for (int v = left; v >= 0; --v) {
      cur[static_cast<std::size_t>(pos)] = v;
      self(self, pos + 1, left - v);
    }
  };
  rec(rec, 0, k);
  return out;
}

struct Chart::Impl {
  ChartSpec spec;
  ChartSpec input;  // as given, before default names are filled in
  std::vector<std::string> labels;
  std::vector<Coord> base;
  std::optional<Coord> theta;
  std::vector<Coord> fibers;
  std::vector<Coord> momenta;  // (λ-1)*m + (i-1)
  std::vector<Coord> params;
  std::vector<Coord> inventory;
  std::map<std::string, Coord, std::less<>> by_name;
  std::map<std::string, sym::FunctionSignature, std::less<>> functions;

  std::string stem(const Coord& field) const {
    switch (field.role) {
      case Role::theta_fiber: return spec.theta_name;
      case Role::y_fiber: return spec.fiber_names[static_cast<std::size_t>(field.indices[0] - 1)];
      case Role::momentum: return momenta[static_cast<std::size_t>((field.indices[0] - 1) * spec.m + field.indices[1] - 1)].name;
      default: throw DomainError("'" + field.name + "' is not a field coordinate");
    }
  }

  Coord make_jet(const Coord& field, const MultiIndex& alpha) const {
    std::string name = stem(field) + "_";
    for (std::size_t l = 0; l < alpha.size(); ++l) {
      for (int t = 0; t < alpha[l]; ++t) name += labels[l];
    }
    switch (field.role) {
      case Role::theta_fiber: return Coord{Role::theta_jet, name, alpha};
      case Role::y_fiber: {
        std::vector<int> idx{field.indices[0]};
        idx.insert(idx.end(), alpha.begin(), alpha.end());
        return Coord{Role::jet, name, idx};
      }
      default: {
        std::vector<int> idx{field.indices[0], field.indices[1]};
        idx.insert(idx.end(), alpha.begin(), alpha.end());
        return Coord{Role::momentum_jet, name, idx};
      }
    }
  }
};

namespace {

bool valid_identifier(const std::string& s) {
  if (s.empty() || !std::isalpha(static_cast<unsigned char>(s[0]))) return false;
  for (char c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

void require_identifier(const std::string& s, const char* what) {
  if (!valid_identifier(s)) {
    throw DomainError(std::string(what) + " name '" + s + "' must be letters and digits, starting with a letter");
  }
}

}  // namespace

Chart::Chart(ChartSpec spec) {
  auto impl = std::make_shared<Impl>();
  impl->input = spec;
  if (spec.n < 1) throw DomainError("base dimension must be at least 1");
  if (spec.m < 1) throw DomainError("fiber dimension must be at least 1");
  if (spec.order < 0) throw DomainError("jet order must be non-negative");
  const auto n = static_cast<std::size_t>(spec.n);
  const auto m = static_cast<std::size_t>(spec.m);

  bool default_base = spec.base_names.empty();
  if (default_base) {
    if (n == 1) {
      spec.base_names = {"x"};
    } else {
      for (std::size_t l = 1; l <= n; ++l) spec.base_names.push_back("x" + std::to_string(l));
    }
  }
  if (spec.base_names.size() != n) throw DomainError("expected " + std::to_string(n) + " base coordinate names");
  if (spec.fiber_names.empty()) {
    if (m == 1) {
      spec.fiber_names = {"y"};
    } else {
      for (std::size_t i = 1; i <= m; ++i) spec.fiber_names.push_back("y" + std::to_string(i));
    }
  }
  if (spec.fiber_names.size() != m) throw DomainError("expected " + std::to_string(m) + " fiber coordinate names");
  for (const auto& s : spec.base_names) require_identifier(s, "base coordinate");
  for (const auto& s : spec.fiber_names) require_identifier(s, "fiber coordinate");
  for (const auto& s : spec.parameters) require_identifier(s, "parameter");
  require_identifier(spec.theta_name, "line-bundle coordinate");
  require_identifier(spec.momentum_stem, "momentum stem");

  for (std::size_t l = 0; l < n; ++l) {
    impl->labels.push_back(default_base && n > 1 ? std::to_string(l + 1) : spec.base_names[l]);
    impl->base.push_back(Coord{Role::base, spec.base_names[l], {static_cast<int>(l + 1)}});
  }
  if (spec.composite) impl->theta = Coord{Role::theta_fiber, spec.theta_name, {}};
  for (std::size_t i = 0; i < m; ++i) {
    impl->fibers.push_back(Coord{Role::y_fiber, spec.fiber_names[i], {static_cast<int>(i + 1)}});
  }
  if (spec.momenta) {
    for (std::size_t l = 0; l < n; ++l) {
      for (std::size_t i = 0; i < m; ++i) {
        std::string name = spec.momentum_stem + (n > 1 ? impl->labels[l] : "") + (m > 1 ? "_" + spec.fiber_names[i] : "");
        impl->momenta.push_back(Coord{Role::momentum, name, {static_cast<int>(l + 1), static_cast<int>(i + 1)}});
      }
    }
  }
  for (const auto& p : spec.parameters) impl->params.push_back(sym::parameter(p));
  impl->spec = spec;

  auto& inv = impl->inventory;
  inv.insert(inv.end(), impl->base.begin(), impl->base.end());
  std::vector<Coord> fields;
  if (impl->theta) fields.push_back(*impl->theta);
  fields.insert(fields.end(), impl->fibers.begin(), impl->fibers.end());
  fields.insert(fields.end(), impl->momenta.begin(), impl->momenta.end());
  for (const auto& f : fields) {
    inv.push_back(f);
    for (int k = 1; k <= spec.order; ++k) {
      for (const auto& a : multi_indices(spec.n, k)) inv.push_back(impl->make_jet(f, a));
    }
  }
  inv.insert(inv.end(), impl->params.begin(), impl->params.end());

  for (const auto& c : inv) {
    if (!impl->by_name.emplace(c.name, c).second) throw DomainError("duplicate coordinate name '" + c.name + "'");
  }
  for (const auto& f : spec.functions) {
    require_identifier(f.name, "function");
    if (impl->by_name.count(f.name) || !impl->functions.emplace(f.name, f).second) {
      throw DomainError("function name '" + f.name + "' clashes with another symbol");
    }
  }
  impl_ = std::move(impl);
}

const ChartSpec& Chart::spec() const { return impl_->input; }
int Chart::n() const { return impl_->spec.n; }
int Chart::m() const { return impl_->spec.m; }
int Chart::order() const { return impl_->spec.order; }
bool Chart::composite() const { return impl_->theta.has_value(); }
bool Chart::has_momenta() const { return !impl_->momenta.empty(); }

const Coord& Chart::base(int lambda) const {
  if (lambda < 1 || lambda > n()) throw DomainError("base index " + std::to_string(lambda) + " out of range");
  return impl_->base[static_cast<std::size_t>(lambda - 1)];
}

const std::vector<Coord>& Chart::base() const { return impl_->base; }

const Coord& Chart::theta() const {
  if (!impl_->theta) throw DomainError("chart has no line-bundle coordinate");
  return *impl_->theta;
}

const Coord& Chart::fiber(int i) const {
  if (i < 1 || i > m()) throw DomainError("fiber index " + std::to_string(i) + " out of range");
  return impl_->fibers[static_cast<std::size_t>(i - 1)];
}

const std::vector<Coord>& Chart::fibers() const { return impl_->fibers; }

const Coord& Chart::momentum(int lambda, int i) const {
  if (!has_momenta()) throw DomainError("chart has no momentum coordinates");
  if (lambda < 1 || lambda > n() || i < 1 || i > m()) throw DomainError("momentum index out of range");
  return impl_->momenta[static_cast<std::size_t>((lambda - 1) * m() + i - 1)];
}

std::vector<Coord> Chart::momenta() const { return impl_->momenta; }

std::vector<Coord> Chart::fields() const {
  std::vector<Coord> out;
  if (impl_->theta) out.push_back(*impl_->theta);
  out.insert(out.end(), impl_->fibers.begin(), impl_->fibers.end());
  out.insert(out.end(), impl_->momenta.begin(), impl_->momenta.end());
  return out;
}

const std::vector<Coord>& Chart::parameters() const { return impl_->params; }
const std::vector<std::string>& Chart::base_labels() const { return impl_->labels; }
const std::vector<Coord>& Chart::coordinates() const { return impl_->inventory; }

bool Chart::contains(const Coord& c) const {
  auto it = impl_->by_name.find(c.name);
  return it != impl_->by_name.end() && it->second == c;
}

std::optional<Coord> Chart::find(std::string_view name) const {
  auto it = impl_->by_name.find(name);
  if (it == impl_->by_name.end()) return std::nullopt;
  return it->second;
}

bool Chart::is_field_coordinate(const Coord& c) {
  switch (c.role) {
    case Role::theta_fiber:
    case Role::y_fiber:
    case Role::momentum:
    case Role::jet:
    case Role::theta_jet:
    case Role::momentum_jet: return true;
    default: return false;
  }
}

namespace {

std::size_t alpha_offset(Role r) {
  switch (r) {
    case Role::theta_jet: return 0;
    case Role::jet: return 1;
    case Role::momentum_jet: return 2;
    default: return std::string::npos;
  }
}

}  // namespace

int Chart::jet_order(const Coord& c) {
  auto off = alpha_offset(c.role);
  if (off == std::string::npos) return 0;
  return std::accumulate(c.indices.begin() + static_cast<std::ptrdiff_t>(off), c.indices.end(), 0);
}

MultiIndex Chart::multi_index(const Coord& c) const {
  auto off = alpha_offset(c.role);
  if (off == std::string::npos) return MultiIndex(static_cast<std::size_t>(n()), 0);
  return MultiIndex(c.indices.begin() + static_cast<std::ptrdiff_t>(off), c.indices.end());
}

Coord Chart::field_of(const Coord& c) const {
  switch (c.role) {
    case Role::theta_jet: return theta();
    case Role::jet: return fiber(c.indices.at(0));
    case Role::momentum_jet: return momentum(c.indices.at(0), c.indices.at(1));
    case Role::theta_fiber:
    case Role::y_fiber:
    case Role::momentum: return c;
    default: throw DomainError("'" + c.name + "' is not a field coordinate");
  }
}

Coord Chart::jet(const Coord& field, const MultiIndex& alpha) const {
  if (jet_order(field) != 0 || !is_field_coordinate(field)) {
    throw DomainError("'" + field.name + "' is not an order-0 field coordinate");
  }
  if (alpha.size() != static_cast<std::size_t>(n())) throw DomainError("multi-index has wrong length");
  int k = 0;
  for (int a : alpha) {
    if (a < 0) throw DomainError("multi-index entries must be non-negative");
    k += a;
  }
  if (k == 0) return field;
  if (k > order()) {
    throw DomainError("jet of order " + std::to_string(k) + " of '" + field.name + "' exceeds chart order " +
                      std::to_string(order()) + " (prolong the chart first)");
  }
  return impl_->make_jet(field, alpha);
}

Coord Chart::shift(const Coord& c, int lambda) const {
  if (lambda < 1 || lambda > n()) throw DomainError("base index " + std::to_string(lambda) + " out of range");
  MultiIndex a = multi_index(c);
  ++a[static_cast<std::size_t>(lambda - 1)];
  return jet(field_of(c), a);
}

std::vector<Coord> Chart::jets(const Coord& field, int k) const {
  std::vector<Coord> out;
  for (const auto& a : multi_indices(n(), k)) out.push_back(jet(field, a));
  return out;
}

Chart Chart::prolong(int r) const {
  if (r < order()) {
    throw DomainError("cannot prolong to order " + std::to_string(r) + " below current order " + std::to_string(order()));
  }
  ChartSpec s = spec();
  s.order = r;
  return Chart(std::move(s));
}

Chart Chart::with_parameters(const std::vector<std::string>& names) const {
  ChartSpec s = spec();
  s.parameters.insert(s.parameters.end(), names.begin(), names.end());
  return Chart(std::move(s));
}

Chart Chart::with_functions(const std::vector<sym::FunctionSignature>& fns) const {
  ChartSpec s = spec();
  s.functions.insert(s.functions.end(), fns.begin(), fns.end());
  return Chart(std::move(s));
}

sym::Resolution Chart::resolve(std::string_view name) const {
  if (auto c = find(name)) return *c;
  if (auto it = impl_->functions.find(name); it != impl_->functions.end()) return it->second;
  const auto& stem = impl_->spec.momentum_stem;
  if (has_momenta() && name.size() > stem.size() + 2 && name.substr(0, stem.size()) == stem &&
      name[stem.size()] == '[' && name.back() == ']') {
    std::string inside(name.substr(stem.size() + 1, name.size() - stem.size() - 2));
    auto comma = inside.find(',');
    if (comma != std::string::npos && comma > 0 && comma + 1 < inside.size() &&
        inside.find(',', comma + 1) == std::string::npos && comma <= 4 && inside.size() - comma - 1 <= 4) {
      int lambda = std::stoi(inside.substr(0, comma));
      int i = std::stoi(inside.substr(comma + 1));
      if (lambda >= 1 && lambda <= n() && i >= 1 && i <= m()) return momentum(lambda, i);
    }
    return sym::Unresolved{ParseErrorKind::unknown_coordinate,
                           "momentum references are p[lambda,i] with 1 <= lambda <= " + std::to_string(n()) +
                               " and 1 <= i <= " + std::to_string(m())};
  }
  auto us = name.find('_');
  std::string_view head = name.substr(0, us);
  bool field_like = false;
  for (const auto& f : fields()) field_like = field_like || f.name == head;
  if (us != std::string_view::npos || field_like) {
    return sym::Unresolved{ParseErrorKind::unknown_coordinate,
                           "jets are named <field>_<base labels> and exist up to order " + std::to_string(order())};
  }
  return sym::Unresolved{ParseErrorKind::undeclared_parameter,
                         "declare '" + std::string(name) + "' as a parameter or use a chart coordinate"};
}

sym::Resolver Chart::resolver() const {
  Chart self = *this;
  return [self](std::string_view name) { return self.resolve(name); };
}

bool operator==(const Chart& a, const Chart& b) {
  if (a.impl_ == b.impl_) return true;
  if (a.impl_->inventory != b.impl_->inventory) return false;
  if (a.impl_->functions.size() != b.impl_->functions.size()) return false;
  for (const auto& [name, sig] : a.impl_->functions) {
    auto it = b.impl_->functions.find(name);
    if (it == b.impl_->functions.end() || it->second.arity != sig.arity) return false;
  }
  return true;
}

}  // namespace jetham::geom
