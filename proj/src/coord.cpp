#include "jetham/coord.hpp"

#include <array>

namespace jetham::sym {

std::string_view role_name(Role role) {
  switch (role) {
    case Role::base: return "base";
    case Role::theta_fiber: return "theta-fiber";
    case Role::y_fiber: return "y-fiber";
    case Role::jet: return "jet";
    case Role::theta_jet: return "theta-jet";
    case Role::momentum: return "momentum";
    case Role::momentum_jet: return "momentum-jet";
    case Role::parameter: return "parameter";
  }
  return "unknown";
}

namespace {

constexpr std::array<std::string_view, 24> kGreek = {
    "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta",
    "iota", "kappa", "lambda", "mu", "nu", "xi", "pi", "rho",
    "sigma", "tau", "upsilon", "phi", "chi", "psi", "omega", "varepsilon"};

std::string tex_stem(std::string_view stem) {
  for (auto g : kGreek) {
    if (stem == g) return "\\" + std::string(stem);
  }
  return std::string(stem);
}

}  // namespace

std::string tex_identifier(std::string_view name) {
  auto us = name.find('_');
  if (us == std::string_view::npos || us + 1 == name.size()) return tex_stem(name);
  return tex_stem(name.substr(0, us)) + "_{" + std::string(name.substr(us + 1)) + "}";
}

}  // namespace jetham::sym
