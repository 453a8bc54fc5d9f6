#include <gtest/gtest.h>

#include "jetham/chart.hpp"
#include "jetham/error.hpp"
#include "jetham/form.hpp"
#include "jetham/hamiltonian.hpp"
#include "support.hpp"

namespace jetham {
namespace {

using ext::Form;
using ext::LegKey;
using ext::ValuedForm;
using ext::VectorField;
using geom::Chart;
using geom::ChartSpec;
using sym::Coord;
using sym::Expr;
using testing::parse;

Chart chart(int n, int m = 1) {
  ChartSpec s;
  s.n = n;
  s.m = m;
  s.order = 1;
  s.momenta = true;
  return Chart(s);
}

Form d(const Coord& c) { return Form::differential(c); }

// Sign of a permutation by counting inversions against the atom order.
int inversion_sign(const std::vector<Coord>& w) {
  int inv = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (w[i] == w[j]) return 0;
      if (w[j] < w[i]) ++inv;
    }
  }
  return inv % 2 ? -1 : 1;
}

std::vector<Coord> form_vars(const Chart& c) {
  std::vector<Coord> v = c.base();
  v.push_back(c.theta());
  for (const auto& y : c.fibers()) v.push_back(y);
  for (const auto& p : c.momenta()) v.push_back(p);
  return v;
}

TEST(Wedge, Examples) {
  Chart c = chart(1);
  const Coord &x = c.base(1), &y = c.fiber(1), &tau = c.theta();
  EXPECT_TRUE(ext::wedge(d(x), d(x)).is_zero());
  EXPECT_EQ(ext::wedge(d(y), d(x)), -ext::wedge(d(x), d(y)));
  EXPECT_EQ(ext::wedge(d(y), d(x)).str(), "-dx∧dy");
  Form lhs = ext::wedge(Expr(c.momentum(1, 1)) * d(y), ext::wedge(d(x), d(tau)));
  std::vector<Coord> word{y, x, tau};
  std::vector<Coord> sorted{x, tau, y};
  EXPECT_EQ(lhs.coefficient(sorted), Expr(inversion_sign(word)) * Expr(c.momentum(1, 1)));
  EXPECT_EQ(lhs.terms().size(), 1u);
}

TEST(Wedge, TermSignMatchesInversionOracle) {
  Chart c = chart(3, 2);
  auto vars = form_vars(c);
  testing::Rng rng(21);
  for (int k = 0; k < 300; ++k) {
    std::vector<Coord> w;
    const int len = testing::uniform(rng, 1, 5);
    for (int j = 0; j < len; ++j) w.push_back(vars[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(vars.size()) - 1))]);
    Form f = Form::term(Expr(1), w);
    std::vector<Coord> sorted = w;
    std::sort(sorted.begin(), sorted.end());
    EXPECT_EQ(f.coefficient(sorted), Expr(inversion_sign(w)));
  }
}

TEST(Wedge, GradedAnticommutativityAndAssociativity) {
  Chart c = chart(2, 2);
  auto vars = form_vars(c);
  testing::Rng rng(22);
  for (int k = 0; k < 200; ++k) {
    int da = testing::uniform(rng, 0, 3), db = testing::uniform(rng, 0, 3), dc = testing::uniform(rng, 0, 2);
    Form a = testing::random_form(rng, vars, vars, da);
    Form b = testing::random_form(rng, vars, vars, db);
    Form e = testing::random_form(rng, vars, vars, dc);
    Expr sign((da * db) % 2 ? -1 : 1);
    EXPECT_EQ(ext::wedge(a, b), sign * ext::wedge(b, a));
    EXPECT_EQ(ext::wedge(ext::wedge(a, b), e), ext::wedge(a, ext::wedge(b, e)));
  }
}

TEST(ExtD, Examples) {
  Chart c = chart(1);
  const Coord &x = c.base(1), &y = c.fiber(1);
  EXPECT_EQ(ext::ext_d(Expr(y) * d(x)), ext::wedge(d(y), d(x)));
  EXPECT_TRUE(ext::ext_d(ext::ext_d(Form(parse(c, "x^2*y*p + tau")))).is_zero());
  EXPECT_EQ(ext::ext_d(Form(parse(c, "x*tau"))), Expr(c.theta()) * d(x) + Expr(x) * d(c.theta()));
  EXPECT_EQ(ext::ext_d(Form(parse(c, "x*tau")), {c.theta()}), Expr(c.theta()) * d(x));
}

TEST(ExtD, OfMomentumTimesContractedVolume) {
  for (int n = 1; n <= 3; ++n) {
    Chart c = chart(n, 2);
    Form a(n), expected(n + 1);
    for (int l = 1; l <= n; ++l) {
      Form wl = ext::volume_form_contracted(c.base(), l);
      for (int i = 1; i <= 2; ++i) {
        a += ext::wedge(Expr(c.momentum(l, i)) * d(c.fiber(i)), wl);
        expected += ext::wedge(ext::wedge(d(c.momentum(l, i)), d(c.fiber(i))), wl);
      }
    }
    EXPECT_EQ(ext::ext_d(a), expected);
  }
}

TEST(ExtD, SquareIsZeroAndGradedLeibniz) {
  testing::Rng rng(23);
  for (int k = 0; k < 300; ++k) {
    const int n = testing::uniform(rng, 1, 3);
    Chart c = chart(n, testing::uniform(rng, 1, 2));
    auto vars = form_vars(c);
    const int da = testing::uniform(rng, 0, n + 1), db = testing::uniform(rng, 0, 2);
    Form a = testing::random_form(rng, vars, vars, da);
    Form b = testing::random_form(rng, vars, vars, db);
    EXPECT_TRUE(ext::ext_d(ext::ext_d(a)).is_zero());
    Expr sign(da % 2 ? -1 : 1);
    EXPECT_EQ(ext::ext_d(ext::wedge(a, b)), ext::wedge(ext::ext_d(a), b) + sign * ext::wedge(a, ext::ext_d(b)));
  }
}

TEST(ExtD, ParametersAreConstants) {
  ChartSpec s;
  s.parameters = {"mu"};
  Chart c(s);
  EXPECT_EQ(ext::ext_d(Form(parse(c, "mu*y"))), Expr(sym::parameter("mu")) * d(c.fiber(1)));
}

TEST(Interior, Examples) {
  Chart c = chart(1);
  const Coord &x = c.base(1), &y = c.fiber(1);
  Form dxdy = ext::wedge(d(x), d(y));
  EXPECT_EQ(ext::interior(VectorField::basis(x), dxdy), d(y));
  EXPECT_EQ(ext::interior(VectorField::basis(y), dxdy), -d(x));
  EXPECT_THROW(ext::interior(VectorField::basis(x), Form(Expr(1))), DomainError);
}

TEST(Interior, ContractedVolumeSign) {
  for (int n = 1; n <= 4; ++n) {
    Chart c = chart(n);
    Form omega = ext::volume_form(c.base());
    for (int l = 1; l <= n; ++l) {
      std::vector<Coord> rest;
      for (int k = 1; k <= n; ++k) {
        if (k != l) rest.push_back(c.base(k));
      }
      // Move dx^λ to the front: λ−1 transpositions.
      Form expected = Form::term(Expr(l % 2 ? 1 : -1), rest);
      EXPECT_EQ(ext::interior(VectorField::basis(c.base(l)), omega), expected);
      EXPECT_EQ(ext::volume_form_contracted(c.base(), l), expected);
    }
  }
}

TEST(Interior, AntiderivationAndAnticommutation) {
  Chart c = chart(2, 2);
  auto vars = form_vars(c);
  testing::Rng rng(24);
  for (int k = 0; k < 200; ++k) {
    const int da = testing::uniform(rng, 1, 3), db = testing::uniform(rng, 1, 3);
    Form a = testing::random_form(rng, vars, vars, da);
    Form b = testing::random_form(rng, vars, vars, db);
    VectorField v, w;
    for (int j = 0; j < 3; ++j) {
      v.set(vars[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(vars.size()) - 1))], testing::random_poly(rng, vars, 2, 2));
      w.set(vars[static_cast<std::size_t>(testing::uniform(rng, 0, static_cast<int>(vars.size()) - 1))], testing::random_poly(rng, vars, 2, 2));
    }
    Expr sign(da % 2 ? -1 : 1);
    EXPECT_EQ(ext::interior(v, ext::wedge(a, b)),
              ext::wedge(ext::interior(v, a), b) + sign * ext::wedge(a, ext::interior(v, b)));
    if (da >= 2) EXPECT_EQ(ext::interior(v, ext::interior(w, a)), -ext::interior(w, ext::interior(v, a)));
  }
}

TEST(Pullback, CommutesWithExtD) {
  Chart c = chart(2);
  auto vars = form_vars(c);
  testing::Rng rng(25);
  for (int k = 0; k < 100; ++k) {
    Form a = testing::random_form(rng, vars, vars, testing::uniform(rng, 0, 2));
    sym::Bindings b{{c.theta(), testing::random_poly(rng, c.base(), 3, 2)},
                    {c.fiber(1), testing::random_poly(rng, {c.base(1), c.momentum(1, 1)}, 3, 2)}};
    EXPECT_EQ(ext::pullback(ext::ext_d(a), b), ext::ext_d(ext::pullback(a, b)));
  }
}

TEST(LegContract, LiouvilleExamples) {
  for (int n = 1; n <= 3; ++n) {
    Chart c = chart(n, 2);
    ham::LegendreChart lc(c);
    ValuedForm theta = ham::liouville_form(lc);
    Form omega = ext::volume_form(c.base());
    ValuedForm by_tau;
    for (int l = 1; l <= n; ++l) {
      Form f(n + 1);
      for (int i = 1; i <= 2; ++i) f += ext::wedge(Expr(c.momentum(l, i)) * d(c.fiber(i)), omega);
      by_tau += ValuedForm(LegKey{l, false}, f);
    }
    EXPECT_EQ(ext::leg_contract(theta, d(c.theta())), by_tau);
    Form first(n + 1);
    for (int i = 1; i <= 2; ++i) first += ext::wedge(Expr(c.momentum(1, i)) * d(c.fiber(i)), omega);
    EXPECT_EQ(ext::leg_contract(theta, d(c.base(1))), ValuedForm(LegKey{0, true}, first));
    EXPECT_TRUE(ext::leg_contract(theta, Form(1)).is_zero());
  }
}

TEST(LegContract, Preconditions) {
  Chart c = chart(2);
  ValuedForm theta = ham::liouville_form(ham::LegendreChart(c));
  EXPECT_THROW(ext::leg_contract(theta, ext::wedge(d(c.base(1)), d(c.base(2)))), DomainError);
  EXPECT_THROW(ext::leg_contract(theta, d(c.fiber(1))), DomainError);
  EXPECT_THROW(ext::leg_contract(theta, Expr(c.theta()) * d(c.base(1))), DomainError);
  EXPECT_THROW(ext::leg_contract(ValuedForm(LegKey{0, false}, d(c.base(1))), d(c.base(1))), DomainError);
}

TEST(LegContract, PolysymplecticDefiningRelation) {
  testing::Rng rng(26);
  for (int n = 1; n <= 3; ++n) {
    Chart c = chart(n, 2);
    ham::LegendreChart lc(c);
    ValuedForm theta = ham::liouville_form(lc), omega = ham::polysymplectic_form(lc);
    std::vector<Form> psis{d(c.theta())};
    for (int l = 1; l <= n; ++l) psis.push_back(d(c.base(l)));
    for (int k = 0; k < 10; ++k) {
      Form psi = testing::random_poly(rng, c.base(), 3, 2) * d(c.theta());
      for (int l = 1; l <= n; ++l) psi += testing::random_poly(rng, c.base(), 3, 2) * d(c.base(l));
      psis.push_back(psi);
    }
    for (const auto& psi : psis) {
      EXPECT_EQ(ext::ext_d(ext::leg_contract(theta, psi)), ext::leg_contract(omega, psi)) << psi.str();
    }
  }
}

TEST(Absorb, LiouvilleAbsorbedForm) {
  Chart c = chart(2);
  ham::LegendreChart lc(c);
  const Coord &x1 = c.base(1), &x2 = c.base(2), &y = c.fiber(1);
  ValuedForm absorbed = ham::absorbed(ham::liouville_form(lc), lc);
  Form expected = ext::wedge(Expr(c.momentum(1, 1)) * d(y), d(x2)) - ext::wedge(Expr(c.momentum(2, 1)) * d(y), d(x1));
  EXPECT_EQ(absorbed, ValuedForm(LegKey{0, true}, expected));
  EXPECT_EQ(ext::ext_d(absorbed), ham::absorbed(ham::polysymplectic_form(lc), lc));
  EXPECT_THROW(ext::absorb_tx_leg(ValuedForm(LegKey{1, false}, d(x1)), c.base()), DomainError);
}

TEST(ValuedForm, Rendering) {
  Chart c = chart(1);
  ham::LegendreChart lc(c);
  EXPECT_EQ(ham::liouville_form(lc).str(c.base_labels(), "tau"), "(-p*dx∧dy) ⊗ ∂_x ⊗ ∂_tau");
}

}  // namespace
}  // namespace jetham
