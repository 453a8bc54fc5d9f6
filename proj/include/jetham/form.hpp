#pragma once

#include <compare>
#include <map>
#include <string>
#include <vector>

#include "jetham/expr.hpp"

namespace jetham::ext {

using sym::Coord;
using sym::CoordSet;
using sym::Expr;

/// Wedge word dc_1 ∧ ... ∧ dc_k, strictly increasing in the atom order.
using Word = std::vector<Coord>;

/// Differential form on a single chart: a finite sum of coefficient · word.
/// Every stored word is strictly sorted and every coefficient is nonzero.
class Form {
 public:
  Form() = default;
  explicit Form(int degree) : degree_(degree) {}
  Form(Expr scalar);  // NOLINT(google-explicit-constructor)

  /// dc as a 1-form.
  static Form differential(const Coord& c);
  /// coef · (c_1 ∧ ... ∧ c_k) for an unsorted word; antisymmetry is resolved
  /// with the permutation sign and repeated coordinates give zero.
  static Form term(Expr coef, Word word);

  int degree() const { return degree_; }
  const std::map<Word, Expr>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Coefficient of a sorted word (zero when absent).
  Expr coefficient(const Word& w) const;
  /// Value of a 0-form.
  Expr scalar() const { return coefficient({}); }

  /// Coordinates occurring in words or coefficients.
  CoordSet coordinates() const;

  Form operator-() const;
  Form& operator+=(const Form& other);
  Form& operator-=(const Form& other) { return *this += -other; }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const Expr& f, const Form& a);

  /// Zero forms compare equal regardless of their nominal degree.
  friend bool operator==(const Form& a, const Form& b);

  std::string str() const;
  std::string tex() const;

 private:
  void add_term(const Word& w, const Expr& c);

  int degree_ = 0;
  std::map<Word, Expr> terms_;
};

/// Sign of the permutation sorting `w` (0 when a coordinate repeats); `w` is
/// sorted in place.
int sort_word(Word& w);

Form wedge(const Form& a, const Form& b);

/// Exterior derivative. Parameters are constants; coordinates listed in
/// `held_fixed` are treated as constants as well (their differentials are
/// dropped), which gives the differential along the slices where they are
/// constant.
Form ext_d(const Form& a, const CoordSet& held_fixed = {});

/// Pull back along a coordinate substitution: coefficients are substituted
/// and each bound dc becomes d(replacement).
Form pullback(const Form& a, const sym::Bindings& bindings);

class VectorField {
 public:
  VectorField() = default;
  /// The coordinate vector field ∂_c.
  static VectorField basis(const Coord& c);

  void set(const Coord& c, Expr value);
  Expr operator()(const Coord& c) const;
  const std::map<Coord, Expr>& components() const { return components_; }

  VectorField& operator+=(const VectorField& other);

 private:
  std::map<Coord, Expr> components_;
};

/// Contraction v⌋a. Throws DomainError for 0-forms.
Form interior(const VectorField& v, const Form& a);

/// Top horizontal form ω = dx^1 ∧ ... ∧ dx^n, wedged in the listed order.
Form volume_form(const std::vector<Coord>& base);
/// ω_λ = ∂_λ⌋ω, with λ 1-based.
Form volume_form_contracted(const std::vector<Coord>& base, int lambda);

/// Formal value legs of a valued form: a TX leg ∂_λ (tx = λ, 0 when absent)
/// and the one-dimensional VΘ leg ∂_τ.
struct LegKey {
  int tx = 0;
  bool vtheta = false;

  friend auto operator<=>(const LegKey&, const LegKey&) = default;
  friend bool operator==(const LegKey&, const LegKey&) = default;
};

/// Sum of forms tensored with formal leg markers. A two-leg form stores one
/// piece per λ under {λ, true}; TX-only pieces sit under {λ, false};
/// VΘ-only under {0, true}.
class ValuedForm {
 public:
  ValuedForm() = default;
  ValuedForm(LegKey key, Form form);

  const std::map<LegKey, Form>& pieces() const { return pieces_; }
  Form piece(const LegKey& key) const;
  bool is_zero() const { return pieces_.empty(); }

  ValuedForm& operator+=(const ValuedForm& other);
  ValuedForm& operator-=(const ValuedForm& other);
  friend ValuedForm operator+(ValuedForm a, const ValuedForm& b) { return a += b; }
  friend ValuedForm operator-(ValuedForm a, const ValuedForm& b) { return a -= b; }
  friend bool operator==(const ValuedForm& a, const ValuedForm& b) { return a.pieces_ == b.pieces_; }

  /// `tx_names[λ-1]` names the TX leg; `theta` names the VΘ leg.
  std::string str(const std::vector<std::string>& tx_names = {}, const std::string& theta = "tau") const;
  std::string tex(const std::vector<std::string>& tx_names = {}, const std::string& theta = "tau") const;

 private:
  void add(const LegKey& key, const Form& f);

  std::map<LegKey, Form> pieces_;
};

/// Componentwise exterior derivative; the legs are constant markers.
ValuedForm ext_d(const ValuedForm& a, const CoordSet& held_fixed = {});

/// Pair a 1-form ψ = ψ_μ dx^μ + ψ_τ dτ on Θ against the legs: ψ_λ against the
/// TX leg ∂_λ and ψ_τ against ∂_τ. Each two-leg piece contributes both
/// pairings, each consuming one leg.
///
/// ψ must have degree 1, only dx^μ and dτ in its words, and coefficients
/// that depend on base coordinates (and parameters) only. Pieces without
/// legs cannot be contracted.
ValuedForm leg_contract(const ValuedForm& a, const Form& psi);

/// Absorb the TX leg: every piece G∧ω ⊗ ∂_λ [⊗ ∂_τ] becomes G∧ω_λ [⊗ ∂_τ].
/// Throws DomainError when a TX piece is not divisible by ω.
ValuedForm absorb_tx_leg(const ValuedForm& a, const std::vector<Coord>& base);

}  // namespace jetham::ext
