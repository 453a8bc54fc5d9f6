#include "jetham/form.hpp"

#include <algorithm>

#include "jetham/error.hpp"

namespace jetham::ext {

int sort_word(Word& w) {
  int sign = 1;
  for (std::size_t i = 1; i < w.size(); ++i) {
    for (std::size_t j = i; j > 0 && w[j] < w[j - 1]; --j) {
      std::swap(w[j], w[j - 1]);
      sign = -sign;
    }
  }
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == w[i - 1]) return 0;
  }
  return sign;
}

Form::Form(Expr scalar) : degree_(0) { add_term({}, scalar); }

Form Form::differential(const Coord& c) { return term(Expr(1), Word{c}); }

Form Form::term(Expr coef, Word word) {
  Form out(static_cast<int>(word.size()));
  int sign = sort_word(word);
  if (sign != 0) out.add_term(word, sign > 0 ? coef : -coef);
  return out;
}

void Form::add_term(const Word& w, const Expr& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(w, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Expr Form::coefficient(const Word& w) const {
  auto it = terms_.find(w);
  return it == terms_.end() ? Expr() : it->second;
}

CoordSet Form::coordinates() const {
  CoordSet out;
  for (const auto& [w, c] : terms_) {
    out.insert(w.begin(), w.end());
    auto cs = c.coordinates();
    out.insert(cs.begin(), cs.end());
  }
  return out;
}

Form Form::operator-() const {
  Form out(degree_);
  for (const auto& [w, c] : terms_) out.terms_.emplace(w, -c);
  return out;
}

Form& Form::operator+=(const Form& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) {
    degree_ = other.degree_;
  } else if (degree_ != other.degree_) {
    throw DomainError("cannot add forms of degree " + std::to_string(degree_) + " and " +
                      std::to_string(other.degree_));
  }
  for (const auto& [w, c] : other.terms_) add_term(w, c);
  return *this;
}

Form operator*(const Expr& f, const Form& a) {
  Form out(a.degree());
  for (const auto& [w, c] : a.terms()) out.add_term(w, f * c);
  return out;
}

bool operator==(const Form& a, const Form& b) {
  if (a.is_zero() && b.is_zero()) return true;
  return a.degree_ == b.degree_ && a.terms_ == b.terms_;
}

namespace {

std::string word_str(const Word& w, const char* wedge_sym, bool tex) {
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += wedge_sym;
    out += tex ? "d" + sym::tex_identifier(w[k].name) : "d" + w[k].name;
  }
  return out;
}

std::string render(const std::map<Word, Expr>& terms, bool tex) {
  if (terms.empty()) return "0";
  const char* wedge_sym = tex ? " \\wedge " : "∧";
  const char* times = tex ? " \\, " : "*";
  std::string out;
  bool first = true;
  for (const auto& [w, c] : terms) {
    std::string body;
    bool negative = false;
    if (w.empty()) {
      body = tex ? c.tex() : c.str();
    } else if (c.size() == 1) {
      const auto& [m, q] = *c.terms().begin();
      negative = q < 0;
      Expr magnitude = negative ? -c : c;
      body = magnitude == Expr(1) ? word_str(w, wedge_sym, tex)
                                  : (tex ? magnitude.tex() : magnitude.str()) + times + word_str(w, wedge_sym, tex);
    } else {
      body = std::string(tex ? "\\left(" : "(") + (tex ? c.tex() : c.str()) + (tex ? "\\right)" : ")") + times +
             word_str(w, wedge_sym, tex);
    }
    if (first) {
      out += (negative ? "-" : "") + body;
    } else {
      out += (negative ? " - " : " + ") + body;
    }
    first = false;
  }
  return out;
}

}  // namespace

std::string Form::str() const { return render(terms_, false); }
std::string Form::tex() const { return render(terms_, true); }

Form wedge(const Form& a, const Form& b) {
  Form out(a.degree() + b.degree());
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      Word w = wa;
      w.insert(w.end(), wb.begin(), wb.end());
      out += Form::term(ca * cb, std::move(w));
    }
  }
  return out;
}

Form ext_d(const Form& a, const CoordSet& held_fixed) {
  Form out(a.degree() + 1);
  for (const auto& [w, c] : a.terms()) {
    for (const auto& x : c.coordinates()) {
      if (x.role == sym::Role::parameter || held_fixed.count(x)) continue;
      Expr partial = sym::diff(c, x);
      if (partial.is_zero()) continue;
      Word dw{x};
      dw.insert(dw.end(), w.begin(), w.end());
      out += Form::term(partial, std::move(dw));
    }
  }
  return out;
}

Form pullback(const Form& a, const sym::Bindings& bindings) {
  Form out(a.degree());
  for (const auto& [w, c] : a.terms()) {
    Form acc(sym::subst(c, bindings));
    for (const auto& x : w) {
      auto it = bindings.find(x);
      acc = wedge(acc, it == bindings.end() ? Form::differential(x) : ext_d(Form(it->second)));
    }
    out += acc;
  }
  return out;
}

VectorField VectorField::basis(const Coord& c) {
  VectorField v;
  v.set(c, Expr(1));
  return v;
}

void VectorField::set(const Coord& c, Expr value) {
  if (value.is_zero()) {
    components_.erase(c);
  } else {
    components_[c] = std::move(value);
  }
}

Expr VectorField::operator()(const Coord& c) const {
  auto it = components_.find(c);
  return it == components_.end() ? Expr() : it->second;
}

VectorField& VectorField::operator+=(const VectorField& other) {
  for (const auto& [c, e] : other.components_) set(c, (*this)(c) + e);
  return *this;
}

Form interior(const VectorField& v, const Form& a) {
  if (a.degree() == 0) throw DomainError("interior product of a 0-form");
  Form out(a.degree() - 1);
  for (const auto& [w, c] : a.terms()) {
    for (std::size_t j = 0; j < w.size(); ++j) {
      Expr vj = v(w[j]);
      if (vj.is_zero()) continue;
      Word rest = w;
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(j));
      Expr coef = vj * c;
      out += Form::term(j % 2 == 0 ? coef : -coef, std::move(rest));
    }
  }
  return out;
}

Form volume_form(const std::vector<Coord>& base) {
  Form out(Expr(1));
  for (const auto& x : base) out = wedge(out, Form::differential(x));
  return out;
}

Form volume_form_contracted(const std::vector<Coord>& base, int lambda) {
  if (lambda < 1 || lambda > static_cast<int>(base.size())) throw DomainError("base index out of range");
  return interior(VectorField::basis(base[static_cast<std::size_t>(lambda - 1)]), volume_form(base));
}

// ---------------------------------------------------------------------------
// valued forms

ValuedForm::ValuedForm(LegKey key, Form form) { add(key, form); }

void ValuedForm::add(const LegKey& key, const Form& f) {
  if (f.is_zero()) return;
  auto it = pieces_.find(key);
  if (it == pieces_.end()) {
    pieces_.emplace(key, f);
    return;
  }
  it->second += f;
  if (it->second.is_zero()) pieces_.erase(it);
}

Form ValuedForm::piece(const LegKey& key) const {
  auto it = pieces_.find(key);
  return it == pieces_.end() ? Form() : it->second;
}

ValuedForm& ValuedForm::operator+=(const ValuedForm& other) {
  for (const auto& [k, f] : other.pieces_) add(k, f);
  return *this;
}

ValuedForm& ValuedForm::operator-=(const ValuedForm& other) {
  for (const auto& [k, f] : other.pieces_) add(k, -f);
  return *this;
}

namespace {

std::string leg_suffix(const LegKey& k, const std::vector<std::string>& tx_names, const std::string& theta,
                       bool tex) {
  auto name = [&](int lambda) {
    auto idx = static_cast<std::size_t>(lambda - 1);
    if (idx < tx_names.size()) return tex ? sym::tex_identifier(tx_names[idx]) : tx_names[idx];
    return std::to_string(lambda);
  };
  std::string out;
  if (k.tx) out += tex ? " \\otimes \\partial_{" + name(k.tx) + "}" : " ⊗ ∂_" + name(k.tx);
  if (k.vtheta) out += tex ? " \\otimes \\partial_{" + sym::tex_identifier(theta) + "}" : " ⊗ ∂_" + theta;
  return out;
}

}  // namespace

std::string ValuedForm::str(const std::vector<std::string>& tx_names, const std::string& theta) const {
  if (pieces_.empty()) return "0";
  std::string out;
  for (const auto& [k, f] : pieces_) {
    if (!out.empty()) out += " + ";
    out += "(" + f.str() + ")" + leg_suffix(k, tx_names, theta, false);
  }
  return out;
}

std::string ValuedForm::tex(const std::vector<std::string>& tx_names, const std::string& theta) const {
  if (pieces_.empty()) return "0";
  std::string out;
  for (const auto& [k, f] : pieces_) {
    if (!out.empty()) out += " + ";
    out += "\\left(" + f.tex() + "\\right)" + leg_suffix(k, tx_names, theta, true);
  }
  return out;
}

ValuedForm ext_d(const ValuedForm& a, const CoordSet& held_fixed) {
  ValuedForm out;
  for (const auto& [k, f] : a.pieces()) out += ValuedForm(k, ext_d(f, held_fixed));
  return out;
}

ValuedForm leg_contract(const ValuedForm& a, const Form& psi) {
  if (psi.is_zero()) return {};
  if (psi.degree() != 1) throw DomainError("leg contraction needs a 1-form on Θ");
  std::map<int, Expr> tx;  // λ -> ψ_λ
  Expr vt;
  for (const auto& [w, c] : psi.terms()) {
    const Coord& x = w.front();
    if (x.role != sym::Role::base && x.role != sym::Role::theta_fiber) {
      throw DomainError("ψ mentions non-Θ coordinate '" + x.name + "'");
    }
    for (const auto& cc : c.coordinates()) {
      if (cc.role == sym::Role::theta_fiber) {
        throw DomainError("ψ coefficients must not depend on '" + cc.name + "'");
      }
      if (cc.role != sym::Role::base && cc.role != sym::Role::parameter) {
        throw DomainError("ψ mentions non-Θ coordinate '" + cc.name + "'");
      }
    }
    if (x.role == sym::Role::base) {
      tx[x.indices.at(0)] = c;
    } else {
      vt = c;
    }
  }
  ValuedForm out;
  for (const auto& [k, f] : a.pieces()) {
    if (!k.tx && !k.vtheta) throw DomainError("valued form piece has no leg to contract");
    if (k.tx) {
      auto it = tx.find(k.tx);
      if (it != tx.end()) out += ValuedForm(LegKey{0, k.vtheta}, it->second * f);
    }
    if (k.vtheta && !vt.is_zero()) out += ValuedForm(LegKey{k.tx, false}, vt * f);
  }
  return out;
}

ValuedForm absorb_tx_leg(const ValuedForm& a, const std::vector<Coord>& base) {
  const Form omega = volume_form(base);
  ValuedForm out;
  for (const auto& [k, f] : a.pieces()) {
    if (!k.tx) {
      out += ValuedForm(k, f);
      continue;
    }
    Form absorbed(f.degree() - 1);
    for (const auto& [w, c] : f.terms()) {
      Word rest;
      std::size_t hits = 0;
      for (const auto& x : w) {
        if (std::find(base.begin(), base.end(), x) != base.end()) {
          ++hits;
        } else {
          rest.push_back(x);
        }
      }
      if (hits != base.size()) throw DomainError("TX-valued piece is not divisible by the volume form");
      Form g = Form::term(Expr(1), rest);
      Expr sign = wedge(g, omega).coefficient(w);
      absorbed += wedge((sign * c) * g, volume_form_contracted(base, k.tx));
    }
    out += ValuedForm(LegKey{0, k.vtheta}, absorbed);
  }
  return out;
}

}  // namespace jetham::ext
