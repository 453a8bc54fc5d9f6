#include "jetham/expr.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>

#include "jetham/error.hpp"

namespace jetham::sym {

namespace {

constexpr int kMaxPower = 1000000;

const TermMap& empty_terms() {
  static const TermMap empty;
  return empty;
}

std::strong_ordering compare_rational(const Rational& a, const Rational& b) {
  if (a < b) return std::strong_ordering::less;
  if (b < a) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

void check_size(std::size_t n) {
  if (n > max_terms()) {
    throw LimitError("expression exceeds " + std::to_string(max_terms()) +
                     " terms (raise JETHAM_MAX_TERMS to allow larger expansions)");
  }
}

void accumulate(TermMap& into, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = into.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) into.erase(it);
  }
}

void accumulate(TermMap& into, Monomial&& m, const Rational& c) {
  if (c == 0) return;
  auto it = into.find(m);
  if (it == into.end()) {
    into.emplace(std::move(m), c);
  } else {
    it->second += c;
    if (it->second == 0) into.erase(it);
  }
}

Monomial multiply(const Monomial& a, const Monomial& b) {
  Monomial out;
  out.reserve(a.size() + b.size());
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    auto cmp = i->atom <=> j->atom;
    if (cmp < 0) {
      out.push_back(*i++);
    } else if (cmp > 0) {
      out.push_back(*j++);
    } else {
      if (i->power > kMaxPower - j->power) throw LimitError("power exceeds " + std::to_string(kMaxPower));
      out.push_back(Factor{i->atom, i->power + j->power});
      ++i;
      ++j;
    }
  }
  out.insert(out.end(), i, a.end());
  out.insert(out.end(), j, b.end());
  return out;
}

/// The monomial with one power of the factor at `pos` removed.
Monomial lower(const Monomial& m, std::size_t pos) {
  Monomial out = m;
  if (--out[pos].power == 0) out.erase(out.begin() + static_cast<std::ptrdiff_t>(pos));
  return out;
}

void collect(const Expr& e, CoordSet& into);

void collect(const Atom& a, CoordSet& into) {
  if (const auto* c = std::get_if<Coord>(&a)) {
    into.insert(*c);
  } else {
    for (const auto& arg : std::get<FunctionApp>(a).args) collect(arg, into);
  }
}

void collect(const Expr& e, CoordSet& into) {
  for (const auto& [m, c] : e.terms()) {
    for (const auto& f : m) collect(f.atom, into);
  }
}

bool is_parameter(const Factor& f) {
  const auto* c = std::get_if<Coord>(&f.atom);
  return c != nullptr && c->role == Role::parameter;
}

/// Display order puts parameters in front: `-w^2*y` rather than `-y*w^2`.
std::vector<const Factor*> display_order(const Monomial& m) {
  std::vector<const Factor*> out;
  for (const auto& f : m) out.push_back(&f);
  std::stable_partition(out.begin(), out.end(), [](const Factor* f) { return is_parameter(*f); });
  return out;
}

std::string atom_str(const Atom& a) {
  if (const auto* c = std::get_if<Coord>(&a)) return c->name;
  const auto& f = std::get<FunctionApp>(a);
  std::string out = f.name;
  if (std::any_of(f.derivatives.begin(), f.derivatives.end(), [](int d) { return d != 0; })) {
    out += "^(";
    for (std::size_t k = 0; k < f.derivatives.size(); ++k) {
      if (k) out += ",";
      out += std::to_string(f.derivatives[k]);
    }
    out += ")";
  }
  out += "(";
  for (std::size_t k = 0; k < f.args.size(); ++k) {
    if (k) out += ", ";
    out += f.args[k].str();
  }
  return out + ")";
}

std::string atom_tex(const Atom& a) {
  if (const auto* c = std::get_if<Coord>(&a)) return tex_identifier(c->name);
  const auto& f = std::get<FunctionApp>(a);
  std::string out;
  for (std::size_t k = 0; k < f.derivatives.size(); ++k) {
    if (f.derivatives[k] == 0) continue;
    auto slot = f.args[k].as_coord();
    out += "\\partial_{" + (slot ? tex_identifier(slot->name) : "(" + std::to_string(k + 1) + ")") + "}";
    if (f.derivatives[k] > 1) out += "^{" + std::to_string(f.derivatives[k]) + "}";
    out += " ";
  }
  out += tex_identifier(f.name) + "(";
  for (std::size_t k = 0; k < f.args.size(); ++k) {
    if (k) out += ", ";
    out += f.args[k].tex();
  }
  return out + ")";
}

std::string rational_tex(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return "\\frac{" + numerator(q).str() + "}{" + denominator(q).str() + "}";
}

}  // namespace

std::string to_string(const Rational& q) {
  if (denominator(q) == 1) return numerator(q).str();
  return numerator(q).str() + "/" + denominator(q).str();
}

std::size_t max_terms() {
  static const std::size_t cap = [] {
    if (const char* env = std::getenv("JETHAM_MAX_TERMS")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::size_t{100000};
  }();
  return cap;
}

// ---------------------------------------------------------------------------
// ordering

std::strong_ordering operator<=>(const Expr& a, const Expr& b) {
  const auto& ta = a.terms();
  const auto& tb = b.terms();
  auto i = ta.begin();
  auto j = tb.begin();
  for (; i != ta.end() && j != tb.end(); ++i, ++j) {
    if (auto c = i->first <=> j->first; c != 0) return c;
    if (auto c = compare_rational(i->second, j->second); c != 0) return c;
  }
  if (i != ta.end()) return std::strong_ordering::greater;
  if (j != tb.end()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

bool operator==(const Expr& a, const Expr& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const FunctionApp& a, const FunctionApp& b) {
  if (auto c = a.name <=> b.name; c != 0) return c;
  if (auto c = a.args <=> b.args; c != 0) return c;
  return a.derivatives <=> b.derivatives;
}

bool operator==(const FunctionApp& a, const FunctionApp& b) { return (a <=> b) == 0; }

std::strong_ordering operator<=>(const Factor& a, const Factor& b) {
  if (auto c = a.atom <=> b.atom; c != 0) return c;
  return a.power <=> b.power;
}

bool operator==(const Factor& a, const Factor& b) { return (a <=> b) == 0; }

// ---------------------------------------------------------------------------
// construction

Expr::Expr(int value) : Expr(Rational(value)) {}

Expr::Expr(Rational value) {
  if (value != 0) terms_ = std::make_shared<const TermMap>(TermMap{{Monomial{}, std::move(value)}});
}

Expr::Expr(const Coord& c) : Expr(atom(c)) {}

Expr Expr::atom(Atom a) {
  if (auto* f = std::get_if<FunctionApp>(&a)) {
    if (f->derivatives.empty()) f->derivatives.assign(f->args.size(), 0);
    if (f->derivatives.size() != f->args.size()) {
      throw DomainError("derivative record of '" + f->name + "' does not match its arity");
    }
  }
  TermMap t;
  t.emplace(Monomial{Factor{std::move(a), 1}}, Rational(1));
  return Expr(std::make_shared<const TermMap>(std::move(t)));
}

Expr Expr::function(std::string name, std::vector<Expr> args) {
  std::vector<int> d(args.size(), 0);
  return atom(FunctionApp{std::move(name), std::move(args), std::move(d)});
}

Expr Expr::from_terms(TermMap terms) {
  for (auto it = terms.begin(); it != terms.end();) {
    it = it->second == 0 ? terms.erase(it) : std::next(it);
  }
  if (terms.empty()) return Expr();
  check_size(terms.size());
  return Expr(std::make_shared<const TermMap>(std::move(terms)));
}

const TermMap& Expr::terms() const { return terms_ ? *terms_ : empty_terms(); }

bool Expr::is_constant() const {
  return is_zero() || (size() == 1 && terms().begin()->first.empty());
}

std::optional<Rational> Expr::constant() const {
  if (is_zero()) return Rational(0);
  if (!is_constant()) return std::nullopt;
  return terms().begin()->second;
}

std::optional<Coord> Expr::as_coord() const {
  if (size() != 1) return std::nullopt;
  const auto& [m, c] = *terms().begin();
  if (c != 1 || m.size() != 1 || m[0].power != 1) return std::nullopt;
  if (const auto* coord = std::get_if<Coord>(&m[0].atom)) return *coord;
  return std::nullopt;
}

CoordSet Expr::coordinates() const {
  CoordSet out;
  collect(*this, out);
  return out;
}

bool Expr::mentions(const Coord& c) const { return coordinates().count(c) != 0; }

bool Expr::mentions_any(const CoordSet& cs) const {
  auto mine = coordinates();
  return std::any_of(cs.begin(), cs.end(), [&](const Coord& c) { return mine.count(c) != 0; });
}

bool Expr::has_functions() const {
  for (const auto& [m, c] : terms()) {
    for (const auto& f : m) {
      if (std::holds_alternative<FunctionApp>(f.atom)) return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// arithmetic

Expr Expr::operator-() const {
  TermMap t = terms();
  for (auto& [m, c] : t) c = -c;
  return from_terms(std::move(t));
}

Expr& Expr::operator+=(const Expr& other) {
  if (other.is_zero()) return *this;
  if (is_zero()) return *this = other;
  TermMap t = terms();
  for (const auto& [m, c] : other.terms()) accumulate(t, m, c);
  return *this = from_terms(std::move(t));
}

Expr& Expr::operator-=(const Expr& other) { return *this += -other; }

Expr& Expr::operator*=(const Expr& other) {
  if (is_zero() || other.is_zero()) return *this = Expr();
  TermMap t;
  for (const auto& [ma, ca] : terms()) {
    for (const auto& [mb, cb] : other.terms()) {
      accumulate(t, multiply(ma, mb), ca * cb);
    }
    check_size(t.size());
  }
  return *this = from_terms(std::move(t));
}

Expr pow(const Expr& base, unsigned exponent) {
  Expr result(1);
  Expr square = base;
  while (exponent) {
    if (exponent & 1U) result *= square;
    exponent >>= 1U;
    if (exponent) square *= square;
  }
  return result;
}

// ---------------------------------------------------------------------------
// calculus

Expr diff(const Expr& e, const Coord& c) {
  TermMap direct;
  Expr chain;
  for (const auto& [m, coef] : e.terms()) {
    for (std::size_t pos = 0; pos < m.size(); ++pos) {
      const Factor& f = m[pos];
      if (const auto* atom = std::get_if<Coord>(&f.atom)) {
        if (*atom == c) accumulate(direct, lower(m, pos), coef * f.power);
        continue;
      }
      const auto& app = std::get<FunctionApp>(f.atom);
      for (std::size_t slot = 0; slot < app.args.size(); ++slot) {
        Expr inner = diff(app.args[slot], c);
        if (inner.is_zero()) continue;
        FunctionApp partial = app;
        ++partial.derivatives[slot];
        TermMap rest;
        rest.emplace(lower(m, pos), coef * f.power);
        chain += Expr::from_terms(std::move(rest)) * Expr::atom(std::move(partial)) * inner;
      }
    }
  }
  return Expr::from_terms(std::move(direct)) + chain;
}

Expr diff(const Expr& e, const std::vector<Coord>& coords, const MultiIndex& alpha) {
  Expr out = e;
  for (std::size_t k = 0; k < coords.size() && k < alpha.size(); ++k) {
    for (int t = 0; t < alpha[k]; ++t) out = diff(out, coords[k]);
  }
  return out;
}

namespace {

Expr subst_atom(const Atom& a, const Bindings& b) {
  if (const auto* c = std::get_if<Coord>(&a)) {
    auto it = b.find(*c);
    return it == b.end() ? Expr(*c) : it->second;
  }
  FunctionApp app = std::get<FunctionApp>(a);
  for (auto& arg : app.args) arg = subst(arg, b);
  return Expr::atom(std::move(app));
}

}  // namespace

Expr subst(const Expr& e, const Bindings& bindings) {
  CoordSet keys;
  for (const auto& [k, v] : bindings) keys.insert(k);
  for (const auto& [k, v] : bindings) {
    for (const auto& c : v.coordinates()) {
      if (keys.count(c)) {
        throw DomainError("cyclic bindings: '" + c.name + "' is both substituted and used in the replacement for '" +
                          k.name + "'");
      }
    }
  }
  if (!e.mentions_any(keys)) return e;
  Expr out;
  for (const auto& [m, coef] : e.terms()) {
    Expr term(coef);
    for (const auto& f : m) term *= pow(subst_atom(f.atom, bindings), static_cast<unsigned>(f.power));
    out += term;
  }
  return out;
}

// ---------------------------------------------------------------------------
// rendering

std::string Expr::str() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, coef] : terms()) {
    bool negative = coef < 0;
    Rational magnitude = negative ? Rational(-coef) : coef;
    std::string body;
    if (m.empty()) {
      body = to_string(magnitude);
    } else {
      if (magnitude != 1) body = to_string(magnitude) + "*";
      bool lead = true;
      for (const Factor* f : display_order(m)) {
        if (!lead) body += "*";
        lead = false;
        body += atom_str(f->atom);
        if (f->power != 1) body += "^" + std::to_string(f->power);
      }
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

std::string Expr::tex() const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [m, coef] : terms()) {
    bool negative = coef < 0;
    Rational magnitude = negative ? Rational(-coef) : coef;
    std::string body;
    if (m.empty() || magnitude != 1) body = rational_tex(magnitude);
    for (const Factor* f : display_order(m)) {
      if (!body.empty()) body += " ";
      std::string a = atom_tex(f->atom);
      if (f->power != 1) {
        if (std::holds_alternative<FunctionApp>(f->atom)) a = "\\left(" + a + "\\right)";
        a += "^{" + std::to_string(f->power) + "}";
      }
      body += a;
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

}  // namespace jetham::sym
