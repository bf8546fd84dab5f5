#pragma once

#include <cctype>
#include <cstdint>
#include <gmpxx.h>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace eqp {

struct FieldError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parse an integer or a fraction "n/d" (optional sign) into a rational.
mpq_class parse_rational(std::string_view s);

// Prime field Z/pZ. Elements are stored reduced in [0, p).
class PrimeField {
 public:
  using Element = std::uint64_t;

  explicit PrimeField(std::uint64_t p);

  Element zero() const { return 0; }
  Element one() const { return 1 % p_; }
  Element from_int(long v) const;
  Element from_rational(const mpq_class& v) const;

  Element add(Element a, Element b) const { return (a + b) % p_; }
  Element sub(Element a, Element b) const { return (a + p_ - b) % p_; }
  Element neg(Element a) const { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const {
    return static_cast<Element>((static_cast<unsigned __int128>(a) * b) % p_);
  }
  Element inv(Element a) const;
  bool is_zero(Element a) const { return a == 0; }
  bool eq(Element a, Element b) const { return a == b; }
  int cmp(Element a, Element b) const { return a < b ? -1 : (a > b ? 1 : 0); }

  bool finite() const { return true; }
  std::uint64_t size() const { return p_; }
  std::uint64_t characteristic() const { return p_; }
  std::vector<Element> elements() const;

  std::string str(Element a) const { return std::to_string(a); }
  Element parse(std::string_view s) const { return from_rational(parse_rational(s)); }
  std::string name() const { return "GF(" + std::to_string(p_) + ")"; }

 private:
  std::uint64_t p_;
};

// The rationals with exact GMP arithmetic.
class RationalField {
 public:
  using Element = mpq_class;

  Element zero() const { return 0; }
  Element one() const { return 1; }
  Element from_int(long v) const { return Element(v); }
  Element from_rational(const mpq_class& v) const { return v; }

  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const {
    if (sgn(a) == 0) throw FieldError("division by zero");
    return 1 / a;
  }
  bool is_zero(const Element& a) const { return sgn(a) == 0; }
  bool eq(const Element& a, const Element& b) const { return a == b; }
  int cmp(const Element& a, const Element& b) const {
    int c = ::cmp(a, b);
    return c < 0 ? -1 : (c > 0 ? 1 : 0);
  }

  bool finite() const { return false; }
  std::uint64_t size() const { return 0; }
  std::uint64_t characteristic() const { return 0; }
  std::vector<Element> elements() const {
    throw FieldError("cannot enumerate an infinite field");
  }

  std::string str(const Element& a) const { return a.get_str(); }
  Element parse(std::string_view s) const { return parse_rational(s); }
  std::string name() const { return "Q"; }
};

// Element re + xi*im of G = F(xi).
template <class B>
struct GElem {
  typename B::Element re, im;
  bool operator==(const GElem&) const = default;
};

// Quadratic extension G = F(xi) with xi^2 + p*xi + q = 0.
template <class B>
class Tower {
 public:
  using Base = B;
  using FE = typename B::Element;
  using Element = GElem<B>;

  static Tower make(const B& base, FE p, FE q, std::string name = "") {
    Tower t(base, p, q, std::move(name));
    if (auto r = t.root()) throw FieldError("minimal polynomial is reducible over the base field: root " + base.str(*r));
    return t;
  }

  const B& base() const { return F_; }
  const FE& p() const { return p_; }
  const FE& q() const { return q_; }
  const std::string& name() const { return name_; }

  Element zero() const { return {F_.zero(), F_.zero()}; }
  Element one() const { return {F_.one(), F_.zero()}; }
  Element xi() const { return {F_.zero(), F_.one()}; }
  Element embed(const FE& a) const { return {a, F_.zero()}; }
  Element make(const FE& re, const FE& im) const { return {re, im}; }
  Element from_int(long v) const { return embed(F_.from_int(v)); }

  Element add(const Element& a, const Element& b) const {
    return {F_.add(a.re, b.re), F_.add(a.im, b.im)};
  }
  Element sub(const Element& a, const Element& b) const {
    return {F_.sub(a.re, b.re), F_.sub(a.im, b.im)};
  }
  Element neg(const Element& a) const { return {F_.neg(a.re), F_.neg(a.im)}; }
  // (a + xi b)(c + xi d) with xi^2 = -q - p xi
  Element mul(const Element& a, const Element& b) const {
    FE bd = F_.mul(a.im, b.im);
    FE re = F_.sub(F_.mul(a.re, b.re), F_.mul(q_, bd));
    FE im = F_.sub(F_.add(F_.mul(a.re, b.im), F_.mul(a.im, b.re)), F_.mul(p_, bd));
    return {re, im};
  }
  Element scale(const FE& c, const Element& a) const { return {F_.mul(c, a.re), F_.mul(c, a.im)}; }
  FE norm(const Element& a) const {
    // a * bar(a) = re^2 - p re im + q im^2
    return F_.add(F_.sub(F_.mul(a.re, a.re), F_.mul(p_, F_.mul(a.re, a.im))),
                  F_.mul(q_, F_.mul(a.im, a.im)));
  }
  Element inv(const Element& a) const {
    FE n = norm(a);
    if (F_.is_zero(n)) throw FieldError("division by zero");
    return scale(F_.inv(n), bar(a));
  }
  Element hat(const Element& a) const { return {a.re, F_.neg(a.im)}; }
  Element bar(const Element& a) const { return {F_.sub(a.re, F_.mul(p_, a.im)), F_.neg(a.im)}; }

  bool is_zero(const Element& a) const { return F_.is_zero(a.re) && F_.is_zero(a.im); }
  bool eq(const Element& a, const Element& b) const { return F_.eq(a.re, b.re) && F_.eq(a.im, b.im); }
  bool in_base(const Element& a) const { return F_.is_zero(a.im); }
  int cmp(const Element& a, const Element& b) const {
    int c = F_.cmp(a.re, b.re);
    return c != 0 ? c : F_.cmp(a.im, b.im);
  }

  bool finite() const { return F_.finite(); }
  std::uint64_t size() const { return F_.size() * F_.size(); }
  std::uint64_t characteristic() const { return F_.characteristic(); }
  bool duality_enabled() const { return F_.is_zero(p_) || F_.characteristic() == 2; }
  // The minimal polynomial has zero derivative.
  bool inseparable() const { return F_.characteristic() == 2 && F_.is_zero(p_); }

  std::vector<Element> elements() const {
    std::vector<Element> out;
    auto base = F_.elements();
    for (const auto& b : base)
      for (const auto& a : base) out.push_back({a, b});
    return out;
  }

  std::string str(const Element& a) const;
  Element parse(std::string_view s) const;

 private:
  Tower(const B& base, FE p, FE q, std::string name)
      : F_(base), p_(std::move(p)), q_(std::move(q)), name_(std::move(name)) {}

  std::optional<FE> root() const;

  B F_;
  FE p_, q_;
  std::string name_;
};

using FiniteTower = Tower<PrimeField>;
using RationalTower = Tower<RationalField>;

// Presets: GF(2) < GF(4) with t^2+t+1, Q < Q(sqrt 2) with t^2-2, GF(3) < GF(9) with t^2+1.
const Tower<PrimeField>& tower_gf2();
const Tower<PrimeField>& tower_gf3();
const Tower<RationalField>& tower_qsqrt2();

// Finite-tower preset lookup by name; throws on unknown names.
const Tower<PrimeField>& finite_tower(std::string_view name);

// ---- polynomials over a field, coefficients low to high ----

template <class K>
using Poly = std::vector<typename K::Element>;

template <class K>
void poly_trim(const K& k, Poly<K>& f) {
  while (!f.empty() && k.is_zero(f.back())) f.pop_back();
}

template <class K>
Poly<K> poly_mul(const K& k, const Poly<K>& a, const Poly<K>& b) {
  if (a.empty() || b.empty()) return {};
  Poly<K> r(a.size() + b.size() - 1, k.zero());
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = k.add(r[i + j], k.mul(a[i], b[j]));
  poly_trim(k, r);
  return r;
}

// Remainder of a modulo b (b nonzero).
template <class K>
Poly<K> poly_rem(const K& k, Poly<K> a, const Poly<K>& b) {
  poly_trim(k, a);
  auto lead = k.inv(b.back());
  while (a.size() >= b.size()) {
    auto c = k.mul(a.back(), lead);
    size_t shift = a.size() - b.size();
    for (size_t i = 0; i < b.size(); ++i) a[shift + i] = k.sub(a[shift + i], k.mul(c, b[i]));
    a.pop_back();
    poly_trim(k, a);
  }
  return a;
}

template <class K>
Poly<K> poly_gcd(const K& k, Poly<K> a, Poly<K> b) {
  poly_trim(k, a);
  poly_trim(k, b);
  while (!b.empty()) {
    auto r = poly_rem(k, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    auto lead = k.inv(a.back());
    for (auto& c : a) c = k.mul(c, lead);
  }
  return a;
}

template <class K>
typename K::Element poly_eval(const K& k, const Poly<K>& f, const typename K::Element& x) {
  auto r = k.zero();
  for (size_t i = f.size(); i-- > 0;) r = k.add(k.mul(r, x), f[i]);
  return r;
}

// Monic polynomials of a given degree over a finite field, listed by the lower
// coefficients (a_0, ..., a_{deg-1}) in lexicographic order of element index,
// a_0 varying fastest.
template <class K>
std::vector<Poly<K>> enumerate_monic_poly(const K& k, int deg) {
  if (!k.finite()) throw FieldError("cannot enumerate monic polynomials over an infinite field");
  if (deg < 0) throw FieldError("negative degree");
  auto elems = k.elements();
  std::vector<Poly<K>> out;
  std::vector<size_t> idx(deg, 0);
  while (true) {
    Poly<K> f;
    for (int i = 0; i < deg; ++i) f.push_back(elems[idx[i]]);
    f.push_back(k.one());
    out.push_back(std::move(f));
    int i = 0;
    while (i < deg && ++idx[i] == elems.size()) idx[i++] = 0;
    if (i == deg) break;
  }
  return out;
}

// Irreducibility over a finite field by trial division with all monic
// polynomials of degree at most deg/2.
template <class K>
bool poly_irreducible_finite(const K& k, const Poly<K>& f) {
  int n = static_cast<int>(f.size()) - 1;
  if (n < 1) return false;
  for (int d = 1; 2 * d <= n; ++d)
    for (const auto& g : enumerate_monic_poly(k, d))
      if (poly_rem(k, f, g).empty()) return false;
  return true;
}

// f = g^m with g monic irreducible; returns g (empty if f is not a prime power).
template <class K>
Poly<K> poly_prime_power_root(const K& k, const Poly<K>& f) {
  int n = static_cast<int>(f.size()) - 1;
  for (int d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    for (const auto& g : enumerate_monic_poly(k, d)) {
      if (!poly_irreducible_finite(k, g)) continue;
      Poly<K> pw{k.one()};
      for (int i = 0; i < n / d; ++i) pw = poly_mul(k, pw, g);
      bool same = pw.size() == f.size();
      for (size_t i = 0; same && i < f.size(); ++i) same = k.eq(pw[i], f[i]);
      if (same) return g;
    }
  }
  return {};
}

template <class K>
std::string poly_str(const K& k, const Poly<K>& f, const std::string& var = "t") {
  std::string out;
  for (size_t i = f.size(); i-- > 0;) {
    if (k.is_zero(f[i])) continue;
    std::string c = k.str(f[i]);
    bool unit = k.eq(f[i], k.one());
    std::string term;
    if (i == 0) term = c;
    else {
      std::string mono = i == 1 ? var : var + "^" + std::to_string(i);
      term = unit ? mono : "(" + c + ")*" + mono;
    }
    if (!out.empty()) out += "+";
    out += term;
  }
  return out.empty() ? "0" : out;
}

// ---- Tower member definitions ----

template <class B>
std::optional<typename Tower<B>::FE> Tower<B>::root() const {
  if (F_.finite()) {
    for (const auto& t : F_.elements()) {
      FE v = F_.add(F_.add(F_.mul(t, t), F_.mul(p_, t)), q_);
      if (F_.is_zero(v)) return t;
    }
  } else {
    if constexpr (std::is_same_v<FE, mpq_class>) {
      mpq_class disc = p_ * p_ - 4 * q_;
      if (sgn(disc) < 0) return std::nullopt;
      if (!mpz_perfect_square_p(disc.get_num_mpz_t()) || !mpz_perfect_square_p(disc.get_den_mpz_t()))
        return std::nullopt;
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), disc.get_num_mpz_t());
      mpz_sqrt(d.get_mpz_t(), disc.get_den_mpz_t());
      mpq_class r = (mpq_class(n, d) - p_) / 2;
      r.canonicalize();
      return r;
    }
  }
  return std::nullopt;
}

template <class B>
std::string Tower<B>::str(const Element& a) const {
  bool re0 = F_.is_zero(a.re), im0 = F_.is_zero(a.im);
  if (im0) return F_.str(a.re);
  std::string imc;
  bool neg = false;
  FE im = a.im;
  if constexpr (std::is_same_v<FE, mpq_class>) {
    if (sgn(im) < 0) {
      neg = true;
      im = -im;
    }
  }
  imc = F_.eq(im, F_.one()) ? "x" : F_.str(im) + "*x";
  if (re0) return (neg ? "-" : "") + imc;
  return F_.str(a.re) + (neg ? "-" : "+") + imc;
}

template <class B>
typename Tower<B>::Element Tower<B>::parse(std::string_view s) const {
  std::string t;
  for (char c : s)
    if (!isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw FieldError("empty element");
  Element acc = zero();
  size_t i = 0;
  while (i < t.size()) {
    bool neg = false;
    if (t[i] == '+' || t[i] == '-') {
      neg = t[i] == '-';
      ++i;
    }
    size_t j = i;
    while (j < t.size() && t[j] != '+' && t[j] != '-') ++j;
    std::string term = t.substr(i, j - i);
    if (term.empty()) throw FieldError("malformed element '" + std::string(s) + "'");
    Element v;
    if (term == "x") v = xi();
    else if (term.size() > 2 && term.substr(term.size() - 2) == "*x")
      v = {F_.zero(), F_.parse(term.substr(0, term.size() - 2))};
    else if (term.find('x') != std::string::npos)
      throw FieldError("malformed element '" + std::string(s) + "'");
    else
      v = embed(F_.parse(term));
    acc = neg ? sub(acc, v) : add(acc, v);
    i = j;
  }
  return acc;
}

}  // namespace eqp
