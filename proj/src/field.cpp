#include "eqp/field.hpp"

namespace eqp {

mpq_class parse_rational(std::string_view s) {
  std::string t(s);
  if (t.empty()) throw FieldError("empty number");
  size_t start = (t[0] == '-' || t[0] == '+') ? 1 : 0;
  auto slash = t.find('/');
  auto digits_ok = [&](size_t a, size_t b) {
    if (a >= b) return false;
    for (size_t i = a; i < b; ++i)
      if (!isdigit(static_cast<unsigned char>(t[i]))) return false;
    return true;
  };
  bool ok = slash == std::string::npos ? digits_ok(start, t.size())
                                       : digits_ok(start, slash) && digits_ok(slash + 1, t.size());
  if (!ok) throw FieldError("malformed number '" + t + "'");
  if (t[0] == '+') t.erase(0, 1);
  mpq_class v;
  if (v.set_str(t, 10) != 0) throw FieldError("malformed number '" + t + "'");
  if (sgn(v.get_den()) == 0) throw FieldError("zero denominator in '" + t + "'");
  v.canonicalize();
  return v;
}

PrimeField::PrimeField(std::uint64_t p) : p_(p) {
  if (p < 2) throw FieldError("modulus must be prime");
  for (std::uint64_t d = 2; d * d <= p; ++d)
    if (p % d == 0) throw FieldError("modulus " + std::to_string(p) + " is not prime");
}

PrimeField::Element PrimeField::from_int(long v) const {
  long m = static_cast<long>(p_);
  long r = v % m;
  if (r < 0) r += m;
  return static_cast<Element>(r);
}

PrimeField::Element PrimeField::from_rational(const mpq_class& v) const {
  mpz_class num = v.get_num() % mpz_class(static_cast<unsigned long>(p_));
  mpz_class den = v.get_den() % mpz_class(static_cast<unsigned long>(p_));
  if (den == 0) throw FieldError("denominator vanishes modulo " + std::to_string(p_));
  if (num < 0) num += static_cast<unsigned long>(p_);
  return mul(static_cast<Element>(num.get_ui()), inv(static_cast<Element>(den.get_ui())));
}

PrimeField::Element PrimeField::inv(Element a) const {
  if (a % p_ == 0) throw FieldError("division by zero");
  // a^(p-2)
  Element r = 1, b = a % p_;
  std::uint64_t e = p_ - 2;
  while (e) {
    if (e & 1) r = mul(r, b);
    b = mul(b, b);
    e >>= 1;
  }
  return r;
}

std::vector<PrimeField::Element> PrimeField::elements() const {
  std::vector<Element> v(p_);
  for (std::uint64_t i = 0; i < p_; ++i) v[i] = i;
  return v;
}

const Tower<PrimeField>& tower_gf2() {
  static const auto t = Tower<PrimeField>::make(PrimeField(2), 1, 1, "gf2");
  return t;
}

const Tower<PrimeField>& tower_gf3() {
  static const auto t = Tower<PrimeField>::make(PrimeField(3), 0, 1, "gf3");
  return t;
}

const Tower<RationalField>& tower_qsqrt2() {
  static const auto t = Tower<RationalField>::make(RationalField(), 0, -2, "qsqrt2");
  return t;
}

const Tower<PrimeField>& finite_tower(std::string_view name) {
  if (name == "gf2") return tower_gf2();
  if (name == "gf3") return tower_gf3();
  throw FieldError("unknown finite tower '" + std::string(name) + "'");
}

}  // namespace eqp
