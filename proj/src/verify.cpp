#include "eqp/verify.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>
#include <thread>
#include <type_traits>

#include "eqp/catalog.hpp"
#include "eqp/companion.hpp"
#include "eqp/families.hpp"

namespace eqp {

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Undecided: return "undecided";
    case Status::Skipped: return "skipped";
    case Status::Info: return "info";
  }
  return "?";
}

void Report::add(std::string case_id, std::string check, std::string expected, std::string computed, Status s) {
  rows.push_back({std::move(case_id), std::move(check), std::move(expected), std::move(computed), s});
}

void Report::expect(std::string case_id, std::string check, const std::string& expected, const std::string& computed) {
  add(std::move(case_id), std::move(check), expected, computed, expected == computed ? Status::Pass : Status::Fail);
}

void Report::append(const Report& o) {
  rows.insert(rows.end(), o.rows.begin(), o.rows.end());
  notes.insert(notes.end(), o.notes.begin(), o.notes.end());
}

size_t Report::count(Status s) const {
  return static_cast<size_t>(std::count_if(rows.begin(), rows.end(), [&](const ReportRow& r) { return r.status == s; }));
}

namespace {

std::string cell(std::string s) {
  for (auto& c : s)
    if (c == '\t' || c == '\n' || c == '\r') c = ' ';
  return s;
}

std::string yes(bool b) { return b ? "yes" : "no"; }

}  // namespace

std::string Report::tsv() const {
  std::string s = "case\tcheck\texpected\tcomputed\tstatus\n";
  for (const auto& r : rows)
    s += cell(r.case_id) + "\t" + cell(r.check) + "\t" + cell(r.expected) + "\t" + cell(r.computed) + "\t" +
         status_name(r.status) + "\n";
  return s;
}

std::string Report::summary() const {
  std::ostringstream os;
  os << suite << ": " << (pass() ? "PASS" : "FAIL") << " (" << rows.size() << " rows: " << count(Status::Pass)
     << " pass, " << count(Status::Fail) << " fail, " << count(Status::Undecided) << " undecided, "
     << count(Status::Skipped) << " skipped, " << count(Status::Info) << " info)\n";
  for (const auto& n : notes) os << "  note: " << n << "\n";
  size_t shown = 0;
  for (const auto& r : rows) {
    if (r.status != Status::Fail && r.status != Status::Undecided) continue;
    if (++shown > 20) {
      os << "  ...\n";
      break;
    }
    os << "  " << status_name(r.status) << ": " << r.case_id << " [" << r.check << "] expected " << r.expected
       << ", computed " << r.computed << "\n";
  }
  return os.str();
}

// ---- tables ----

Report verify_tits_tables() {
  Report r;
  r.suite = "tables";
  for (const auto& id : dim_table_ids()) {
    const DimTable& t = dim_table(id);
    for (const auto& row : t.rows)
      r.expect(id + " T=" + row.type + " " + format_tuple(row.d), "tits-form", std::to_string(row.f),
               std::to_string(tits_form(*t.poset, row.d)));
    if (t.mu) {
      r.expect(id + " mu " + format_tuple(*t.mu), "tits-form", "0", std::to_string(tits_form(*t.poset, *t.mu)));
      std::string got;
      try {
        auto m = minimal_imaginary_root(*t.poset);
        got = m ? format_tuple(*m) : "none";
      } catch (const std::exception& e) {
        got = std::string("error: ") + e.what();
      }
      r.expect(id + " mu", "minimal-imaginary-root", format_tuple(*t.mu), got);
    }
  }
  for (const auto& f : families())
    for (long k = 1; k <= 5; ++k) {
      auto fd = sincere_dims(f.poset, k);
      r.expect(f.poset + " k=" + std::to_string(k) + " " + format_tuple(fd->d), "family-tits-form",
               std::to_string(fd->f), std::to_string(tits_form(sincere_poset(f.poset), fd->d)));
    }
  return r;
}

// ---- subspace predicates ----

namespace {

using Checks = std::vector<std::pair<std::string, bool>>;

// Conditions every indecomposable of F15, F17, F18, K6, A25 satisfies;
// empty for other posets.
template <class B>
Checks hull_conditions_impl(const CorepSpaces<B>& S) {
  const Poset& P = *S.P;
  const std::string& name = P.name();
  Checks out;
  auto U = [&](const char* id) -> const FSub<B>& { return S.U[P.index(id)]; };
  if (name == "F17") {
    out.push_back({"hull(U_a) = U0", U("a").hull().is_full()});
    out.push_back({"U_b = U0", U("b").is_full()});
  }
  if (name == "F15" || name == "F18") {
    out.push_back({"hull(U_b) = U0", U("b").hull().is_full()});
    out.push_back({"hull(U_a) + U_zeta = U0", U("a").hull().sum(U("zeta")).is_full()});
  }
  if (name == "F18") out.push_back({"hull(U_a) + U_b = U0", U("a").hull().sum(U("b")).is_full()});
  if (name == "K6" || name == "A25") {
    const auto &a = U("a"), &b = U("b");
    bool hh = a.hull().sum(b.hull()).is_full();
    out.push_back({"U_a = U_b = 0 or hull(U_a) + hull(U_b) = U0", (a.is_zero() && b.is_zero()) || hh});
    out.push_back({"U_a = 0 or hull(U_a) + hull(U_b) = U0 = hull(U_a) + U_b",
                   a.is_zero() || (hh && a.hull().sum(b).is_full())});
  }
  return out;
}

template <class B>
Checks k8_hypotheses_impl(const CorepSpaces<B>& S) {
  const Poset& P = *S.P;
  const auto &a = S.U[P.index("a")], &r = S.U[P.index("rho")], &s = S.U[P.index("sigma")];
  return {{"hull(U_a) = U0", a.hull().is_full()},
          {"cohull(U_a) = 0", a.cohull().is_zero()},
          {"U_a + U_rho = U0", a.sum(r).is_full()},
          {"U_a + U_sigma = U0", a.sum(s).is_full()},
          {"U_a cap U_rho = 0", a.intersect(r).is_zero()},
          {"U_a cap U_sigma = 0", a.intersect(s).is_zero()}};
}

void add_checks(Report& r, const std::string& id, const std::string& group, const Checks& cs) {
  for (const auto& [name, ok] : cs) r.expect(id, group + ": " + name, "holds", ok ? "holds" : "fails");
}

template <class B>
void indecomposable_row(Report& r, const std::string& id, const CorepSpaces<B>& S, const SearchLimits& lim,
                        const std::string& check = "indecomposable") {
  auto res = is_indecomposable(S, lim);
  Status st = Status::Pass;
  if (!res.indecomposable) st = Status::Fail;
  else if (res.certainty == Certainty::Undecided) st = Status::Undecided;
  r.add(id, check, "yes", yes(res.indecomposable) + " (" + certainty_name(res.certainty) + ")", st);
}

template <class B>
void iso_row(Report& r, const std::string& id, const std::string& check, const IsoResult& res, bool expected = true) {
  Status st = res.iso == expected ? Status::Pass : Status::Fail;
  if (res.certainty == Certainty::Undecided) st = Status::Undecided;
  r.add(id, check, expected ? "iso" : "not-iso", std::string(res.iso ? "iso" : "not-iso") + " (" +
                                                     certainty_name(res.certainty) + ")",
        st);
}

bool sincere(const DimVector& d) {
  if (d.d0 <= 0) return false;
  return std::all_of(d.d.begin(), d.d.end(), [](long v) { return v > 0; });
}

// ---- catalog instance sets ----

enum class Domain { In, Out, Unknown };

template <class B>
struct Instance {
  std::string id;
  MatrixCorep<B> M;
  long f;  // expected Tits value
  enum Kind { Printed, Series, K8 } kind;
  std::pair<Domain, std::string> domain{Domain::In, ""};
};

template <class B>
Poly<B> poly_of(const B& F, std::initializer_list<long> c) {
  Poly<B> p;
  for (long v : c) p.push_back(F.from_int(v));
  return p;
}

// Prime-power monic polynomials of degree 1..maxdeg: all of them over a
// finite field, a fixed list over Q.
template <class B>
std::vector<Poly<B>> series_polys(const Tower<B>& T, int maxdeg) {
  const B& F = T.base();
  std::vector<Poly<B>> out;
  if (F.finite()) {
    for (int d = 1; d <= maxdeg; ++d)
      for (auto& p : enumerate_monic_poly(F, d))
        if (!poly_prime_power_root(F, p).empty()) out.push_back(p);
    return out;
  }
  for (auto p : {poly_of(F, {0, 1}), poly_of(F, {-1, 1}), poly_of(F, {0, 0, 1}), poly_of(F, {1, -2, 1}),
                 poly_of(F, {1, 0, 1}), poly_of(F, {-2, 0, 1}), poly_of(F, {0, 0, 0, 1}), poly_of(F, {-2, 0, 0, 1})})
    if (static_cast<int>(p.size()) - 1 <= maxdeg) out.push_back(p);
  return out;
}

// Coefficient tuples (a0..a_{n-1}) over G for the K8 companions.
template <class B>
std::vector<std::vector<GElem<B>>> k8_coeffs(const Tower<B>& T) {
  std::vector<std::vector<GElem<B>>> out;
  if (T.finite()) {
    for (int d = 1; d <= 2; ++d)
      for (auto& c : enumerate_monic(T, d, Scalars::G)) out.push_back(c);
    return out;
  }
  auto z = T.zero(), o = T.one(), x = T.xi();
  for (auto l : {z, o, T.neg(o), T.from_int(2), x, T.add(o, x), T.neg(x)}) out.push_back({T.neg(l)});
  for (auto c0 : {z, o, x})
    for (auto c1 : {z, o, x}) out.push_back({c0, c1});
  return out;
}

// A root over F of  a u^2 + b u + c.
template <class B>
bool has_root_quadratic(const B& F, const typename B::Element& a, const typename B::Element& b,
                        const typename B::Element& c) {
  if (F.is_zero(a)) return !F.is_zero(b) || F.is_zero(c);
  auto disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), F.mul(a, c)));
  if constexpr (std::is_same_v<B, RationalField>) {
    return sgn(disc) >= 0 && mpz_perfect_square_p(disc.get_num_mpz_t()) && mpz_perfect_square_p(disc.get_den_mpz_t());
  } else {
    for (const auto& u : F.elements())
      if (F.is_zero(F.add(F.add(F.mul(a, F.mul(u, u)), F.mul(b, u)), c))) return true;
    return false;
  }
}

// Some c in G with  c*bar(c) + a1 c + a0 = 0, i.e. t^2 + a1 t + a0 has a
// linear right factor in the twisted ring G[t; bar]. nullopt: undecided.
template <class B>
std::optional<GElem<B>> skew_right_root(const Tower<B>& T, const GElem<B>& a1, const GElem<B>& a0) {
  auto g = [&](const GElem<B>& c) { return T.add(T.add(T.mul(c, T.bar(c)), T.mul(a1, c)), a0); };
  const B& F = T.base();
  if (T.finite()) {
    for (const auto& c : T.elements())
      if (T.is_zero(g(c))) return c;
    return std::nullopt;
  }
  // c = u + v xi:  re: A u^2 + Bq uv + C v^2 + L1 u + L2 v + r0,  im: M1 u + M2 v + s0
  auto A = T.norm(T.one()), C = T.norm(T.xi());
  auto Bq = F.sub(F.sub(T.norm(T.add(T.one(), T.xi())), A), C);
  auto l1 = a1, l2 = T.mul(a1, T.xi());
  auto L1 = l1.re, L2 = l2.re, M1 = l1.im, M2 = l2.im, r0 = a0.re, s0 = a0.im;
  auto root_of = [&](const typename B::Element& a, const typename B::Element& b, const typename B::Element& c)
      -> std::optional<typename B::Element> {
    if (!has_root_quadratic(F, a, b, c)) return std::nullopt;
    if (F.is_zero(a)) return F.is_zero(b) ? F.zero() : F.neg(F.mul(c, F.inv(b)));
    auto disc = F.sub(F.mul(b, b), F.mul(F.from_int(4), F.mul(a, c)));
    typename B::Element sq;
    if constexpr (std::is_same_v<B, RationalField>) {
      mpz_class n, d;
      mpz_sqrt(n.get_mpz_t(), disc.get_num_mpz_t());
      mpz_sqrt(d.get_mpz_t(), disc.get_den_mpz_t());
      sq = mpq_class(n, d);
    }
    return F.mul(F.sub(sq, b), F.inv(F.mul(F.from_int(2), a)));
  };
  if (!F.is_zero(M2)) {
    // v = k u + e
    auto k = F.neg(F.mul(M1, F.inv(M2))), e = F.neg(F.mul(s0, F.inv(M2)));
    auto qa = F.add(F.add(A, F.mul(Bq, k)), F.mul(C, F.mul(k, k)));
    auto qb = F.add(F.add(F.add(F.mul(Bq, e), F.mul(F.from_int(2), F.mul(C, F.mul(k, e)))), L1), F.mul(L2, k));
    auto qc = F.add(F.add(F.mul(C, F.mul(e, e)), F.mul(L2, e)), r0);
    auto u = root_of(qa, qb, qc);
    if (!u) return std::nullopt;
    return T.make(*u, F.add(F.mul(k, *u), e));
  }
  if (!F.is_zero(M1)) {
    auto u = F.neg(F.mul(s0, F.inv(M1)));
    auto v = root_of(C, F.add(F.mul(Bq, u), L2), F.add(F.add(F.mul(A, F.mul(u, u)), F.mul(L1, u)), r0));
    if (!v) return std::nullopt;
    return T.make(u, *v);
  }
  if (!F.is_zero(s0)) return std::nullopt;
  // a1 = 0: a norm equation; small search only
  for (long den = 1; den <= 12; ++den)
    for (long nu = -24; nu <= 24; ++nu)
      for (long nv = -24; nv <= 24; ++nv) {
        GElem<B> c = T.make(F.mul(F.from_int(nu), F.inv(F.from_int(den))), F.mul(F.from_int(nv), F.inv(F.from_int(den))));
        if (T.is_zero(g(c))) return c;
      }
  return std::nullopt;
}

// Whether the companion of t^n + c_{n-1} t^{n-1} + ... + c_0 lies in the K8
// series parameter set: a prime power over G for the untwisted char-2 form,
// an irreducible twisted polynomial (degree <= 2) otherwise.
template <class B>
std::pair<Domain, std::string> k8_domain(const Tower<B>& T, K8Variant v, const std::vector<GElem<B>>& c) {
  if (c.size() == 1) return {Domain::In, ""};
  if (v == K8Variant::Char2) {
    if constexpr (std::is_same_v<B, PrimeField>) {
      Poly<Tower<B>> p(c.begin(), c.end());
      p.push_back(T.one());
      if (poly_prime_power_root(T, p).empty()) return {Domain::Out, "not a prime power over G"};
      return {Domain::In, ""};
    }
    return {Domain::Unknown, "char-2 form over an infinite field"};
  }
  if (c.size() != 2) return {Domain::Unknown, "twisted irreducibility only decided up to degree 2"};
  if (auto r = skew_right_root(T, c[1], c[0])) return {Domain::Out, "twisted right root " + T.str(*r)};
  if (!T.finite() && T.is_zero(c[1]) && T.in_base(c[0])) return {Domain::Unknown, "norm equation without small solution"};
  return {Domain::In, ""};
}

template <class B>
std::string gpoly_str(const Tower<B>& T, const std::vector<GElem<B>>& coeffs) {
  Poly<Tower<B>> p(coeffs.begin(), coeffs.end());
  p.push_back(T.one());
  return poly_str(T, p);
}

template <class B>
std::optional<K8Variant> k8_variant_for(const Tower<B>& T) {
  if (T.inseparable()) return K8Variant::Inseparable;
  if (T.characteristic() == 2) return K8Variant::Char2;
  return K8Variant::Separable;
}

template <class B>
std::vector<Instance<B>> catalog_instances(const Tower<B>& T) {
  std::vector<Instance<B>> out;
  for (auto& M : printed_matrices(T)) {
    std::string id = M.label.find('(') != std::string::npos ? M.label
                                                             : M.P->name() + (M.label.empty() ? "" : "-" + M.label);
    long f = M.printed_f.value_or(-1);
    out.push_back({id, std::move(M), f, Instance<B>::Printed});
  }
  for (size_t n = 1; n <= 3; ++n) out.push_back({"K6 discrete n=" + std::to_string(n), k6_discrete(T, n), 0, Instance<B>::Series});
  const B& F = T.base();
  for (const auto& p : series_polys(T, 3))
    out.push_back({"K6 series " + poly_str(F, p), k6_series(T, frobenius_companion(T, lift_coeffs(T, p), Scalars::F)), 0,
                   Instance<B>::Series});
  for (const auto& p : series_polys(T, 2))
    out.push_back({"K7 series " + poly_str(F, p), k7_series(T, frobenius_companion(T, lift_coeffs(T, p), Scalars::F)), 0,
                   Instance<B>::Series});
  auto v = k8_variant_for(T);
  for (const auto& c : k8_coeffs(T))
    out.push_back({"K8 " + k8_variant_name(*v) + " " + gpoly_str(T, c), k8_series(T, *v, frobenius_companion(T, c)), 0,
                   Instance<B>::K8, k8_domain(T, *v, c)});
  return out;
}

}  // namespace

template <class B>
Report verify_catalog(const Tower<B>& T, const SearchLimits& lim) {
  Report r;
  r.suite = "catalog " + T.name();
  auto insts = catalog_instances(T);
  for (const auto& in : insts) {
    CorepSpaces<B> S = spaces_of(in.M);
    if (in.kind == Instance<B>::K8) {
      if (in.domain.first == Domain::Out) {
        r.add(in.id, "series-domain", "in", "excluded: " + in.domain.second, Status::Info);
        continue;
      }
      if (in.domain.first == Domain::Unknown) {
        r.add(in.id, "series-domain", "in", in.domain.second, Status::Undecided);
        continue;
      }
      auto hyp = k8_hypotheses_impl(S);
      std::string failed;
      for (const auto& [name, ok] : hyp)
        if (!ok) failed += (failed.empty() ? "" : "; ") + name;
      if (!failed.empty()) {
        r.add(in.id, "k8-hypotheses", "holds", "excluded: " + failed + " fails", Status::Info);
        continue;
      }
      add_checks(r, in.id, "k8-hypotheses", hyp);
    }
    r.expect(in.id, "reduced", "yes", yes(is_reduced(in.M)));
    r.expect(in.id, "tits-form", std::to_string(in.f), std::to_string(tits_form(*in.M.P, in.M.dims())));
    indecomposable_row(r, in.id, S, lim);
    add_checks(r, in.id, "hull-conditions", hull_conditions_impl(S));
    if (T.duality_enabled()) iso_row<B>(r, in.id, "double-dual", are_isomorphic(dual_corep(dual_corep(S)), S, lim));
  }
  if (T.duality_enabled()) {
    auto find = [&](const std::string& id) -> const Instance<B>& {
      for (const auto& in : insts)
        if (in.id == id) return in;
      throw CorepError("missing catalog instance " + id);
    };
    const auto& k6 = find("4(K6-4)");
    CorepSpaces<B> S6 = spaces_of(k6.M);
    iso_row<B>(r, k6.id, "self-dual", are_isomorphic(dual_corep(S6), S6, lim));
    auto top = adjoin_point(S6, known_poset("A25"), "eta", Side::Top);
    iso_row<B>(r, "4(A25-5)", "top-adjoin of 4(K6-4) at eta", are_isomorphic(top.V, spaces_of(find("4(A25-5)").M), lim));
    iso_row<B>(r, "4(A25-5)", "adjoin choice-independence", top.choice_independent);
    auto bot = adjoin_point(S6, known_poset("A25*"), "eta", Side::Bottom);
    iso_row<B>(r, "4(A25*-5)", "bottom-adjoin of 4(K6-4) at eta",
               are_isomorphic(bot.V, spaces_of(find("4(A25*-5)").M), lim));
    iso_row<B>(r, "4(A25*-5)", "adjoin choice-independence", bot.choice_independent);
    for (const auto& in : insts) {
      if (in.kind != Instance<B>::Printed || in.M.P->name()[0] == 'F') continue;
      CorepSpaces<B> S = spaces_of(in.M);
      if (!sincere(dim_vector(S))) continue;
      CorepSpaces<B> C = sincere_dual_construction(S);
      r.expect(in.id, "sincere-dual-construction sincere on " + C.P->name(), "yes", yes(sincere(dim_vector(C))));
    }
  }
  // Two initial corepresentations of A25 are printed as F14-B; only one
  // matches the d0 of its type.
  std::string got;
  for (const auto& in : insts)
    if (in.M.P->name() == "F14" && in.M.label != "A") got += (got.empty() ? "" : ", ") + in.id + " d0=" + std::to_string(in.M.d0);
  r.add("A25-2 initial (printed as F14-B)", "d0 of the initial corepresentation", "2", got, Status::Info);
  return r;
}

template <class B>
std::vector<std::pair<std::string, bool>> hull_conditions(const CorepSpaces<B>& S) {
  return hull_conditions_impl(S);
}
template <class B>
std::vector<std::pair<std::string, bool>> k8_hypotheses(const CorepSpaces<B>& S) {
  return k8_hypotheses_impl(S);
}

template Report verify_catalog<PrimeField>(const FiniteTower&, const SearchLimits&);
template Report verify_catalog<RationalField>(const RationalTower&, const SearchLimits&);
template std::vector<std::pair<std::string, bool>> hull_conditions<PrimeField>(const CorepSpaces<PrimeField>&);
template std::vector<std::pair<std::string, bool>> hull_conditions<RationalField>(const CorepSpaces<RationalField>&);
template std::vector<std::pair<std::string, bool>> k8_hypotheses<PrimeField>(const CorepSpaces<PrimeField>&);
template std::vector<std::pair<std::string, bool>> k8_hypotheses<RationalField>(const CorepSpaces<RationalField>&);

// ---- brute force ----

size_t default_threads() {
  if (const char* e = std::getenv("EQP_THREADS")) {
    long v = std::strtol(e, nullptr, 10);
    if (v >= 1) return static_cast<size_t>(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h ? h : 1;
}

std::vector<DimVector> box_vectors(const Poset& P, const Box& box) {
  std::vector<DimVector> out;
  if (box.d0 < 1) return out;
  DimVector d{1, std::vector<long>(P.size(), 0)};
  while (true) {
    out.push_back(d);
    bool carry = true;
    for (size_t i = P.size(); carry && i-- > 0;) {
      if (++d.d[i] <= box.d[i]) carry = false;
      else d.d[i] = 0;
    }
    if (carry && ++d.d0 > box.d0) return out;
  }
}

namespace {

using FS = FSub<PrimeField>;
using GF = GElem<PrimeField>;

// Every k x m reduced row echelon matrix with entries from elems (elems[0]
// is zero, one is the unit); visit returns false to stop.
template <class E, class Visit>
bool for_each_rref(size_t k, size_t m, const std::vector<E>& elems, const E& one, Visit visit) {
  if (k > m) return true;
  std::vector<size_t> piv(k);
  for (size_t i = 0; i < k; ++i) piv[i] = i;
  while (true) {
    std::vector<std::pair<size_t, size_t>> slots;
    std::vector<char> is_piv(m, 0);
    for (auto p : piv) is_piv[p] = 1;
    for (size_t r = 0; r < k; ++r)
      for (size_t j = piv[r] + 1; j < m; ++j)
        if (!is_piv[j]) slots.push_back({r, j});
    std::vector<size_t> idx(slots.size(), 0);
    while (true) {
      std::vector<std::vector<E>> M(k, std::vector<E>(m, elems[0]));
      for (size_t r = 0; r < k; ++r) M[r][piv[r]] = one;
      for (size_t s = 0; s < slots.size(); ++s) M[slots[s].first][slots[s].second] = elems[idx[s]];
      if (!visit(M)) return false;
      size_t s = 0;
      while (s < slots.size() && ++idx[s] == elems.size()) idx[s++] = 0;
      if (s == slots.size()) break;
    }
    // next pivot combination
    if (k == 0) return true;
    size_t i = k;
    while (i > 0 && piv[i - 1] == m - k + (i - 1)) --i;
    if (i == 0) return true;
    ++piv[i - 1];
    for (size_t j = i; j < k; ++j) piv[j] = piv[j - 1] + 1;
  }
}

// Subspaces W of G^n containing R with dim(W/R) = k, over F (weak) or G
// (strong, R a G-subspace).
template <class Visit>
bool for_each_extension(const FiniteTower& T, const FS& R, size_t k, bool strong, Visit visit) {
  size_t n = R.ambient();
  const PrimeField& F = T.base();
  if (!strong) {
    std::vector<char> piv(2 * n, 0);
    const auto& b = R.basis();
    for (size_t i = 0; i < b.rows(); ++i)
      for (size_t j = 0; j < 2 * n; ++j)
        if (!F.is_zero(b(i, j))) {
          piv[j] = 1;
          break;
        }
    std::vector<size_t> comp;
    for (size_t j = 0; j < 2 * n; ++j)
      if (!piv[j]) comp.push_back(j);
    return for_each_rref(k, comp.size(), F.elements(), F.one(), [&](const auto& M) {
      Mat<PrimeField> rows = b;
      if (rows.rows() == 0) rows = Mat<PrimeField>::with_cols(2 * n);
      for (const auto& row : M) {
        std::vector<PrimeField::Element> v(2 * n, F.zero());
        for (size_t j = 0; j < comp.size(); ++j) v[comp[j]] = row[j];
        rows.append_row(v);
      }
      return visit(FS::from_rows(T, n, std::move(rows)));
    });
  }
  std::vector<GVec<PrimeField>> comp;
  FS cur = R;
  for (size_t i = 0; i < n; ++i) {
    GVec<PrimeField> e(n, T.zero());
    e[i] = T.one();
    if (cur.contains_vector(e)) continue;
    comp.push_back(e);
    cur = cur.sum(FS::span(T, n, {e}, Scalars::G));
  }
  return for_each_rref(k, comp.size(), T.elements(), T.one(), [&](const auto& M) {
    std::vector<GVec<PrimeField>> ws;
    for (const auto& row : M) {
      GVec<PrimeField> w(n, T.zero());
      for (size_t j = 0; j < comp.size(); ++j)
        for (size_t i = 0; i < n; ++i) w[i] = T.add(w[i], T.mul(row[j], comp[j][i]));
      ws.push_back(w);
    }
    return visit(R.sum(FS::span(T, n, ws, Scalars::G)));
  });
}

std::vector<size_t> linear_extension(const Poset& P) {
  std::vector<size_t> order, left(P.size());
  for (size_t i = 0; i < P.size(); ++i) left[i] = i;
  while (!left.empty())
    for (size_t k = 0; k < left.size(); ++k) {
      size_t x = left[k];
      bool minimal = true;
      for (size_t y : left)
        if (P.lt(y, x)) minimal = false;
      if (minimal) {
        order.push_back(x);
        left.erase(left.begin() + static_cast<long>(k));
        break;
      }
    }
  return order;
}

}  // namespace

OracleVector brute_force_vector(const FiniteTower& T, PosetRef P, const DimVector& d, const OracleOptions& opt) {
  OracleVector out;
  out.d = d;
  if (d.d.size() != P->size()) throw CorepError("dimension vector does not fit poset " + P->name());
  size_t n = static_cast<size_t>(d.d0);
  auto order = linear_extension(*P);
  CorepSpaces<PrimeField> S{&T, P, n, std::vector<FS>(P->size(), FS(T, n))};
  std::function<bool(size_t)> rec = [&](size_t i) -> bool {
    if (i == order.size()) {
      if (++out.candidates > opt.budget) {
        out.status = Status::Skipped;
        out.classes.clear();
        return false;
      }
      for (const auto& rep : out.classes)
        if (detail::local_iso(S, rep)) return true;
      auto ind = is_indecomposable(S, opt.lim);
      if (ind.certainty == Certainty::Undecided) out.status = Status::Undecided;
      else if (ind.indecomposable) out.classes.push_back(S);
      return true;
    }
    size_t x = order[i];
    FS R = radical(S, x);
    return for_each_extension(T, R, static_cast<size_t>(d.d[x]), P->strong_point(x), [&](FS W) {
      S.U[x] = std::move(W);
      return rec(i + 1);
    });
  };
  rec(0);
  return out;
}

std::vector<OracleVector> brute_force_indecomposables(const FiniteTower& T, PosetRef P, const Box& box,
                                                      const OracleOptions& opt) {
  auto vecs = box_vectors(*P, box);
  std::vector<OracleVector> out(vecs.size());
  size_t threads = std::max<size_t>(1, std::min(opt.threads ? opt.threads : default_threads(), vecs.size()));
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i; (i = next++) < vecs.size();) out[i] = brute_force_vector(T, P, vecs[i], opt);
  };
  if (threads == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (size_t t = 0; t < threads; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }
  return out;
}

namespace {

bool within_box(const DimVector& d, const Box& b) {
  if (d.d0 < 1 || d.d0 > b.d0) return false;
  for (size_t i = 0; i < d.d.size(); ++i)
    if (d.d[i] > b.d[i]) return false;
  return true;
}

}  // namespace

Report verify_theorem_d(PosetRef P, const Box& box, const FiniteTower& T, const FiniteTower* spot,
                        const OracleOptions& opt) {
  Report r;
  r.suite = "theorem-d " + P->name() + " " + T.name();
  auto res = brute_force_indecomposables(T, P, box, opt);
  size_t classes = 0, held = 0;
  bool conditions = false;
  for (const auto& v : res) {
    RootClass rc = classify_vector(*P, v.d);
    size_t c = v.classes.size();
    std::string exp;
    bool ok = false;
    switch (rc.kind) {
      case RootKind::AdmissibleRoot:
      case RootKind::SpecialListed:
        exp = "1";
        ok = c == 1;
        break;
      case RootKind::ImaginaryRoot:
        exp = ">=2";
        ok = c >= 2;
        break;
      case RootKind::Other:
        exp = "0";
        ok = c == 0;
        break;
    }
    if (v.status == Status::Skipped) {
      r.add(format_tuple(v.d), root_class_str(rc), exp, "over budget (" + std::to_string(opt.budget) + ")",
            Status::Skipped);
      continue;
    }
    r.add(format_tuple(v.d), root_class_str(rc), exp, std::to_string(c),
          v.status == Status::Undecided ? Status::Undecided : (ok ? Status::Pass : Status::Fail));
    for (const auto& rep : v.classes) {
      auto cs = hull_conditions_impl(rep);
      if (cs.empty()) continue;
      conditions = true;
      ++classes;
      if (std::all_of(cs.begin(), cs.end(), [](const auto& p) { return p.second; })) ++held;
    }
    if (spot && rc.kind == RootKind::ImaginaryRoot && v.d.d0 == 1) {
      auto sv = brute_force_vector(*spot, P, v.d, opt);
      Status st = sv.status != Status::Pass ? sv.status : (sv.classes.size() > c ? Status::Pass : Status::Fail);
      r.add(format_tuple(v.d), "class count over " + spot->name(), "> " + std::to_string(c),
            std::to_string(sv.classes.size()), st);
    }
  }
  if (conditions)
    r.expect("all oracle classes", "hull-conditions", std::to_string(classes) + " of " + std::to_string(classes),
             std::to_string(held) + " of " + std::to_string(classes));
  // every catalog corepresentation inside the box matches exactly one class
  for (const auto& in : catalog_instances(T)) {
    if (in.M.P->name() != P->name() || !(*in.M.P == *P) || !within_box(in.M.dims(), box)) continue;
    CorepSpaces<PrimeField> S = spaces_of(in.M);
    DimVector d = dim_vector(S);
    size_t hits = 0;
    const OracleVector* ov = nullptr;
    for (const auto& v : res)
      if (v.d == d) ov = &v;
    if (!ov || ov->status != Status::Pass) {
      r.add(in.id, "matches oracle classes", "1", "oracle vector " + format_tuple(d) + " not enumerated",
            ov ? ov->status : Status::Skipped);
      continue;
    }
    for (const auto& rep : ov->classes)
      if (detail::local_iso(S, rep)) ++hits;
    r.expect(in.id, "matches oracle classes", "1", std::to_string(hits));
  }
  return r;
}

// ---- series separation ----

Report verify_series_separation(const std::string& id, size_t n, const FiniteTower& T, const SearchLimits& lim) {
  Report r;
  r.suite = "series " + id + " n=" + std::to_string(n) + " " + T.name();
  if (!T.finite()) throw CorepError("series separation needs a finite tower");
  if (n == 0) throw CorepError("block size must be at least 1");
  const PrimeField& F = T.base();
  struct Item {
    std::string name;
    GMat<PrimeField> X;
    CorepSpaces<PrimeField> S;
    bool prime_power;
  };
  std::vector<Item> items;
  if (id == "K6" || id == "K7") {
    for (const auto& p : enumerate_monic_poly(F, static_cast<int>(n))) {
      auto X = frobenius_companion(T, lift_coeffs(T, p), Scalars::F);
      auto M = id == "K6" ? k6_series(T, X) : k7_series(T, X);
      items.push_back({poly_str(F, p), X, spaces_of(M), !poly_prime_power_root(F, p).empty()});
    }
  } else if (id == "K8") {
    auto v = *k8_variant_for(T);
    for (const auto& c : enumerate_monic(T, static_cast<int>(n), Scalars::G)) {
      auto X = frobenius_companion(T, c);
      Poly<FiniteTower> p(c.begin(), c.end());
      p.push_back(T.one());
      auto S = spaces_of(k8_series(T, v, X));
      auto dom = k8_domain(T, v, c);
      std::string failed = dom.first == Domain::In ? "" : dom.second;
      for (const auto& [name, ok] : k8_hypotheses_impl(S))
        if (!ok) failed += (failed.empty() ? "" : "; ") + name;
      if (!failed.empty()) {
        r.add("S(" + gpoly_str(T, c) + ")", "series parameter", "admissible", "excluded: " + failed, Status::Info);
        continue;
      }
      items.push_back({gpoly_str(T, c), X, S, !poly_prime_power_root(T, p).empty()});
    }
  } else {
    throw CorepError("series separation is defined for K6, K7 and K8, not " + id);
  }
  auto similar = [&](const GMat<PrimeField>& a, const GMat<PrimeField>& b) {
    if (id == "K8") return similar_finite(T, a, b);
    Mat<PrimeField> fa(a.rows(), a.cols(), F.zero()), fb = fa;
    for (size_t i = 0; i < a.rows(); ++i)
      for (size_t j = 0; j < a.cols(); ++j) {
        fa(i, j) = a(i, j).re;
        fb(i, j) = b(i, j).re;
      }
    return similar_finite(F, fa, fb);
  };
  for (size_t i = 0; i < items.size(); ++i)
    for (size_t j = i; j < items.size(); ++j) {
      bool sim = similar(items[i].X, items[j].X);
      iso_row<PrimeField>(r, "S(" + items[i].name + ") vs S(" + items[j].name + ")", "iso iff similar",
                          are_isomorphic(items[i].S, items[j].S, lim), sim);
    }
  for (const auto& it : items) {
    auto ind = is_indecomposable(it.S, lim);
    r.add("S(" + it.name + ")", "indecomposable vs prime-power polynomial", "prime-power=" + yes(it.prime_power),
          "indecomposable=" + yes(ind.indecomposable) + " (" + certainty_name(ind.certainty) + ")", Status::Info);
  }
  return r;
}

// ---- duality ----

Report verify_duality_suite(PosetRef P, const Box& box, const FiniteTower& T, const OracleOptions& opt) {
  Report r;
  r.suite = "duality " + P->name() + " " + T.name();
  if (!T.duality_enabled()) throw CorepError("duality is not available over " + T.name());
  auto res = brute_force_indecomposables(T, P, box, opt);
  std::vector<CorepSpaces<PrimeField>> reps;
  auto check = [&](const std::string& id, const CorepSpaces<PrimeField>& U) {
    CorepSpaces<PrimeField> D = dual_corep(U);
    r.expect(id, "double-dual iso", "yes", yes(detail::local_iso(dual_corep(D), U)));
    indecomposable_row(r, id, D, opt.lim, "dual indecomposable");
    if (sincere(dim_vector(U))) {
      CorepSpaces<PrimeField> C = sincere_dual_construction(U);
      r.expect(id, "sincere-dual-construction sincere on " + C.P->name(), "yes", yes(sincere(dim_vector(C))));
    }
  };
  for (const auto& v : res) {
    if (v.status != Status::Pass) {
      r.add(format_tuple(v.d), "oracle", "complete", status_name(v.status), v.status);
      continue;
    }
    for (size_t k = 0; k < v.classes.size(); ++k) {
      check(format_tuple(v.d) + " #" + std::to_string(k + 1), v.classes[k]);
      reps.push_back(v.classes[k]);
    }
  }
  CorepSpaces<PrimeField> triv{&T, P, 1, std::vector<FS>(P->size(), FS(T, 1))};
  r.expect("trivial", "double-dual iso", "yes", yes(are_isomorphic(dual_corep(dual_corep(triv)), triv, opt.lim).iso));
  size_t m = std::min<size_t>(reps.size(), 6);
  for (size_t i = 0; i < m; ++i)
    for (size_t j = i + 1; j < m; ++j) {
      auto lhs = dual_corep(direct_sum(reps[i], reps[j]));
      auto rhs = direct_sum(dual_corep(reps[i]), dual_corep(reps[j]));
      iso_row<PrimeField>(r, "class " + std::to_string(i + 1) + " + class " + std::to_string(j + 1), "dual of sum",
                          are_isomorphic(lhs, rhs, opt.lim));
    }
  for (const auto& in : catalog_instances(T)) {
    if (in.kind != Instance<PrimeField>::Printed || !(*in.M.P == *P) || in.M.P->name() != P->name()) continue;
    check(in.id, spaces_of(in.M));
  }
  return r;
}

// ---- subspace calculus ----

namespace {

// Number of k-dimensional subspaces of F_q^n.
std::uint64_t gaussian(std::uint64_t n, std::uint64_t k, std::uint64_t q) {
  std::uint64_t num = 1, den = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    std::uint64_t qn = 1, qd = 1;
    for (std::uint64_t t = 0; t < n - i; ++t) qn *= q;
    for (std::uint64_t t = 0; t < i + 1; ++t) qd *= q;
    num *= qn - 1;
    den *= qd - 1;
  }
  return num / den;
}

}  // namespace

Report verify_subspace_calculus(const FiniteTower& T, size_t nmax) {
  Report r;
  r.suite = "subspace-calculus " + T.name();
  const PrimeField& F = T.base();
  std::uint64_t q = F.size();
  auto elems = F.elements();
  for (size_t n = 1; n <= nmax; ++n) {
    std::string cs = "n=" + std::to_string(n);
    size_t N = 2 * n;
    if (!detail::within(q, N * N, 1u << 20)) {
      r.add(cs, "generator enumeration", "<= 2^20 matrices", std::to_string(q) + "^" + std::to_string(N * N),
            Status::Skipped);
      continue;
    }
    std::map<std::string, FS> subs;
    std::vector<size_t> idx(N * N, 0);
    std::uint64_t generators = 0;
    while (true) {
      Mat<PrimeField> m(N, N, F.zero());
      for (size_t i = 0; i < N * N; ++i) m(i / N, i % N) = elems[idx[i]];
      FS s = FS::from_rows(T, n, m);
      subs.emplace(s.key(), s);
      ++generators;
      size_t i = 0;
      while (i < idx.size() && ++idx[i] == elems.size()) idx[i++] = 0;
      if (i == idx.size()) break;
    }
    std::vector<FS> all;
    for (auto& [k, s] : subs) all.push_back(s);
    std::vector<const FS*> gsubs;
    for (const auto& s : all)
      if (s.is_strong()) gsubs.push_back(&s);
    std::uint64_t want = 0, want_g = 0;
    for (size_t k = 0; k <= N; ++k) want += gaussian(N, k, q);
    for (size_t k = 0; k <= n; ++k) want_g += gaussian(n, k, q * q);
    r.add(cs, "generator matrices", "", std::to_string(generators), Status::Info);
    r.expect(cs, "distinct F-subspaces", std::to_string(want), std::to_string(all.size()));
    r.expect(cs, "G-subspaces among them", std::to_string(want_g), std::to_string(gsubs.size()));
    size_t hull_ok = 0, cohull_ok = 0, inv_ok = 0, ex1 = 0, ex2 = 0, anti_ok = 0, pairs = 0;
    for (const auto& U : all) {
      FS h = U.hull(), c = U.cohull(), p = U.perp();
      bool ok = h.is_strong() && h.contains(U);
      for (const FS* W : gsubs)
        if (W->contains(U) && !W->contains(h)) ok = false;
      hull_ok += ok;
      ok = c.is_strong() && U.contains(c);
      for (const FS* W : gsubs)
        if (U.contains(*W) && !c.contains(*W)) ok = false;
      cohull_ok += ok;
      inv_ok += p.perp() == U && p.dim_f() + U.dim_f() == N;
      ex1 += c.perp() == p.hull();
      ex2 += h.perp() == p.cohull();
      for (const auto& V : all) {
        if (!V.contains(U)) continue;
        ++pairs;
        anti_ok += p.contains(V.perp());
      }
    }
    std::string total = std::to_string(all.size());
    auto of = [&](size_t k, const std::string& t) { return std::to_string(k) + " of " + t; };
    r.expect(cs, "hull is the least G-subspace containing U", of(all.size(), total), of(hull_ok, total));
    r.expect(cs, "cohull is the largest G-subspace inside U", of(all.size(), total), of(cohull_ok, total));
    r.expect(cs, "perp is an involution with complementary dimension", of(all.size(), total), of(inv_ok, total));
    r.expect(cs, "perp(cohull U) = hull(perp U)", of(all.size(), total), of(ex1, total));
    r.expect(cs, "perp(hull U) = cohull(perp U)", of(all.size(), total), of(ex2, total));
    r.expect(cs, "U in V implies perp V in perp U", of(pairs, std::to_string(pairs)), of(anti_ok, std::to_string(pairs)));
  }
  return r;
}

}  // namespace eqp
