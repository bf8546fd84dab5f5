#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eqp/companion.hpp"
#include "eqp/field.hpp"
#include "eqp/matrix.hpp"
#include "eqp/poset.hpp"
#include "eqp/subspace.hpp"
#include "eqp/tits.hpp"

namespace eqp {

struct CorepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using PosetRef = std::shared_ptr<const Poset>;
inline PosetRef share(Poset P) { return std::make_shared<const Poset>(std::move(P)); }

template <class B>
using GMat = Mat<Tower<B>>;

// Matrix form: one G-matrix with d0 rows per point (stripe), indexed by
// point index of the poset.
template <class B>
struct MatrixCorep {
  const Tower<B>* T = nullptr;
  PosetRef P;
  size_t d0 = 0;
  std::vector<GMat<B>> stripes;
  std::string label;
  std::optional<long> printed_f;

  DimVector dims() const {
    DimVector d{static_cast<long>(d0), {}};
    for (const auto& s : stripes) d.d.push_back(static_cast<long>(s.cols()));
    return d;
  }
};

// Subspace form: U_0 = G^n and one F-subspace per point.
template <class B>
struct CorepSpaces {
  const Tower<B>* T = nullptr;
  PosetRef P;
  size_t n = 0;
  std::vector<FSub<B>> U;
};

template <class B>
MatrixCorep<B> zero_matrix_corep(const Tower<B>& T, PosetRef P, size_t d0, const std::vector<size_t>& widths) {
  if (widths.size() != P->size()) throw CorepError("one stripe width per point is required");
  MatrixCorep<B> M{&T, P, d0, {}, "", std::nullopt};
  for (auto w : widths) M.stripes.push_back(zeros(T, d0, w));
  return M;
}

// ---- subspaces from matrices ----

template <class B>
std::vector<GVec<B>> columns_of(const GMat<B>& m) {
  std::vector<GVec<B>> out;
  for (size_t j = 0; j < m.cols(); ++j) out.push_back(m.col(j));
  return out;
}

// Why the subspaces fail to form a corepresentation, if they do.
template <class B>
std::optional<std::string> corep_violation(const CorepSpaces<B>& S) {
  const Poset& P = *S.P;
  if (S.U.size() != P.size()) return "wrong number of subspaces";
  for (size_t x = 0; x < P.size(); ++x) {
    if (S.U[x].ambient() != S.n) return "subspace at " + P.id(x) + " lives in the wrong space";
    if (P.strong_point(x) && !S.U[x].is_strong()) return "U_" + P.id(x) + " is not a G-subspace";
  }
  for (size_t x = 0; x < P.size(); ++x)
    for (size_t y = 0; y < P.size(); ++y) {
      if (!P.lt(x, y)) continue;
      const FSub<B>& lo = P.strong(x, y) ? S.U[x].hull() : S.U[x];
      if (!S.U[y].contains(lo))
        return std::string(P.strong(x, y) ? "hull(U_" : "U_") + P.id(x) + (P.strong(x, y) ? ")" : "") +
               " is not inside U_" + P.id(y);
    }
  return std::nullopt;
}

template <class B>
CorepSpaces<B> spaces_of(const MatrixCorep<B>& M) {
  const Poset& P = *M.P;
  const Tower<B>& T = *M.T;
  if (M.stripes.size() != P.size()) throw CorepError("one stripe per point is required");
  CorepSpaces<B> S{M.T, M.P, M.d0, {}};
  for (size_t x = 0; x < P.size(); ++x) {
    if (M.stripes[x].rows() != M.d0 && M.stripes[x].cols() > 0)
      throw CorepError("stripe " + P.id(x) + " has the wrong number of rows");
    auto rows = Mat<B>::with_cols(2 * M.d0);
    for (size_t y = 0; y < P.size(); ++y) {
      if (!P.leq(y, x)) continue;
      for (const auto& c : columns_of<B>(M.stripes[y])) {
        rows.append_row(realize<B>(c));
        if (P.strong(y, x)) rows.append_row(realize<B>(FSub<B>::scale_vec(T, T.xi(), c)));
      }
    }
    S.U.push_back(FSub<B>::from_rows(T, M.d0, std::move(rows)));
  }
  if (auto v = corep_violation(S)) throw std::logic_error("spaces_of produced a non-corepresentation: " + *v);
  return S;
}

template <class B>
FSub<B> radical(const CorepSpaces<B>& S, size_t x) {
  const Poset& P = *S.P;
  FSub<B> r(*S.T, S.n);
  for (size_t y = 0; y < P.size(); ++y) {
    if (!P.lt(y, x)) continue;
    r = r.sum(P.strong(y, x) ? S.U[y].hull() : S.U[y]);
  }
  return r;
}

template <class B>
DimVector dim_vector(const CorepSpaces<B>& S) {
  const Poset& P = *S.P;
  DimVector d{static_cast<long>(S.n), {}};
  for (size_t x = 0; x < P.size(); ++x) {
    long q = static_cast<long>(S.U[x].dim_f()) - static_cast<long>(radical(S, x).dim_f());
    d.d.push_back(P.strong_point(x) ? q / 2 : q);
  }
  return d;
}

template <class B>
bool is_reduced(const MatrixCorep<B>& M) {
  return dim_vector(spaces_of(M)) == M.dims();
}

// A G-basis of a G-subspace, read off its canonical F-basis.
template <class B>
std::vector<GVec<B>> g_basis(const FSub<B>& W) {
  const Tower<B>& T = W.tower();
  std::vector<GVec<B>> out;
  FSub<B> cur(T, W.ambient());
  for (const auto& v : W.vectors()) {
    if (cur.contains_vector(v)) continue;
    out.push_back(v);
    cur = cur.sum(FSub<B>::span(T, W.ambient(), {v}, Scalars::G));
  }
  return out;
}

template <class B>
MatrixCorep<B> matrix_of(const CorepSpaces<B>& S) {
  const Poset& P = *S.P;
  const Tower<B>& T = *S.T;
  MatrixCorep<B> M{S.T, S.P, S.n, {}, "", std::nullopt};
  for (size_t x = 0; x < P.size(); ++x) {
    Scalars sc = P.strong_point(x) ? Scalars::G : Scalars::F;
    FSub<B> cur = radical(S, x);
    std::vector<GVec<B>> cols;
    for (const auto& v : S.U[x].vectors()) {
      if (cur.contains_vector(v)) continue;
      cols.push_back(v);
      cur = cur.sum(FSub<B>::span(T, S.n, {v}, sc));
    }
    GMat<B> m(S.n, cols.size(), T.zero());
    for (size_t j = 0; j < cols.size(); ++j)
      for (size_t i = 0; i < S.n; ++i) m(i, j) = cols[j][i];
    M.stripes.push_back(std::move(m));
  }
  return M;
}

// ---- sums and maps ----

template <class B>
MatrixCorep<B> direct_sum(const MatrixCorep<B>& M, const MatrixCorep<B>& N) {
  if (!(*M.P == *N.P)) throw CorepError("direct sum of corepresentations of different posets");
  const Tower<B>& T = *M.T;
  MatrixCorep<B> S{M.T, M.P, M.d0 + N.d0, {}, "", std::nullopt};
  for (size_t x = 0; x < M.stripes.size(); ++x) {
    const auto &a = M.stripes[x], &b = N.stripes[x];
    GMat<B> m(S.d0, a.cols() + b.cols(), T.zero());
    for (size_t i = 0; i < a.rows(); ++i)
      for (size_t j = 0; j < a.cols(); ++j) m(i, j) = a(i, j);
    for (size_t i = 0; i < b.rows(); ++i)
      for (size_t j = 0; j < b.cols(); ++j) m(M.d0 + i, a.cols() + j) = b(i, j);
    S.stripes.push_back(std::move(m));
  }
  return S;
}

template <class B>
CorepSpaces<B> direct_sum(const CorepSpaces<B>& U, const CorepSpaces<B>& V) {
  if (!(*U.P == *V.P)) throw CorepError("direct sum of corepresentations of different posets");
  CorepSpaces<B> S{U.T, U.P, U.n + V.n, {}};
  for (size_t x = 0; x < U.U.size(); ++x)
    S.U.push_back(U.U[x].embedded(S.n, 0).sum(V.U[x].embedded(S.n, U.n)));
  return S;
}

// g(U) for an invertible G-matrix g.
template <class B>
CorepSpaces<B> transform(const CorepSpaces<B>& S, const GMat<B>& g) {
  CorepSpaces<B> out{S.T, S.P, g.rows(), {}};
  for (const auto& u : S.U) out.U.push_back(u.image(g));
  return out;
}

// F-basis of {phi : U_0 -> V_0 G-linear, phi(U_x) in V_x for all x}.
template <class B>
std::vector<GMat<B>> hom_basis(const CorepSpaces<B>& U, const CorepSpaces<B>& V) {
  if (!(*U.P == *V.P)) throw CorepError("morphisms between corepresentations of different posets");
  const Tower<B>& T = *U.T;
  const B& F = T.base();
  size_t n = U.n, m = V.n;
  size_t N = 2 * m * n;
  auto cons = Mat<B>::with_cols(N);
  for (size_t x = 0; x < U.U.size(); ++x) {
    if (U.U[x].is_zero() || V.U[x].is_full()) continue;
    Mat<B> ann = nullspace(F, V.U[x].basis());
    for (const auto& u : U.U[x].vectors())
      for (size_t t = 0; t < ann.rows(); ++t) {
        std::vector<typename B::Element> row(N, F.zero());
        for (size_t i = 0; i < m; ++i) {
          const auto &ar = ann(t, 2 * i), &ai = ann(t, 2 * i + 1);
          if (F.is_zero(ar) && F.is_zero(ai)) continue;
          for (size_t j = 0; j < n; ++j) {
            const auto &al = u[j].re, &be = u[j].im;
            size_t k = 2 * (i * n + j);
            // (r + xi s)(al + xi be) = (r al - q s be) + xi (r be + s al - p s be)
            row[k] = F.add(row[k], F.add(F.mul(ar, al), F.mul(ai, be)));
            auto s_re = F.neg(F.mul(T.q(), be));
            auto s_im = F.sub(al, F.mul(T.p(), be));
            row[k + 1] = F.add(row[k + 1], F.add(F.mul(ar, s_re), F.mul(ai, s_im)));
          }
        }
        cons.append_row(row);
      }
  }
  Mat<B> sol = cons.rows() ? nullspace(F, cons) : identity(F, N);
  std::vector<GMat<B>> out;
  for (size_t r = 0; r < sol.rows(); ++r) {
    GMat<B> phi(m, n, T.zero());
    for (size_t i = 0; i < m; ++i)
      for (size_t j = 0; j < n; ++j) phi(i, j) = {sol(r, 2 * (i * n + j)), sol(r, 2 * (i * n + j) + 1)};
    out.push_back(std::move(phi));
  }
  return out;
}

template <class B>
std::vector<GMat<B>> end_basis(const CorepSpaces<B>& U) {
  return hom_basis(U, U);
}

// ---- decomposition ----

// GroundTruth: exhaustive over a finite tower. FittingOnly: no split found by
// Fitting candidates over an infinite tower. Undecided: enumeration budget hit.
enum class Certainty { GroundTruth, FittingOnly, Undecided };

inline Certainty weaker(Certainty a, Certainty b) { return a > b ? a : b; }

inline std::string certainty_name(Certainty c) {
  switch (c) {
    case Certainty::GroundTruth: return "ground-truth";
    case Certainty::FittingOnly: return "no-split-found";
    case Certainty::Undecided: return "undecided";
  }
  return "?";
}

struct SearchLimits {
  size_t end_dim = 24;               // dim_F End gate for exhaustive search
  std::uint64_t candidates = 1u << 24;  // |F|^dim gate
  size_t iso_enumeration_dim = 10;   // enumerate Hom for iso below this dim
};

template <class B>
struct Summand {
  CorepSpaces<B> U;
  Certainty certainty;
};

template <class B>
struct Decomposition {
  std::vector<Summand<B>> summands;
  Certainty certainty = Certainty::GroundTruth;  // weakest over summands
};

namespace detail {

// Restriction of U to the G-subspace spanned by the columns of basis (n x r),
// in the coordinates of that basis.
template <class B>
CorepSpaces<B> restrict_to(const CorepSpaces<B>& S, const std::vector<GVec<B>>& basis) {
  const Tower<B>& T = *S.T;
  size_t r = basis.size();
  GMat<B> bm(S.n, r, T.zero());
  for (size_t j = 0; j < r; ++j)
    for (size_t i = 0; i < S.n; ++i) bm(i, j) = basis[j][i];
  FSub<B> W = FSub<B>::span(T, S.n, basis, Scalars::G);
  CorepSpaces<B> out{S.T, S.P, r, {}};
  for (const auto& u : S.U) {
    FSub<B> I = u.intersect(W);
    std::vector<GVec<B>> coords;
    for (const auto& v : I.vectors()) {
      auto c = solve(T, bm, v);
      if (!c) throw std::logic_error("vector outside the restriction subspace");
      coords.push_back(*c);
    }
    out.U.push_back(coords.empty() ? FSub<B>(T, r) : FSub<B>::span(T, r, coords, Scalars::F));
  }
  return out;
}

template <class B>
std::vector<GVec<B>> column_space(const Tower<B>& T, const GMat<B>& m) {
  GMat<B> t = transpose(m);
  rref(T, t);
  std::vector<GVec<B>> out;
  for (size_t i = 0; i < t.rows(); ++i) out.push_back(t.row(i));
  return out;
}

template <class B>
std::vector<GVec<B>> kernel(const Tower<B>& T, const GMat<B>& m) {
  GMat<B> k = nullspace(T, m);
  std::vector<GVec<B>> out;
  for (size_t i = 0; i < k.rows(); ++i) out.push_back(k.row(i));
  return out;
}

// Splits U along im/ker of an endomorphism when they are complementary,
// nonzero and compatible with every U_x.
template <class B>
std::optional<std::pair<CorepSpaces<B>, CorepSpaces<B>>> split_along(const CorepSpaces<B>& S, const GMat<B>& e) {
  const Tower<B>& T = *S.T;
  auto im = column_space(T, e);
  if (im.empty() || im.size() == S.n) return std::nullopt;
  auto ker = kernel(T, e);
  if (im.size() + ker.size() != S.n) return std::nullopt;
  auto a = restrict_to(S, im), b = restrict_to(S, ker);
  for (size_t x = 0; x < S.U.size(); ++x)
    if (a.U[x].dim_f() + b.U[x].dim_f() != S.U[x].dim_f()) return std::nullopt;
  return std::make_pair(std::move(a), std::move(b));
}

// Fitting: U = ker phi^n + im phi^n.
template <class B>
std::optional<std::pair<CorepSpaces<B>, CorepSpaces<B>>> fitting_split(const CorepSpaces<B>& S, const GMat<B>& phi) {
  const Tower<B>& T = *S.T;
  GMat<B> p = mat_pow(T, phi, S.n);
  size_t r = rank(T, p);
  if (r == 0 || r == S.n) return std::nullopt;
  return split_along(S, p);
}

// F-linear matrix of a G-linear map on the realization F^{2n}.
template <class B>
Mat<B> realize_map(const Tower<B>& T, const GMat<B>& phi) {
  const B& F = T.base();
  size_t n = phi.cols(), m = phi.rows();
  Mat<B> r(2 * m, 2 * n, F.zero());
  for (size_t j = 0; j < n; ++j)
    for (int s = 0; s < 2; ++s) {
      auto z = s ? T.xi() : T.one();
      for (size_t i = 0; i < m; ++i) {
        auto w = T.mul(phi(i, j), z);
        r(2 * i, 2 * j + s) = w.re;
        r(2 * i + 1, 2 * j + s) = w.im;
      }
    }
  return r;
}

// Eigenvalues in F to shift by: all of F when small, otherwise the rational
// roots of the minimal polynomial over Q.
template <class B>
std::vector<typename B::Element> shift_values(const Tower<B>& T, const GMat<B>& phi) {
  const B& F = T.base();
  std::vector<typename B::Element> out;
  if (F.finite()) {
    if (F.size() <= 16)
      for (const auto& a : F.elements())
        if (!F.is_zero(a)) out.push_back(a);
    return out;
  }
  if constexpr (std::is_same_v<typename B::Element, mpq_class>) {
    Poly<B> mp = minimal_polynomial(F, realize_map(T, phi));
    mpz_class den = 1;
    for (const auto& c : mp) den = lcm(den, mpz_class(c.get_den()));
    std::vector<mpz_class> ic;
    for (const auto& c : mp) ic.push_back(mpz_class(c * den));
    size_t lo = 0;
    while (lo < ic.size() && ic[lo] == 0) ++lo;
    if (lo + 1 >= ic.size()) return out;
    mpz_class a0 = abs(ic[lo]), an = abs(ic.back());
    auto divisors = [](const mpz_class& v) {
      std::vector<mpz_class> d;
      if (v > 1000000) return d;
      long x = v.get_si();
      for (long i = 1; i * i <= x; ++i)
        if (x % i == 0) {
          d.push_back(i);
          if (i * i != x) d.push_back(x / i);
        }
      return d;
    };
    for (const auto& p : divisors(a0))
      for (const auto& q : divisors(an))
        for (int sg : {1, -1}) {
          mpq_class c(sg * p, q);
          c.canonicalize();
          if (F.is_zero(poly_eval(F, mp, c)) && std::find(out.begin(), out.end(), c) == out.end()) out.push_back(c);
        }
  }
  return out;
}

template <class B>
GMat<B> shifted(const Tower<B>& T, const GMat<B>& phi, const typename B::Element& l) {
  GMat<B> s = phi;
  for (size_t i = 0; i < s.rows(); ++i) s(i, i) = T.sub(s(i, i), T.embed(l));
  return s;
}

template <class B>
bool is_idempotent(const Tower<B>& T, const GMat<B>& e) {
  size_t n = e.rows();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      auto s = T.zero();
      for (size_t l = 0; l < n; ++l) s = T.add(s, T.mul(e(i, l), e(l, j)));
      if (!T.eq(s, e(i, j))) return false;
    }
  return true;
}

inline bool within(std::uint64_t base, size_t k, std::uint64_t limit) {
  std::uint64_t c = 1;
  for (size_t i = 0; i < k; ++i) {
    if (c > limit / base) return false;
    c *= base;
  }
  return c <= limit;
}

// Visit every F-combination of the basis; stop when visit returns true.
// Each odometer step changes one coefficient by +1, so the running sum is
// updated by adding one basis element (wrap-around adds 1 too, since the
// prime field has characteristic |F|).
template <class B, class Visit>
bool enumerate_span(const Tower<B>& T, const std::vector<GMat<B>>& basis, Visit visit) {
  const B& F = T.base();
  size_t k = basis.size();
  if (k == 0) return false;
  std::uint64_t q = F.size();
  GMat<B> cur = zeros(T, basis[0].rows(), basis[0].cols());
  std::vector<std::uint64_t> dig(k, 0);
  while (true) {
    size_t i = 0;
    while (i < k) {
      dig[i] = (dig[i] + 1) % q;
      cur = mat_add(T, cur, basis[i]);
      if (dig[i] != 0) break;
      ++i;
    }
    if (i == k) return false;
    if (visit(cur)) return true;
  }
}

}  // namespace detail

template <class B>
Decomposition<B> decompose(const CorepSpaces<B>& S, const SearchLimits& lim = {}) {
  const Tower<B>& T = *S.T;
  Decomposition<B> out;
  if (S.n == 0) return out;
  auto E = end_basis(S);
  auto finish = [&](std::pair<CorepSpaces<B>, CorepSpaces<B>> parts) {
    for (auto* part : {&parts.first, &parts.second}) {
      auto d = decompose(*part, lim);
      out.certainty = weaker(out.certainty, d.certainty);
      for (auto& s : d.summands) out.summands.push_back(std::move(s));
    }
    return out;
  };
  auto try_phi = [&](const GMat<B>& phi) -> std::optional<std::pair<CorepSpaces<B>, CorepSpaces<B>>> {
    if (auto sp = detail::fitting_split(S, phi)) return sp;
    for (const auto& l : detail::shift_values(T, phi))
      if (auto sp = detail::fitting_split(S, detail::shifted(T, phi, l))) return sp;
    return std::nullopt;
  };
  if (E.size() > 1) {
    for (const auto& phi : E)
      if (auto sp = try_phi(phi)) return finish(std::move(*sp));
    for (size_t i = 0; i < E.size(); ++i)
      for (size_t j = 0; j < E.size(); ++j)
        if (auto sp = try_phi(mat_mul(T, E[i], E[j]))) return finish(std::move(*sp));
  }
  Certainty c = Certainty::GroundTruth;
  if (E.size() <= 1) {
    c = Certainty::GroundTruth;  // End = F
  } else if (!T.finite()) {
    c = Certainty::FittingOnly;
  } else if (E.size() > lim.end_dim || !detail::within(T.base().size(), E.size(), lim.candidates)) {
    c = Certainty::Undecided;
  } else {
    GMat<B> id = identity(T, S.n);
    std::optional<GMat<B>> found;
    detail::enumerate_span(T, E, [&](const GMat<B>& e) {
      if (mat_eq(T, e, id) || !detail::is_idempotent(T, e)) return false;
      found = e;
      return true;
    });
    if (found) {
      auto sp = detail::split_along(S, *found);
      if (!sp) throw std::logic_error("idempotent endomorphism failed to split");
      return finish(std::move(*sp));
    }
  }
  out.summands.push_back({S, c});
  out.certainty = c;
  return out;
}

struct IndecResult {
  bool indecomposable;
  Certainty certainty;
};

template <class B>
IndecResult is_indecomposable(const CorepSpaces<B>& S, const SearchLimits& lim = {}) {
  if (S.n == 0) return {false, Certainty::GroundTruth};
  auto d = decompose(S, lim);
  if (d.summands.size() > 1) return {false, Certainty::GroundTruth};
  return {true, d.certainty};
}

struct IsoResult {
  bool iso;
  Certainty certainty;
};

namespace detail {

template <class B>
bool same_shape(const CorepSpaces<B>& U, const CorepSpaces<B>& V) {
  if (!(*U.P == *V.P) || U.n != V.n) return false;
  for (size_t x = 0; x < U.U.size(); ++x)
    if (U.U[x].dim_f() != V.U[x].dim_f()) return false;
  return dim_vector(U) == dim_vector(V);
}

// Two corepresentations with local endomorphism rings are isomorphic iff
// some g f (f in Hom(U,V), g in Hom(V,U) from the bases) is invertible.
template <class B>
bool local_iso(const CorepSpaces<B>& U, const CorepSpaces<B>& V) {
  if (!same_shape(U, V)) return false;
  const Tower<B>& T = *U.T;
  auto f = hom_basis(U, V), g = hom_basis(V, U);
  for (const auto& a : f)
    for (const auto& b : g)
      if (is_invertible(T, mat_mul(T, b, a))) return true;
  return false;
}

}  // namespace detail

template <class B>
IsoResult are_isomorphic(const CorepSpaces<B>& U, const CorepSpaces<B>& V, const SearchLimits& lim = {}) {
  if (!detail::same_shape(U, V)) return {false, Certainty::GroundTruth};
  if (U.n == 0) return {true, Certainty::GroundTruth};
  const Tower<B>& T = *U.T;
  auto H = hom_basis(U, V);
  if (H.empty()) return {false, Certainty::GroundTruth};
  for (const auto& h : H)
    if (is_invertible(T, h)) return {true, Certainty::GroundTruth};
  if (T.finite() && H.size() <= lim.iso_enumeration_dim) {
    bool hit = detail::enumerate_span(T, H, [&](const GMat<B>& h) { return is_invertible(T, h); });
    return {hit, Certainty::GroundTruth};
  }
  auto du = decompose(U, lim), dv = decompose(V, lim);
  Certainty c = weaker(du.certainty, dv.certainty);
  if (du.summands.size() != dv.summands.size()) return {false, c};
  std::vector<char> used(dv.summands.size(), 0);
  for (const auto& s : du.summands) {
    bool matched = false;
    for (size_t j = 0; j < dv.summands.size() && !matched; ++j) {
      if (used[j]) continue;
      if (detail::local_iso(s.U, dv.summands[j].U)) {
        used[j] = 1;
        matched = true;
      }
    }
    if (!matched) return {false, c};
  }
  return {true, c};
}

// ---- duality and extensions ----

template <class B>
CorepSpaces<B> dual_corep(const CorepSpaces<B>& S) {
  if (!S.T->duality_enabled()) throw CorepError("duality needs p = 0 or characteristic 2 for tower " + S.T->name());
  CorepSpaces<B> D{S.T, share(dual_poset(*S.P)), S.n, {}};
  for (const auto& u : S.U) D.U.push_back(u.perp());
  return D;
}

// Replace U_x by its radical wherever the dual has a zero coordinate, then
// dualize.
template <class B>
CorepSpaces<B> sincere_dual_construction(const CorepSpaces<B>& S) {
  DimVector ds = dim_vector(dual_corep(S));
  CorepSpaces<B> U1 = S;
  for (size_t x = 0; x < S.U.size(); ++x)
    if (ds.d[x] == 0) U1.U[x] = radical(S, x);
  return dual_corep(U1);
}

namespace detail {

// index in P of every point of Q; throws unless Q is a full subposet.
inline std::vector<size_t> full_embedding(const Poset& Q, const Poset& P) {
  std::vector<size_t> m;
  for (size_t i = 0; i < Q.size(); ++i) {
    auto j = P.find(Q.id(i));
    if (!j) throw CorepError("point " + Q.id(i) + " of " + Q.name() + " is missing from " + P.name());
    m.push_back(*j);
  }
  for (size_t i = 0; i < Q.size(); ++i)
    for (size_t k = 0; k < Q.size(); ++k)
      if (Q.leq(i, k) != P.leq(m[i], m[k]) || Q.strong(i, k) != P.strong(m[i], m[k]))
        throw CorepError(Q.name() + " is not a full subposet of " + P.name() + " (at " + Q.id(i) + ", " +
                         Q.id(k) + ")");
  return m;
}

}  // namespace detail

template <class B>
CorepSpaces<B> extend_subposet(const CorepSpaces<B>& S, PosetRef P) {
  const Poset& Q = *S.P;
  auto m = detail::full_embedding(Q, *P);
  CorepSpaces<B> V{S.T, P, S.n, std::vector<FSub<B>>(P->size(), FSub<B>(*S.T, S.n))};
  std::vector<char> inq(P->size(), 0);
  for (size_t i = 0; i < Q.size(); ++i) {
    V.U[m[i]] = S.U[i];
    inq[m[i]] = 1;
  }
  for (size_t x = 0; x < P->size(); ++x) {
    if (inq[x]) continue;
    for (size_t i = 0; i < Q.size(); ++i) {
      size_t y = m[i];
      if (!P->leq(y, x)) continue;
      V.U[x] = V.U[x].sum(P->strong(y, x) ? S.U[i].hull() : S.U[i]);
    }
  }
  return V;
}

enum class Side { Top, Bottom };

template <class B>
struct AdjoinResult {
  CorepSpaces<B> V;
  CorepSpaces<B> alternate;
  IsoResult choice_independent;
};

// U over P \ {zeta} extended by a strong maximal (Top) or minimal (Bottom)
// point zeta of P.
template <class B>
AdjoinResult<B> adjoin_point(const CorepSpaces<B>& S, PosetRef P, const std::string& zeta, Side side) {
  const Tower<B>& T = *S.T;
  size_t z = P->index(zeta);
  if (!P->strong_point(z)) throw CorepError("adjoined point " + zeta + " must be strong");
  for (size_t y = 0; y < P->size(); ++y) {
    if (y == z) continue;
    if (side == Side::Top && P->lt(z, y)) throw CorepError(zeta + " is not maximal");
    if (side == Side::Bottom && P->lt(y, z)) throw CorepError(zeta + " is not minimal");
  }
  CorepSpaces<B> V = extend_subposet(S, P);
  auto with = [&](FSub<B> Uz) {
    CorepSpaces<B> W = V;
    W.U[z] = std::move(Uz);
    return W;
  };
  if (side == Side::Top) {
    FSub<B> h(T, S.n);
    for (size_t y = 0; y < P->size(); ++y)
      if (P->lt(y, z)) h = h.sum(V.U[y]);
    h = h.hull();
    if (h.is_full()) throw CorepError("top adjoin needs hull(U_R) != U_0");
    std::vector<GVec<B>> free;
    for (size_t i = 0; i < S.n; ++i) {
      GVec<B> e(S.n, T.zero());
      e[i] = T.one();
      if (!h.contains_vector(e)) free.push_back(e);
    }
    auto pick = [&](const GVec<B>& e) { return h.sum(FSub<B>::span(T, S.n, {e}, Scalars::G)); };
    CorepSpaces<B> a = with(pick(free.front())), b = with(pick(free.back()));
    auto iso = are_isomorphic(a, b);
    return {std::move(a), std::move(b), iso};
  }
  FSub<B> c = FSub<B>::full(T, S.n);
  for (size_t y = 0; y < P->size(); ++y)
    if (P->lt(z, y)) c = c.intersect(V.U[y]);
  c = c.cohull();
  if (c.is_zero()) throw CorepError("bottom adjoin needs cohull(U_R) != 0");
  auto gb = g_basis(c);
  auto pick = [&](const GVec<B>& w) { return FSub<B>::span(T, S.n, {w}, Scalars::G); };
  CorepSpaces<B> a = with(pick(gb.front())), b = with(pick(gb.back()));
  // points above zeta keep their spaces; every one of them already contains G w
  auto iso = are_isomorphic(a, b);
  return {std::move(a), std::move(b), iso};
}

struct SupportFlags {
  PointSet supp;
  bool sincere = false;
  bool trivial = false;
};

template <class B>
SupportFlags support_flags(const CorepSpaces<B>& S) {
  SupportFlags f;
  DimVector d = dim_vector(S);
  f.sincere = d.d0 > 0;
  for (size_t x = 0; x < d.d.size(); ++x) {
    if (d.d[x] > 0) f.supp.push_back(x);
    else f.sincere = false;
  }
  f.trivial = S.n == 1;
  return f;
}

struct RVectors {
  std::array<long, 4> r{}, rs{};
};

// Codimension vector r and its dual r* for anchors (a, p, q, theta) forming
// a copy of K7 (a < p < q weak, theta strong and incomparable).
template <class B>
RVectors r_vectors(const CorepSpaces<B>& W, const std::array<std::string, 4>& anchors) {
  const Poset& P = *W.P;
  size_t a = P.index(anchors[0]), p = P.index(anchors[1]), q = P.index(anchors[2]), t = P.index(anchors[3]);
  bool ok = P.weak(a, p) && P.weak(p, q) && P.weak(a, q) && !P.strong_point(a) && !P.strong_point(p) &&
            !P.strong_point(q) && P.strong_point(t) && !P.comparable(t, a) && !P.comparable(t, p) &&
            !P.comparable(t, q);
  if (!ok) throw CorepError("anchors do not form a copy of K7");
  long n = static_cast<long>(W.n);
  auto dimg = [](const FSub<B>& s) { return static_cast<long>(s.dim_f() / 2); };
  auto dimf = [](const FSub<B>& s) { return static_cast<long>(s.dim_f()); };
  const auto &Wa = W.U[a], &Wp = W.U[p], &Wq = W.U[q], &Wt = W.U[t];
  RVectors r;
  r.r = {n - dimg(Wq.hull()), n - dimg(Wp.hull().sum(Wt)), 2 * n - dimf(Wq.sum(Wt)), 2 * n - dimf(Wq.sum(Wp.hull()))};
  r.rs = {dimg(Wa.cohull()), dimg(Wp.cohull().intersect(Wt)), dimf(Wa.intersect(Wt)), dimf(Wa.intersect(Wp.cohull()))};
  return r;
}

// ---- admissible transformations ----

struct Move {
  enum Kind { RowSwap, RowScale, RowAdd, ColSwap, ColScale, ColAdd, CrossAdd } kind;
  size_t i = 0, j = 0;        // rows, or columns within the stripe(s)
  std::string x, y;           // stripes; CrossAdd adds column j of x into column i of y
  std::string coeff = "1";    // element syntax
};

template <class B>
MatrixCorep<B> apply_transformation(const MatrixCorep<B>& M, const Move& mv) {
  const Tower<B>& T = *M.T;
  const Poset& P = *M.P;
  MatrixCorep<B> R = M;
  auto c = T.parse(mv.coeff);
  auto need_row = [&](size_t r) {
    if (r >= M.d0) throw CorepError("row " + std::to_string(r) + " out of range");
  };
  auto need_col = [&](size_t x, size_t col) {
    if (col >= M.stripes[x].cols()) throw CorepError("column " + std::to_string(col) + " out of range in " + P.id(x));
  };
  switch (mv.kind) {
    case Move::RowSwap:
      need_row(mv.i), need_row(mv.j);
      for (auto& s : R.stripes) s.swap_rows(mv.i, mv.j);
      break;
    case Move::RowScale:
      need_row(mv.i);
      if (T.is_zero(c)) throw CorepError("row scaling by zero");
      for (auto& s : R.stripes)
        for (size_t k = 0; k < s.cols(); ++k) s(mv.i, k) = T.mul(c, s(mv.i, k));
      break;
    case Move::RowAdd:
      need_row(mv.i), need_row(mv.j);
      if (mv.i == mv.j) throw CorepError("row added to itself");
      for (auto& s : R.stripes)
        for (size_t k = 0; k < s.cols(); ++k) s(mv.i, k) = T.add(s(mv.i, k), T.mul(c, s(mv.j, k)));
      break;
    case Move::ColSwap:
    case Move::ColScale:
    case Move::ColAdd: {
      size_t x = P.index(mv.x);
      need_col(x, mv.i);
      if (mv.kind != Move::ColScale) need_col(x, mv.j);
      if (mv.kind != Move::ColSwap && !P.strong_point(x) && !T.in_base(c))
        throw CorepError("column operations in weak stripe " + mv.x + " need coefficients in F");
      auto& s = R.stripes[x];
      for (size_t r = 0; r < M.d0; ++r) {
        if (mv.kind == Move::ColSwap) std::swap(s(r, mv.i), s(r, mv.j));
        else if (mv.kind == Move::ColScale) s(r, mv.i) = T.mul(c, s(r, mv.i));
        else s(r, mv.i) = T.add(s(r, mv.i), T.mul(c, s(r, mv.j)));
      }
      if (mv.kind == Move::ColScale && T.is_zero(c)) throw CorepError("column scaling by zero");
      if (mv.kind == Move::ColAdd && mv.i == mv.j) throw CorepError("column added to itself");
      break;
    }
    case Move::CrossAdd: {
      size_t x = P.index(mv.x), y = P.index(mv.y);
      if (!P.lt(x, y)) throw CorepError("no relation " + mv.x + " < " + mv.y + " for a column addition");
      if (!P.strong(x, y) && !T.in_base(c))
        throw CorepError("weak relation " + mv.x + " < " + mv.y + " allows only coefficients in F");
      need_col(x, mv.j);
      need_col(y, mv.i);
      for (size_t r = 0; r < M.d0; ++r)
        R.stripes[y](r, mv.i) = T.add(R.stripes[y](r, mv.i), T.mul(c, M.stripes[x](r, mv.j)));
      break;
    }
  }
  return R;
}

}  // namespace eqp
