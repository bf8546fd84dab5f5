#pragma once

#include <vector>

#include "eqp/field.hpp"
#include "eqp/matrix.hpp"

namespace eqp {

enum class Scalars { F, G };

// Frobenius companion matrix of t^n + a_{n-1} t^{n-1} + ... + a_0 given the
// coefficients (a_0, ..., a_{n-1}): ones on the superdiagonal, last row -a_j.
template <class B>
Mat<Tower<B>> frobenius_companion(const Tower<B>& T, const std::vector<GElem<B>>& coeffs,
                                  Scalars scalars = Scalars::G) {
  size_t n = coeffs.size();
  if (n == 0) throw FieldError("companion matrix of a degree-0 polynomial");
  if (scalars == Scalars::F)
    for (const auto& c : coeffs)
      if (!T.in_base(c)) throw FieldError("coefficient " + T.str(c) + " is not in the base field");
  Mat<Tower<B>> m(n, n, T.zero());
  for (size_t i = 0; i + 1 < n; ++i) m(i, i + 1) = T.one();
  for (size_t j = 0; j < n; ++j) m(n - 1, j) = T.neg(coeffs[j]);
  return m;
}

// Coefficient tuples (a_0..a_{deg-1}) of all monic polynomials of degree deg
// with coefficients in F or in G; a_0 varies fastest.
template <class B>
std::vector<std::vector<GElem<B>>> enumerate_monic(const Tower<B>& T, int deg, Scalars scalars) {
  if (!T.finite()) throw FieldError("cannot enumerate monic polynomials over an infinite field");
  std::vector<GElem<B>> elems;
  if (scalars == Scalars::F)
    for (const auto& a : T.base().elements()) elems.push_back(T.embed(a));
  else
    elems = T.elements();
  std::vector<std::vector<GElem<B>>> out;
  std::vector<size_t> idx(deg, 0);
  while (true) {
    std::vector<GElem<B>> f;
    for (int i = 0; i < deg; ++i) f.push_back(elems[idx[i]]);
    out.push_back(std::move(f));
    int i = 0;
    while (i < deg && ++idx[i] == elems.size()) idx[i++] = 0;
    if (i == deg) break;
  }
  return out;
}

// Lift base-field polynomial coefficients (a_0..a_{n-1}, monic leading term
// implied) into G.
template <class B>
std::vector<GElem<B>> lift_coeffs(const Tower<B>& T, const Poly<B>& monic) {
  std::vector<GElem<B>> out;
  for (size_t i = 0; i + 1 < monic.size(); ++i) out.push_back(T.embed(monic[i]));
  return out;
}

// Evaluate a polynomial with coefficients in the field K at a square matrix.
template <class K>
Mat<K> poly_at_matrix(const K& k, const Poly<K>& f, const Mat<K>& x) {
  size_t n = x.rows();
  Mat<K> r = zeros(k, n, n);
  for (size_t i = f.size(); i-- > 0;) {
    r = mat_mul(k, r, x);
    for (size_t d = 0; d < n; ++d) r(d, d) = k.add(r(d, d), f[i]);
  }
  return r;
}

// Similarity over a finite field: X ~ Y iff rank g(X)^j = rank g(Y)^j for
// every monic irreducible g of degree <= n and every j <= n.
template <class K>
bool similar_finite(const K& k, const Mat<K>& x, const Mat<K>& y) {
  size_t n = x.rows();
  if (x.cols() != n || y.rows() != n || y.cols() != n) return false;
  for (size_t d = 1; d <= n; ++d)
    for (const auto& g : enumerate_monic_poly(k, static_cast<int>(d))) {
      if (!poly_irreducible_finite(k, g)) continue;
      Mat<K> gx = poly_at_matrix(k, g, x), gy = poly_at_matrix(k, g, y);
      Mat<K> px = gx, py = gy;
      for (size_t j = 1; j <= n; ++j) {
        if (rank(k, px) != rank(k, py)) return false;
        px = mat_mul(k, px, gx);
        py = mat_mul(k, py, gy);
      }
    }
  return true;
}

// Minimal polynomial (monic, low to high) of a square matrix via the Krylov
// sequence of the identity in the space of matrices.
template <class K>
Poly<K> minimal_polynomial(const K& k, const Mat<K>& x) {
  size_t n = x.rows();
  std::vector<std::vector<typename K::Element>> powers;
  Mat<K> p = identity(k, n);
  for (size_t d = 0; d <= n * n; ++d) {
    powers.push_back(p.data());
    // columns = flattened powers; test dependence of the last one
    Mat<K> sys(n * n, powers.size() - 1, k.zero());
    for (size_t j = 0; j + 1 < powers.size(); ++j)
      for (size_t i = 0; i < n * n; ++i) sys(i, j) = powers[j][i];
    std::vector<typename K::Element> rhs = powers.back();
    if (powers.size() > 1) {
      auto sol = solve(k, sys, rhs);
      if (sol) {
        Poly<K> f;
        for (auto& c : *sol) f.push_back(k.neg(c));
        f.push_back(k.one());
        return f;
      }
    }
    p = mat_mul(k, p, x);
  }
  throw FieldError("minimal polynomial search failed");
}

}  // namespace eqp
