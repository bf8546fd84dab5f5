#pragma once

#include <string>
#include <vector>

#include "eqp/companion.hpp"
#include "eqp/field.hpp"
#include "eqp/matrix.hpp"

namespace eqp {

template <class B>
using GVec = std::vector<GElem<B>>;

// Coordinates of v in G^n over the F-basis e_1, xi e_1, ..., e_n, xi e_n.
template <class B>
std::vector<typename B::Element> realize(const GVec<B>& v) {
  std::vector<typename B::Element> out;
  out.reserve(2 * v.size());
  for (const auto& g : v) {
    out.push_back(g.re);
    out.push_back(g.im);
  }
  return out;
}

template <class B>
GVec<B> unrealize(const std::vector<typename B::Element>& r) {
  GVec<B> v(r.size() / 2);
  for (size_t i = 0; i < v.size(); ++i) v[i] = {r[2 * i], r[2 * i + 1]};
  return v;
}

// An F-subspace of G^n, stored as the reduced row echelon basis of its
// F-realization in F^{2n}. Equal subspaces have identical bases.
template <class B>
class FSub {
 public:
  using FE = typename B::Element;
  using GE = GElem<B>;

  FSub(const Tower<B>& T, size_t n) : T_(&T), n_(n), basis_(Mat<B>::with_cols(2 * n)) {}

  static FSub zero(const Tower<B>& T, size_t n) { return FSub(T, n); }
  static FSub full(const Tower<B>& T, size_t n) {
    FSub s(T, n);
    s.basis_ = identity(T.base(), 2 * n);
    s.piv_.resize(2 * n);
    for (size_t i = 0; i < 2 * n; ++i) s.piv_[i] = i;
    return s;
  }
  // Rows are F-realized vectors; any spanning set is accepted.
  static FSub from_rows(const Tower<B>& T, size_t n, Mat<B> rows) {
    FSub s(T, n);
    if (rows.rows() == 0) return s;
    if (rows.cols() != 2 * n) throw std::invalid_argument("realized vector has wrong length");
    s.piv_ = rref(T.base(), rows);
    s.basis_ = std::move(rows);
    return s;
  }
  static FSub span(const Tower<B>& T, size_t n, const std::vector<GVec<B>>& vecs, Scalars scalars) {
    auto rows = Mat<B>::with_cols(2 * n);
    for (const auto& v : vecs) {
      if (v.size() != n) throw std::invalid_argument("vector has wrong length");
      rows.append_row(realize<B>(v));
      if (scalars == Scalars::G) rows.append_row(realize<B>(scale_vec(T, T.xi(), v)));
    }
    return from_rows(T, n, std::move(rows));
  }

  const Tower<B>& tower() const { return *T_; }
  size_t ambient() const { return n_; }
  size_t dim_f() const { return basis_.rows(); }
  const Mat<B>& basis() const { return basis_; }
  bool is_zero() const { return basis_.rows() == 0; }
  bool is_full() const { return basis_.rows() == 2 * n_; }

  std::vector<GVec<B>> vectors() const {
    std::vector<GVec<B>> out;
    for (size_t i = 0; i < basis_.rows(); ++i) out.push_back(unrealize<B>(basis_.row(i)));
    return out;
  }

  bool contains_vector(const GVec<B>& v) const {
    auto r = realize<B>(v);
    const auto& F = T_->base();
    for (size_t i = 0; i < piv_.size(); ++i) {
      FE c = r[piv_[i]];
      if (F.is_zero(c)) continue;
      for (size_t j = 0; j < r.size(); ++j) r[j] = F.sub(r[j], F.mul(c, basis_(i, j)));
    }
    for (const auto& e : r)
      if (!F.is_zero(e)) return false;
    return true;
  }
  // o is a subspace of this
  bool contains(const FSub& o) const {
    check(o);
    for (const auto& v : o.vectors())
      if (!contains_vector(v)) return false;
    return true;
  }
  bool equals(const FSub& o) const {
    check(o);
    return basis_ == o.basis_;
  }
  bool operator==(const FSub& o) const { return n_ == o.n_ && basis_ == o.basis_; }

  FSub sum(const FSub& o) const {
    check(o);
    Mat<B> rows = basis_;
    for (size_t i = 0; i < o.basis_.rows(); ++i) rows.append_row(o.basis_.row(i));
    return from_rows(*T_, n_, std::move(rows));
  }

  FSub intersect(const FSub& o) const {
    check(o);
    const auto& F = T_->base();
    size_t k = dim_f(), l = o.dim_f();
    if (k == 0 || l == 0) return FSub(*T_, n_);
    // columns u_1..u_k, -w_1..-w_l
    Mat<B> sys(2 * n_, k + l, F.zero());
    for (size_t i = 0; i < k; ++i)
      for (size_t r = 0; r < 2 * n_; ++r) sys(r, i) = basis_(i, r);
    for (size_t j = 0; j < l; ++j)
      for (size_t r = 0; r < 2 * n_; ++r) sys(r, k + j) = F.neg(o.basis_(j, r));
    Mat<B> null = nullspace(F, sys);
    auto rows = Mat<B>::with_cols(2 * n_);
    for (size_t t = 0; t < null.rows(); ++t) {
      std::vector<FE> v(2 * n_, F.zero());
      for (size_t i = 0; i < k; ++i) {
        if (F.is_zero(null(t, i))) continue;
        for (size_t r = 0; r < 2 * n_; ++r) v[r] = F.add(v[r], F.mul(null(t, i), basis_(i, r)));
      }
      rows.append_row(v);
    }
    return from_rows(*T_, n_, std::move(rows));
  }

  // c * U for a nonzero c in G
  FSub scaled(const GE& c) const {
    std::vector<GVec<B>> vs;
    for (const auto& v : vectors()) vs.push_back(scale_vec(*T_, c, v));
    return span(*T_, n_, vs, Scalars::F);
  }

  bool is_strong() const { return contains(scaled(T_->xi())); }
  size_t dim_g() const {
    if (!is_strong()) throw std::logic_error("dim_g of a subspace that is not a G-subspace");
    return dim_f() / 2;
  }

  // U + xi U, the least G-subspace containing U
  FSub hull() const { return sum(scaled(T_->xi())); }
  // U cap xi^{-1} U, the largest G-subspace inside U
  FSub cohull() const { return intersect(scaled(T_->inv(T_->xi()))); }

  // Annihilator under <u, a + xi b> = sum u_i a_i + q u'_i b_i.
  FSub perp() const {
    const auto& F = T_->base();
    Mat<B> w = basis_;
    for (size_t i = 0; i < w.rows(); ++i)
      for (size_t j = 1; j < 2 * n_; j += 2) w(i, j) = F.mul(T_->q(), w(i, j));
    if (w.rows() == 0) return full(*T_, n_);
    return from_rows(*T_, n_, nullspace(F, w));
  }

  // phi(U) for a G-linear map given by an m x n matrix over G
  FSub image(const Mat<Tower<B>>& phi) const {
    if (phi.cols() != n_) throw std::invalid_argument("map has wrong source dimension");
    std::vector<GVec<B>> vs;
    for (const auto& v : vectors()) vs.push_back(mat_vec(*T_, phi, v));
    FSub out(*T_, phi.rows());
    if (vs.empty()) return out;
    return span(*T_, phi.rows(), vs, Scalars::F);
  }

  // Embed into G^{n+m} at coordinate offset off.
  FSub embedded(size_t total, size_t off) const {
    const auto& F = T_->base();
    auto rows = Mat<B>::with_cols(2 * total);
    for (size_t i = 0; i < basis_.rows(); ++i) {
      std::vector<FE> v(2 * total, F.zero());
      for (size_t j = 0; j < 2 * n_; ++j) v[2 * off + j] = basis_(i, j);
      rows.append_row(v);
    }
    return from_rows(*T_, total, std::move(rows));
  }

  std::string key() const {
    std::string s = std::to_string(n_) + ":";
    const auto& F = T_->base();
    for (const auto& e : basis_.data()) {
      s += F.str(e);
      s += ',';
    }
    return s;
  }

  std::string str() const {
    std::string s = "<";
    bool first = true;
    for (const auto& v : vectors()) {
      if (!first) s += "; ";
      first = false;
      for (size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + T_->str(v[i]);
    }
    return s + ">";
  }

  static GVec<B> scale_vec(const Tower<B>& T, const GE& c, const GVec<B>& v) {
    GVec<B> out(v.size());
    for (size_t i = 0; i < v.size(); ++i) out[i] = T.mul(c, v[i]);
    return out;
  }

 private:
  void check(const FSub& o) const {
    if (o.n_ != n_) throw std::invalid_argument("subspaces live in different ambient spaces");
  }

  const Tower<B>* T_;
  size_t n_;
  Mat<B> basis_;
  std::vector<size_t> piv_;
};

}  // namespace eqp
