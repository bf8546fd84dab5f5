#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace eqp {

// Dense row-major matrix. Arithmetic goes through a field object K that
// provides add/sub/mul/inv/is_zero/zero/one for the element type.
template <class E>
class Matrix {
 public:
  Matrix() = default;
  Matrix(size_t r, size_t c, const E& fill) : r_(r), c_(c), a_(r * c, fill) {}

  size_t rows() const { return r_; }
  size_t cols() const { return c_; }
  bool empty() const { return r_ == 0 || c_ == 0; }

  E& operator()(size_t i, size_t j) { return a_[i * c_ + j]; }
  const E& operator()(size_t i, size_t j) const { return a_[i * c_ + j]; }

  std::vector<E> row(size_t i) const { return {a_.begin() + i * c_, a_.begin() + (i + 1) * c_}; }
  std::vector<E> col(size_t j) const {
    std::vector<E> v;
    v.reserve(r_);
    for (size_t i = 0; i < r_; ++i) v.push_back((*this)(i, j));
    return v;
  }
  void append_row(const std::vector<E>& v) {
    if (r_ == 0 && c_ == 0) c_ = v.size();
    if (v.size() != c_) throw std::invalid_argument("row length mismatch");
    a_.insert(a_.end(), v.begin(), v.end());
    ++r_;
  }
  void swap_rows(size_t i, size_t j) {
    if (i == j) return;
    for (size_t k = 0; k < c_; ++k) std::swap(a_[i * c_ + k], a_[j * c_ + k]);
  }
  void truncate_rows(size_t r) {
    a_.resize(r * c_);
    r_ = r;
  }
  // An r x c matrix with no rows still remembers its width.
  static Matrix with_cols(size_t c) {
    Matrix m;
    m.c_ = c;
    return m;
  }

  const std::vector<E>& data() const { return a_; }
  bool operator==(const Matrix&) const = default;

 private:
  size_t r_ = 0, c_ = 0;
  std::vector<E> a_;
};

template <class K>
using Mat = Matrix<typename K::Element>;

template <class K>
Mat<K> identity(const K& k, size_t n) {
  Mat<K> m(n, n, k.zero());
  for (size_t i = 0; i < n; ++i) m(i, i) = k.one();
  return m;
}

template <class K>
Mat<K> zeros(const K& k, size_t r, size_t c) {
  return Mat<K>(r, c, k.zero());
}

template <class K>
Mat<K> mat_mul(const K& k, const Mat<K>& a, const Mat<K>& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matrix product dimension mismatch");
  Mat<K> c(a.rows(), b.cols(), k.zero());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t l = 0; l < a.cols(); ++l) {
      if (k.is_zero(a(i, l))) continue;
      for (size_t j = 0; j < b.cols(); ++j) c(i, j) = k.add(c(i, j), k.mul(a(i, l), b(l, j)));
    }
  return c;
}

template <class K>
Mat<K> mat_add(const K& k, const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("matrix sum dimension mismatch");
  Mat<K> c = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) c(i, j) = k.add(a(i, j), b(i, j));
  return c;
}

template <class K>
Mat<K> mat_scale(const K& k, const typename K::Element& s, const Mat<K>& a) {
  Mat<K> c = a;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) c(i, j) = k.mul(s, a(i, j));
  return c;
}

template <class K>
std::vector<typename K::Element> mat_vec(const K& k, const Mat<K>& a, const std::vector<typename K::Element>& v) {
  std::vector<typename K::Element> out(a.rows(), k.zero());
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (!k.is_zero(v[j])) out[i] = k.add(out[i], k.mul(a(i, j), v[j]));
  return out;
}

template <class E>
Matrix<E> transpose(const Matrix<E>& a) {
  Matrix<E> t(a.cols(), a.rows(), a.rows() && a.cols() ? a(0, 0) : E{});
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

template <class K>
bool mat_eq(const K& k, const Mat<K>& a, const Mat<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (size_t i = 0; i < a.rows(); ++i)
    for (size_t j = 0; j < a.cols(); ++j)
      if (!k.eq(a(i, j), b(i, j))) return false;
  return true;
}

template <class K>
bool is_zero_matrix(const K& k, const Mat<K>& a) {
  for (const auto& e : a.data())
    if (!k.is_zero(e)) return false;
  return true;
}

// In-place reduced row echelon form; zero rows are dropped. Returns pivot columns.
template <class K>
std::vector<size_t> rref(const K& k, Mat<K>& m) {
  std::vector<size_t> piv;
  size_t r = 0;
  for (size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    size_t sel = r;
    while (sel < m.rows() && k.is_zero(m(sel, c))) ++sel;
    if (sel == m.rows()) continue;
    m.swap_rows(r, sel);
    auto inv = k.inv(m(r, c));
    for (size_t j = c; j < m.cols(); ++j) m(r, j) = k.mul(inv, m(r, j));
    for (size_t i = 0; i < m.rows(); ++i) {
      if (i == r || k.is_zero(m(i, c))) continue;
      auto f = m(i, c);
      for (size_t j = c; j < m.cols(); ++j) m(i, j) = k.sub(m(i, j), k.mul(f, m(r, j)));
    }
    piv.push_back(c);
    ++r;
  }
  m.truncate_rows(r);
  return piv;
}

template <class K>
size_t rank(const K& k, Mat<K> m) {
  return rref(k, m).size();
}

// Rows form a basis of {x : m x = 0}.
template <class K>
Mat<K> nullspace(const K& k, Mat<K> m) {
  size_t n = m.cols();
  auto piv = rref(k, m);
  std::vector<bool> is_piv(n, false);
  for (auto c : piv) is_piv[c] = true;
  auto out = Mat<K>::with_cols(n);
  for (size_t f = 0; f < n; ++f) {
    if (is_piv[f]) continue;
    std::vector<typename K::Element> v(n, k.zero());
    v[f] = k.one();
    for (size_t i = 0; i < piv.size(); ++i) v[piv[i]] = k.neg(m(i, f));
    out.append_row(v);
  }
  return out;
}

// Some x with a x = b, if one exists.
template <class K>
std::optional<std::vector<typename K::Element>> solve(const K& k, const Mat<K>& a,
                                                      const std::vector<typename K::Element>& b) {
  Mat<K> aug(a.rows(), a.cols() + 1, k.zero());
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    aug(i, a.cols()) = b[i];
  }
  auto piv = rref(k, aug);
  if (!piv.empty() && piv.back() == a.cols()) return std::nullopt;
  std::vector<typename K::Element> x(a.cols(), k.zero());
  for (size_t i = 0; i < piv.size(); ++i) x[piv[i]] = aug(i, a.cols());
  return x;
}

template <class K>
std::optional<Mat<K>> inverse(const K& k, const Mat<K>& a) {
  size_t n = a.rows();
  if (a.cols() != n) return std::nullopt;
  Mat<K> aug(n, 2 * n, k.zero());
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = 0; j < n; ++j) aug(i, j) = a(i, j);
    aug(i, n + i) = k.one();
  }
  auto piv = rref(k, aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Mat<K> inv(n, n, k.zero());
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) inv(i, j) = aug(i, n + j);
  return inv;
}

template <class K>
bool is_invertible(const K& k, const Mat<K>& a) {
  return a.rows() == a.cols() && rank(k, a) == a.rows();
}

template <class K>
Mat<K> mat_pow(const K& k, const Mat<K>& a, size_t e) {
  Mat<K> r = identity(k, a.rows()), b = a;
  while (e) {
    if (e & 1) r = mat_mul(k, r, b);
    e >>= 1;
    if (e) b = mat_mul(k, b, b);
  }
  return r;
}

template <class K>
std::string mat_str(const K& k, const Mat<K>& a) {
  std::string s;
  for (size_t i = 0; i < a.rows(); ++i) {
    for (size_t j = 0; j < a.cols(); ++j) {
      if (j) s += ' ';
      s += k.str(a(i, j));
    }
    s += '\n';
  }
  return s;
}

}  // namespace eqp
