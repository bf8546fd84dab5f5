#pragma once

#include <string>
#include <vector>

#include "eqp/companion.hpp"
#include "eqp/corep.hpp"
#include "eqp/corep_io.hpp"
#include "eqp/families.hpp"

namespace eqp {

// Every corep block of an embedded or user text, over tower T.
template <class B>
std::vector<MatrixCorep<B>> parse_corep_text(const Tower<B>& T, std::string_view text) {
  TextBlocks b = split_blocks(text);
  std::vector<Poset> local = parse_posets(b.posets);
  PosetResolver resolve = [&](const std::string& id) -> PosetRef {
    for (const auto& P : local)
      if (P.name() == id) return share(P);
    return known_poset(id);
  };
  std::vector<MatrixCorep<B>> out;
  for (const auto& [line, block] : b.coreps) out.push_back(parse_corep(T, block, resolve, line - 1));
  return out;
}

// The printed finite-type and extended matrices, in file order.
template <class B>
std::vector<MatrixCorep<B>> printed_matrices(const Tower<B>& T) {
  return parse_corep_text(T, embedded_data("matrices.txt"));
}

// (F13..F18, letter); letter is empty for posets with a single entry.
template <class B>
MatrixCorep<B> finite_type_corep(const Tower<B>& T, const std::string& name, const std::string& letter) {
  for (auto& M : printed_matrices(T))
    if (M.P->name() == name && M.label == letter) return M;
  throw CorepError("no printed matrix (" + name + (letter.empty() ? "" : "-" + letter) + ")");
}

template <class B>
std::vector<MatrixCorep<B>> finite_type_coreps(const Tower<B>& T) {
  std::vector<MatrixCorep<B>> v;
  for (auto& M : printed_matrices(T))
    if (M.P->name().size() == 3 && M.P->name()[0] == 'F') v.push_back(std::move(M));
  return v;
}

// 4(K6-4), 4(A25-5), 4(A25*-5)
template <class B>
std::vector<MatrixCorep<B>> table2_coreps(const Tower<B>& T) {
  std::vector<MatrixCorep<B>> v;
  for (auto& M : printed_matrices(T))
    if (M.P->name()[0] != 'F') v.push_back(std::move(M));
  return v;
}

// ---- series ----

enum class XDomain { FrobeniusOverF, FrobeniusOverG, FreeG };
enum class K8Variant { Char2, Separable, Inseparable };

// A block lam I + mu X (or mu Xbar when conj).
template <class B>
struct SeriesEntry {
  GElem<B> lam, mu;
  bool conj = false;
};

template <class B>
struct SeriesSpec {
  std::string poset;
  size_t block_rows = 1;
  // per point index: block_rows x (block columns) entries
  std::vector<std::vector<std::vector<SeriesEntry<B>>>> stripes;
  XDomain domain = XDomain::FreeG;
};

template <class B>
MatrixCorep<B> series_instantiate(const Tower<B>& T, const SeriesSpec<B>& S, const GMat<B>& X) {
  size_t n = X.rows();
  if (n == 0 || X.cols() != n) throw CorepError("series parameter must be a nonempty square matrix");
  if (S.domain == XDomain::FrobeniusOverF)
    for (const auto& e : X.data())
      if (!T.in_base(e)) throw CorepError("series parameter must have entries in the base field");
  PosetRef P = known_poset(S.poset);
  if (!P || S.stripes.size() != P->size()) throw CorepError("series template does not fit poset " + S.poset);
  GMat<B> Xb = X;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) Xb(i, j) = T.bar(X(i, j));
  MatrixCorep<B> M{&T, P, S.block_rows * n, {}, "", std::nullopt};
  for (const auto& st : S.stripes) {
    size_t bc = st.empty() ? 0 : st[0].size();
    GMat<B> m(M.d0, bc * n, T.zero());
    for (size_t br = 0; br < st.size(); ++br)
      for (size_t c = 0; c < bc; ++c) {
        const auto& e = st[br][c];
        const GMat<B>& Y = e.conj ? Xb : X;
        for (size_t i = 0; i < n; ++i)
          for (size_t j = 0; j < n; ++j) {
            auto v = T.mul(e.mu, Y(i, j));
            if (i == j) v = T.add(v, e.lam);
            m(br * n + i, c * n + j) = v;
          }
      }
    M.stripes.push_back(std::move(m));
  }
  return M;
}

namespace detail {

template <class B>
SeriesEntry<B> ent(GElem<B> lam, GElem<B> mu, bool conj = false) {
  return {lam, mu, conj};
}

}  // namespace detail

template <class B>
SeriesSpec<B> k6_series_spec(const Tower<B>& T) {
  auto z = T.zero(), o = T.one(), x = T.xi();
  return {"K6", 1, {{{detail::ent(o, z)}}, {{detail::ent(x, o)}}}, XDomain::FrobeniusOverF};
}

template <class B>
SeriesSpec<B> k7_series_spec(const Tower<B>& T) {
  auto z = T.zero(), o = T.one(), x = T.xi();
  auto I = detail::ent(o, z), Z = detail::ent(z, z);
  // points of K7 in order a, p, q, theta
  return {"K7",
          2,
          {{{I}, {I}}, {{detail::ent(z, o)}, {detail::ent(x, z)}}, {{I}, {Z}}, {{I}, {Z}}},
          XDomain::FrobeniusOverF};
}

template <class B>
SeriesSpec<B> k8_series_spec(const Tower<B>& T, K8Variant v) {
  auto z = T.zero(), o = T.one(), x = T.xi();
  auto I = detail::ent(o, z), Z = detail::ent(z, z);
  std::vector<SeriesEntry<B>> second;
  switch (v) {
    case K8Variant::Char2: second = {detail::ent(z, x), I}; break;
    case K8Variant::Separable: second = {detail::ent(T.bar(x), x, true), detail::ent(o, o, true)}; break;
    case K8Variant::Inseparable: second = {detail::ent(x, x, true), detail::ent(z, o, true)}; break;
  }
  // points of K8 in order rho, sigma, a
  return {"K8", 2, {{{I}, {Z}}, {{Z}, {I}}, {{detail::ent(x, z), I}, second}}, XDomain::FreeG};
}

inline std::string k8_variant_name(K8Variant v) {
  switch (v) {
    case K8Variant::Char2: return "char2";
    case K8Variant::Separable: return "separable";
    case K8Variant::Inseparable: return "inseparable";
  }
  return "?";
}

template <class B>
void check_k8_variant(const Tower<B>& T, K8Variant v) {
  bool ok = false;
  switch (v) {
    case K8Variant::Char2: ok = T.characteristic() == 2 && !T.inseparable(); break;
    case K8Variant::Separable: ok = T.characteristic() != 2; break;
    case K8Variant::Inseparable: ok = T.inseparable(); break;
  }
  if (!ok) throw CorepError("K8 variant " + k8_variant_name(v) + " does not match tower " + T.name());
}

// Upper nilpotent Jordan block.
template <class B>
GMat<B> jordan_nilpotent(const Tower<B>& T, size_t n) {
  GMat<B> J = zeros(T, n, n);
  for (size_t i = 0; i + 1 < n; ++i) J(i, i + 1) = T.one();
  return J;
}

// [I | I + xi J]
template <class B>
MatrixCorep<B> k6_discrete(const Tower<B>& T, size_t n) {
  auto o = T.one(), x = T.xi(), z = T.zero();
  SeriesSpec<B> s{"K6", 1, {{{detail::ent(o, z)}}, {{detail::ent(o, x)}}}, XDomain::FreeG};
  return series_instantiate(T, s, jordan_nilpotent(T, n));
}

template <class B>
MatrixCorep<B> k6_series(const Tower<B>& T, const GMat<B>& X) {
  return series_instantiate(T, k6_series_spec(T), X);
}

template <class B>
MatrixCorep<B> k7_series(const Tower<B>& T, const GMat<B>& X) {
  return series_instantiate(T, k7_series_spec(T), X);
}

template <class B>
MatrixCorep<B> k8_series(const Tower<B>& T, K8Variant v, const GMat<B>& X) {
  check_k8_variant(T, v);
  return series_instantiate(T, k8_series_spec(T, v), X);
}

}  // namespace eqp
