#include <doctest.h>

#include <random>

#include "eqp/catalog.hpp"
#include "eqp/corep.hpp"

using namespace eqp;

namespace {

template <class B>
MatrixCorep<B> mk(const Tower<B>& T, const std::string& text) {
  auto v = parse_corep_text(T, text);
  REQUIRE(v.size() == 1);
  return v[0];
}

template <class B>
MatrixCorep<B> k6(const Tower<B>& T, const std::string& row) {
  return mk(T, "corep K6 field any\nstripes: a=1 b=1\n" + row + "\n");
}

template <class B>
MatrixCorep<B> labelled(const Tower<B>& T, const std::string& label) {
  for (auto& M : table2_coreps(T))
    if (M.label == label) return M;
  FAIL("missing " << label);
  return {};
}

template <class B>
bool iso(const CorepSpaces<B>& U, const CorepSpaces<B>& V) {
  auto r = are_isomorphic(U, V);
  CHECK(r.certainty == Certainty::GroundTruth);
  return r.iso;
}

const auto& T2 = tower_gf2();
const auto& Q = tower_qsqrt2();

FSub<PrimeField> G_e1() { return FSub<PrimeField>::span(T2, 1, {{T2.one()}}, Scalars::G); }

template <class B>
GElem<B> random_elem(const Tower<B>& T, std::mt19937& rng) {
  if constexpr (std::is_same_v<B, PrimeField>) {
    auto E = T.elements();
    return E[rng() % E.size()];
  } else {
    std::uniform_int_distribution<long> c(-2, 2);
    return T.make(mpq_class(c(rng)), mpq_class(c(rng)));
  }
}

template <class B>
MatrixCorep<B> random_matrix(const Tower<B>& T, PosetRef P, std::mt19937& rng, size_t maxd0 = 3, size_t maxw = 2) {
  size_t d0 = 1 + rng() % maxd0;
  std::vector<size_t> w;
  for (size_t x = 0; x < P->size(); ++x) w.push_back(rng() % (maxw + 1));
  auto M = zero_matrix_corep(T, P, d0, w);
  for (auto& s : M.stripes)
    for (size_t i = 0; i < s.rows(); ++i)
      for (size_t j = 0; j < s.cols(); ++j) s(i, j) = random_elem(T, rng);
  return M;
}

template <class B>
GMat<B> random_invertible(const Tower<B>& T, size_t n, std::mt19937& rng) {
  while (true) {
    GMat<B> g(n, n, T.zero());
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) g(i, j) = random_elem(T, rng);
    if (is_invertible(T, g)) return g;
  }
}

// Columns independent modulo the span of the strictly lower stripes, worked
// out from the matrix directly.
template <class B>
bool reduced_by_columns(const MatrixCorep<B>& M) {
  const Tower<B>& T = *M.T;
  const Poset& P = *M.P;
  for (size_t x = 0; x < P.size(); ++x) {
    std::vector<GVec<B>> lo, lo_g;
    for (size_t y = 0; y < P.size(); ++y) {
      if (!P.lt(y, x)) continue;
      for (const auto& c : columns_of<B>(M.stripes[y])) (P.strong(y, x) ? lo_g : lo).push_back(c);
    }
    auto R = FSub<B>::span(T, M.d0, lo, Scalars::F).sum(FSub<B>::span(T, M.d0, lo_g, Scalars::G));
    Scalars sc = P.strong_point(x) ? Scalars::G : Scalars::F;
    auto W = R.sum(FSub<B>::span(T, M.d0, columns_of<B>(M.stripes[x]), sc));
    size_t per = P.strong_point(x) ? 2 : 1;
    if (W.dim_f() - R.dim_f() != per * M.stripes[x].cols()) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("spaces of matrices") {
  auto S = spaces_of(k6(T2, "1 | x"));
  CHECK(S.U[0] == FSub<PrimeField>::span(T2, 1, {{T2.one()}}, Scalars::F));
  CHECK(S.U[1] == FSub<PrimeField>::span(T2, 1, {{T2.xi()}}, Scalars::F));
  auto A = spaces_of(labelled(T2, "4(A25-5)"));
  size_t eta = A.P->index("eta");
  CHECK(A.U[eta].contains(FSub<PrimeField>::span(T2, 4, {{T2.one(), T2.zero(), T2.zero(), T2.zero()}}, Scalars::G)));
  CHECK(radical(A, eta) == A.U[A.P->index("b")].hull());
  auto Z = spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0}));
  CHECK(Z.U[0].is_zero());
  CHECK(Z.U[1].is_zero());
  CHECK(dim_vector(Z) == DimVector{1, {0, 0}});
}

TEST_CASE("radicals") {
  auto S = spaces_of(k6(T2, "1 | x"));
  CHECK(radical(S, 0).is_zero());
  CHECK(radical(S, 1).is_zero());
  auto F = spaces_of(finite_type_corep(T2, "F17", ""));
  CHECK(radical(F, F.P->index("b")).contains(F.U[F.P->index("a")]));
}

TEST_CASE("dimension vectors and reduction") {
  auto K = labelled(T2, "4(K6-4)");
  CHECK(dim_vector(spaces_of(K)) == DimVector{4, {4, 4}});
  auto Z = k6(T2, "1 | 0");
  CHECK(Z.dims() == DimVector{1, {1, 1}});
  CHECK(dim_vector(spaces_of(Z)) == DimVector{1, {1, 0}});
  CHECK_FALSE(is_reduced(Z));
  for (const auto& M : printed_matrices(T2)) {
    CAPTURE(M.P->name());
    CHECK(is_reduced(M));
  }
  auto R = matrix_of(spaces_of(K));
  CHECK(R.dims() == DimVector{4, {4, 4}});
  CHECK(is_reduced(R));
}

TEST_CASE("matrix_of inverts spaces_of") {
  for (const auto& M : printed_matrices(T2)) {
    auto S = spaces_of(M);
    auto R = matrix_of(S);
    CHECK(is_reduced(R));
    auto S2 = spaces_of(R);
    for (size_t x = 0; x < S.U.size(); ++x) CHECK(S2.U[x] == S.U[x]);
  }
}

TEST_CASE("random matrices give corepresentations, reduced exactly when columns are independent") {
  std::mt19937 rng(4242);
  auto run = [&](const auto& T) {
    for (const char* id : {"K6", "A25", "K7", "F18"}) {
      PosetRef P = known_poset(id);
      for (int i = 0; i < 50; ++i) {
        auto M = random_matrix(T, P, rng);
        auto S = spaces_of(M);
        CHECK_FALSE(corep_violation(S));
        auto ds = dim_vector(S), dm = M.dims();
        CHECK(ds.d0 == dm.d0);
        bool leq = true;
        for (size_t x = 0; x < ds.d.size(); ++x) leq = leq && ds.d[x] <= dm.d[x];
        CHECK(leq);
        CHECK(is_reduced(M) == reduced_by_columns(M));
        CHECK(is_reduced(M) == (ds == dm));
      }
    }
  };
  run(T2);
  run(Q);
}

TEST_CASE("direct sums") {
  auto A = k6(T2, "1 | 1"), B = k6(T2, "1 | x");
  auto S = direct_sum(A, B);
  CHECK(S.d0 == 2);
  CHECK(S.dims() == DimVector{2, {2, 2}});
  CHECK(T2.is_zero(S.stripes[1](0, 1)));
  CHECK(T2.eq(S.stripes[1](1, 1), T2.xi()));
  auto Z = zero_matrix_corep(T2, known_poset("K6"), 0, {0, 0});
  auto AZ = direct_sum(A, Z);
  CHECK(AZ.dims() == A.dims());
  CHECK(mat_eq(T2, AZ.stripes[0], A.stripes[0]));
  CHECK_THROWS_AS(direct_sum(A, finite_type_corep(T2, "F17", "")), CorepError);
  std::mt19937 rng(5);
  PosetRef P = known_poset("A25");
  for (int i = 0; i < 30; ++i) {
    auto M = random_matrix(T2, P, rng), N = random_matrix(T2, P, rng);
    auto a = dim_vector(spaces_of(M)), b = dim_vector(spaces_of(N));
    auto s = dim_vector(spaces_of(direct_sum(M, N)));
    CHECK(s.d0 == a.d0 + b.d0);
    for (size_t x = 0; x < s.d.size(); ++x) CHECK(s.d[x] == a.d[x] + b.d[x]);
  }
}

TEST_CASE("hom spaces") {
  auto triv = spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0}));
  CHECK(hom_basis(triv, triv).size() == 2);
  auto tt = spaces_of(direct_sum(matrix_of(triv), matrix_of(triv)));
  CHECK(end_basis(tt).size() == 4 * end_basis(triv).size());
  CHECK(hom_basis(spaces_of(k6(T2, "1 | 1")), spaces_of(k6(T2, "1 | x"))).empty());
  // additivity in the first argument on random A25 pairs
  std::mt19937 rng(17);
  PosetRef P = known_poset("A25");
  for (int i = 0; i < 20; ++i) {
    auto U = random_matrix(T2, P, rng, 2), U2 = random_matrix(T2, P, rng, 2), V = random_matrix(T2, P, rng, 2);
    auto sU = spaces_of(U), sU2 = spaces_of(U2), sV = spaces_of(V);
    CHECK(hom_basis(spaces_of(direct_sum(U, U2)), sV).size() == hom_basis(sU, sV).size() + hom_basis(sU2, sV).size());
  }
  // every basis map satisfies the containments
  auto A = spaces_of(labelled(T2, "4(A25-5)"));
  for (const auto& phi : end_basis(A))
    for (size_t x = 0; x < A.U.size(); ++x) CHECK(A.U[x].contains(A.U[x].image(phi)));
}

TEST_CASE("decomposition") {
  auto F17 = spaces_of(finite_type_corep(T2, "F17", ""));
  auto r = is_indecomposable(F17);
  CHECK(r.indecomposable);
  CHECK(r.certainty == Certainty::GroundTruth);
  auto sum = spaces_of(direct_sum(k6(T2, "1 | 1"), k6(T2, "1 | x")));
  auto d = decompose(sum);
  CHECK(d.summands.size() == 2);
  CHECK_FALSE(is_indecomposable(sum).indecomposable);
  auto triv = spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0}));
  CHECK(is_indecomposable(triv).indecomposable);
  // over the rationals the Fitting path answers
  // End = F is decided outright; a larger End only has the Fitting answer
  auto q1 = is_indecomposable(spaces_of(finite_type_corep(Q, "F17", "")));
  CHECK(q1.indecomposable);
  CHECK(q1.certainty == Certainty::GroundTruth);
  auto q = is_indecomposable(spaces_of(labelled(Q, "4(K6-4)")));
  CHECK(q.indecomposable);
  CHECK(q.certainty == Certainty::FittingOnly);
  CHECK(decompose(spaces_of(direct_sum(k6(Q, "1 | 1"), k6(Q, "1 | x")))).summands.size() == 2);
  // a tiny gate turns the exhaustive search into an explicit Undecided
  SearchLimits tiny;
  tiny.end_dim = 0;
  auto u = is_indecomposable(spaces_of(labelled(T2, "4(K6-4)")), tiny);
  CHECK(u.certainty != Certainty::GroundTruth);
}

TEST_CASE("krull-schmidt on shuffled copies") {
  std::vector<MatrixCorep<PrimeField>> k6p = {k6(T2, "1 | x"), k6(T2, "1 | 1"), k6(T2, "1 | 1+x"),
                                             mk(T2, "corep K6 field any\nstripes: a=1 b=0\n1 |\n"),
                                             mk(T2, "corep K6 field any\nstripes: a=0 b=0\n|\n")};
  std::vector<MatrixCorep<PrimeField>> a25p = {
      mk(T2, "corep A25 field any\nstripes: a=1 b=0 eta=1\n1 | | 1\n"),
      mk(T2, "corep A25 field any\nstripes: a=0 b=1 eta=1\n| 1 | 0\n| 0 | 1\n"),
      mk(T2, "corep A25 field any\nstripes: a=1 b=1 eta=0\n1 | x |\n")};
  std::mt19937 rng(31);
  for (int t = 0; t < 50; ++t) {
    const auto& pieces = t % 2 ? a25p : k6p;
    size_t k = 2 + rng() % 2;
    std::vector<CorepSpaces<PrimeField>> parts;
    auto M = pieces[rng() % pieces.size()];
    parts.push_back(spaces_of(M));
    for (size_t i = 1; i < k; ++i) {
      const auto& N = pieces[rng() % pieces.size()];
      parts.push_back(spaces_of(N));
      M = direct_sum(M, N);
    }
    auto S = transform(spaces_of(M), random_invertible(T2, M.d0, rng));
    auto d = decompose(S);
    CHECK(d.certainty == Certainty::GroundTruth);
    std::vector<CorepSpaces<PrimeField>> want;
    for (const auto& p : parts)
      for (const auto& s : decompose(p).summands) want.push_back(s.U);
    REQUIRE(d.summands.size() == want.size());
    std::vector<char> used(want.size(), 0);
    for (const auto& s : d.summands) {
      bool found = false;
      for (size_t i = 0; i < want.size() && !found; ++i)
        if (!used[i] && iso(s.U, want[i])) used[i] = found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("isomorphism") {
  CHECK_FALSE(iso(spaces_of(k6(T2, "1 | x")), spaces_of(k6(T2, "1 | 1+x"))));
  auto K = labelled(T2, "4(K6-4)");
  auto Kp = apply_transformation(K, Move{Move::RowSwap, 0, 3});
  CHECK(iso(spaces_of(K), spaces_of(Kp)));
  auto r = are_isomorphic(spaces_of(k6(Q, "1 | x")), spaces_of(k6(Q, "2 | 2*x")));
  CHECK(r.iso);
  CHECK_FALSE(are_isomorphic(spaces_of(k6(T2, "1 | x")), spaces_of(K)).iso);
}

TEST_CASE("isomorphism survives random admissible moves") {
  std::mt19937 rng(77);
  for (const auto& M0 : printed_matrices(T2)) {
    auto M = M0;
    const Poset& P = *M.P;
    auto E = T2.elements();
    for (int step = 0; step < 20; ++step) {
      Move mv{static_cast<Move::Kind>(rng() % 7)};
      mv.i = rng() % (M.d0 + 1);
      mv.j = rng() % (M.d0 + 1);
      mv.x = P.id(rng() % P.size());
      mv.y = P.id(rng() % P.size());
      mv.coeff = T2.str(E[rng() % E.size()]);
      try {
        M = apply_transformation(M, mv);
      } catch (const CorepError&) {
      }
    }
    CAPTURE(P.name());
    CHECK(iso(spaces_of(M0), spaces_of(M)));
  }
}

TEST_CASE("illegal moves") {
  auto K = labelled(T2, "4(K6-4)");
  CHECK_THROWS_AS(apply_transformation(K, Move{Move::CrossAdd, 0, 0, "a", "b", "1"}), CorepError);
  CHECK_THROWS_AS(apply_transformation(K, Move{Move::ColAdd, 0, 1, "a", "", "x"}), CorepError);
  CHECK_THROWS_AS(apply_transformation(K, Move{Move::RowScale, 0, 0, "", "", "0"}), CorepError);
  CHECK_THROWS_AS(apply_transformation(K, Move{Move::RowSwap, 0, 9}), CorepError);
  auto A = labelled(T2, "4(A25-5)");
  auto A2 = apply_transformation(A, Move{Move::CrossAdd, 0, 1, "b", "eta", "x"});
  CHECK(iso(spaces_of(A), spaces_of(A2)));
  auto F = finite_type_corep(T2, "F17", "");
  CHECK_THROWS_AS(apply_transformation(F, Move{Move::CrossAdd, 0, 0, "a", "b", "x"}), CorepError);
  CHECK_NOTHROW(apply_transformation(F, Move{Move::CrossAdd, 0, 0, "a", "b", "1"}));
}

TEST_CASE("duality") {
  auto triv = spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0}));
  CHECK(dim_vector(dual_corep(triv)) == DimVector{1, {2, 2}});
  auto K = spaces_of(labelled(T2, "4(K6-4)"));
  CHECK(iso(dual_corep(K), K));
  for (const auto& M : printed_matrices(T2)) {
    auto S = spaces_of(M);
    CAPTURE(M.P->name());
    CAPTURE(M.label);
    auto D = dual_corep(S);
    CHECK_FALSE(corep_violation(D));
    CHECK(iso(dual_corep(D), S));
    CHECK(is_indecomposable(D).indecomposable == is_indecomposable(S).indecomposable);
  }
  // (U + V)* = U* + V*
  auto U = spaces_of(k6(T2, "1 | x")), V = spaces_of(k6(T2, "1 | 1"));
  CHECK(iso(dual_corep(direct_sum(U, V)), direct_sum(dual_corep(U), dual_corep(V))));
  // the GF(3) tower has p = 0 as well; a tower with odd characteristic and p != 0 has no duality
  auto odd = Tower<PrimeField>::make(PrimeField(3), 1, 2);
  CHECK_FALSE(odd.duality_enabled());
  auto Z = spaces_of(zero_matrix_corep(odd, known_poset("K6"), 1, {0, 0}));
  CHECK_THROWS_AS(dual_corep(Z), CorepError);
}

TEST_CASE("sincere-dual construction on printed sincere matrices") {
  // Replacing U_x by its radical where the dual vanishes does not always give
  // a sincere dual. F17 [1 | x] by hand: U = (G; F, G), U* has d_b = 0, so
  // U_b becomes F; then U_a^perp = U_b^perp and the dual is (1; b=1, a=0).
  std::vector<std::string> bad, good;
  for (const auto& M : printed_matrices(T2)) {
    auto S = spaces_of(M);
    if (!support_flags(S).sincere) continue;
    auto D = sincere_dual_construction(S);
    CHECK_FALSE(corep_violation(D));
    std::string id = M.P->name() + (M.label.empty() ? "" : " " + M.label);
    (support_flags(D).sincere ? good : bad).push_back(id);
  }
  CHECK(bad == std::vector<std::string>{"F15 B", "F15 E", "F16", "F17", "F18"});
  CHECK(std::find(good.begin(), good.end(), "A25 4(A25-5)") != good.end());
  auto F = sincere_dual_construction(spaces_of(finite_type_corep(T2, "F17", "")));
  CHECK(dim_vector(F) == DimVector{1, {0, 1}});
}

TEST_CASE("extensions") {
  auto K = spaces_of(labelled(T2, "4(K6-4)"));
  auto same = extend_subposet(K, K.P);
  for (size_t x = 0; x < K.U.size(); ++x) CHECK(same.U[x] == K.U[x]);
  PosetRef A25 = known_poset("A25");
  auto V = extend_subposet(K, A25);
  CHECK(V.U[A25->index("eta")] == K.U[K.P->index("b")].hull());
  CHECK_FALSE(corep_violation(V));
  auto triv = spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0}));
  auto Vt = extend_subposet(triv, A25);
  for (const auto& u : Vt.U) CHECK(u.is_zero());
  CHECK_THROWS_AS(extend_subposet(K, known_poset("F17")), CorepError);
}

TEST_CASE("adjoining a strong point") {
  auto K = spaces_of(labelled(T2, "4(K6-4)"));
  PosetRef A25 = known_poset("A25");
  auto top = adjoin_point(K, A25, "eta", Side::Top);
  CHECK(top.choice_independent.iso);
  CHECK(iso(top.V, spaces_of(labelled(T2, "4(A25-5)"))));
  PosetRef A25s = known_poset("A25*");
  auto bot = adjoin_point(K, A25s, "eta", Side::Bottom);
  CHECK(bot.choice_independent.iso);
  CHECK(iso(bot.V, spaces_of(labelled(T2, "4(A25*-5)"))));
  auto triv = spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0}));
  auto t = adjoin_point(triv, A25, "eta", Side::Top);
  CHECK(t.V.U[A25->index("eta")] == G_e1());
  // bottom adjoin below zero spaces has nowhere to go
  CHECK_THROWS_AS(adjoin_point(triv, A25s, "eta", Side::Bottom), CorepError);
  CHECK_THROWS_AS(adjoin_point(K, A25, "b", Side::Top), CorepError);
}

TEST_CASE("support flags") {
  auto f = support_flags(spaces_of(labelled(T2, "4(A25-5)")));
  CHECK(f.sincere);
  CHECK(f.supp == PointSet{0, 1, 2});
  auto triv = support_flags(spaces_of(zero_matrix_corep(T2, known_poset("K6"), 1, {0, 0})));
  CHECK(triv.trivial);
  CHECK_FALSE(triv.sincere);
  auto a = support_flags(spaces_of(mk(T2, "corep K6 field any\nstripes: a=1 b=0\n1 |\n")));
  CHECK(a.supp == PointSet{0});
}

TEST_CASE("codimension vectors on K7") {
  PosetRef K7 = known_poset("K7");
  std::array<std::string, 4> anchors = {"a", "p", "q", "theta"};
  auto triv = spaces_of(zero_matrix_corep(T2, K7, 1, {0, 0, 0, 0}));
  auto r = r_vectors(triv, anchors);
  CHECK(r.r == std::array<long, 4>{1, 1, 2, 2});
  CHECK(r.rs == std::array<long, 4>{0, 0, 0, 0});
  for (size_t n : {1, 2, 3}) {
    CorepSpaces<PrimeField> full{&T2, K7, n, std::vector<FSub<PrimeField>>(4, FSub<PrimeField>::full(T2, n))};
    auto rf = r_vectors(full, anchors);
    long d = static_cast<long>(n);
    CHECK(rf.r == std::array<long, 4>{0, 0, 0, 0});
    CHECK(rf.rs == std::array<long, 4>{d, d, 2 * d, 2 * d});
  }
  auto W = spaces_of(mk(T2, "corep K7 field any\nstripes: a=0 p=0 q=2 theta=0\n| | 1 x |\n"));
  CHECK(r_vectors(W, anchors).r[0] == 0);
  CHECK_THROWS_AS(r_vectors(triv, {"p", "a", "q", "theta"}), CorepError);
}

TEST_CASE("text format round-trips") {
  for (const auto& M : printed_matrices(Q)) {
    auto s = format_corep(M);
    auto back = parse_corep_text(Q, s);
    REQUIRE(back.size() == 1);
    CHECK(format_corep(back[0]) == s);
  }
  CHECK_THROWS_AS(parse_corep_text(T2, "corep K6 field any\nstripes: a=1\n1\n"), CorepError);
  CHECK_THROWS_AS(parse_corep_text(T2, "corep K6 field any\nstripes: a=1 b=1\n1 | 1 1\n"), CorepError);
  CHECK_THROWS_AS(parse_corep_text(T2, "corep K6 field qsqrt2\nstripes: a=1 b=1\n1 | 1\n"), CorepError);
  CHECK_THROWS_AS(parse_corep_text(T2, "corep Kx field any\nstripes: a=1 b=1\n1 | 1\n"), CorepError);
}

TEST_CASE("finite-type matrices satisfy the hull conditions for F17") {
  auto F = spaces_of(finite_type_corep(T2, "F17", ""));
  CHECK(F.U[F.P->index("a")].hull().is_full());
  CHECK(F.U[F.P->index("b")].is_full());
}
