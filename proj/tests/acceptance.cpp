// One PASS/FAIL line per acceptance criterion. Exit status is nonzero if any
// selected criterion fails.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "eqp/catalog.hpp"
#include "eqp/families.hpp"
#include "eqp/poset.hpp"
#include "eqp/tits.hpp"
#include "eqp/verify.hpp"

using namespace eqp;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> problems;
  std::string detail;

  void fail(std::string why) {
    pass = false;
    problems.push_back(std::move(why));
  }
  void require(bool ok, const std::string& why) {
    if (!ok) fail(why);
  }
};

// failing and undecided rows of a report, as problems
void absorb(Outcome& o, const Report& r) {
  for (const auto& row : r.rows)
    if (row.status == Status::Fail || row.status == Status::Undecided)
      o.fail(r.suite + ": " + row.case_id + " [" + row.check + "] expected " + row.expected + ", computed " +
             row.computed + (row.status == Status::Undecided ? " (undecided)" : ""));
}

// 1. every dimension-table row and both step vectors
Outcome table_reproduction() {
  Outcome o;
  size_t rows = 0;
  for (const auto& id : dim_table_ids()) {
    const auto& t = dim_table(id);
    for (const auto& row : t.rows) {
      ++rows;
      long f = tits_form(*t.poset, row.d);
      if (f != row.f)
        o.fail(id + " T=" + row.type + " " + format_tuple(row.d) + ": printed f = " + std::to_string(row.f) +
               ", computed " + std::to_string(f));
    }
  }
  const DimVector mu7{2, {1, 1, 1, 1}}, mu9{3, {2, 2, 1, 1}};
  o.require(dim_table("K7").mu == mu7, "K7 step vector differs from (2;1,1,1,1)");
  o.require(dim_table("K9").mu == mu9, "K9 step vector differs from (3;2,2,1,1)");
  o.require(tits_form(*known_poset("K7"), mu7) == 0, "f(mu_K7) != 0");
  o.require(tits_form(*known_poset("K9"), mu9) == 0, "f(mu_K9) != 0");
  o.detail = std::to_string(rows) + " rows";
  return o;
}

// 2. parametric families for k = 1..5
Outcome parametric_families() {
  Outcome o;
  size_t n = 0;
  for (const auto& fam : families()) {
    long allowed[] = {1, 2, 4};
    bool ok_f = false;
    for (long a : allowed) ok_f = ok_f || fam.f == a;
    o.require(ok_f, fam.poset + ": annotated f = " + std::to_string(fam.f) + " outside {1,2,4}");
    o.require(fam.special || fam.f != 4, fam.poset + ": f = 4 outside the special families");
    for (long k = 1; k <= 5; ++k) {
      auto r = sincere_dims(fam.poset, k);
      if (!r) {
        o.fail(fam.poset + ": no dimension vector for k = " + std::to_string(k));
        continue;
      }
      ++n;
      long f = tits_form(*known_poset(fam.poset), r->d);
      if (f != fam.f)
        o.fail(fam.poset + " k=" + std::to_string(k) + " " + format_tuple(r->d) + ": annotated f = " +
               std::to_string(fam.f) + ", computed " + std::to_string(f));
    }
  }
  for (const char* id : {"A45", "A47"}) {
    auto f = find_family(id);
    o.require(f && f->f == 4, std::string(id) + " is not annotated f = 4");
  }
  o.detail = std::to_string(families().size()) + " families, " + std::to_string(n) + " vectors";
  return o;
}

// 3. the one-parameter criterion and sincere classes
Outcome criterion() {
  Outcome o;
  std::vector<Poset> ps;
  for (const char* k : {"K6", "K7", "K8", "K9"}) ps.push_back(*known_poset(k));
  for (const auto& P : sincere_list()) ps.push_back(P);
  o.require(ps.size() == 28, "expected 28 sincere posets, have " + std::to_string(ps.size()));
  for (const auto& P : ps) {
    for (bool dual : {false, true}) {
      Poset Q = dual ? dual_poset(P) : P;
      auto v = one_parameter_criterion(Q).verdict;
      if (v != Verdict::OneParameter) o.fail(Q.name() + ": " + verdict_name(v));
      auto sc = sincere_class(Q);
      if (!sc || sc->id != P.name()) o.fail(Q.name() + ": sincere class " + (sc ? sc->id : "none"));
    }
  }
  for (const char* f : {"F13", "F14", "F15", "F16", "F17", "F18"}) {
    auto v = one_parameter_criterion(*known_poset(f)).verdict;
    if (v != Verdict::FiniteTypeCandidate) o.fail(std::string(f) + ": " + verdict_name(v));
  }
  auto u = disjoint_union(*known_poset("K6"), *known_poset("K8"), "K6+K8");
  auto v = one_parameter_criterion(u).verdict;
  if (v != Verdict::NotOneParameter) o.fail("K6 + K8: " + verdict_name(v));
  o.detail = "28 posets and duals, F13-F18, K6 + K8";
  return o;
}

// 4. catalog over both reference towers
Outcome catalog_validity() {
  Outcome o;
  auto g = verify_catalog(tower_gf2());
  absorb(o, g);
  for (const auto& row : g.rows)
    if (row.check == "indecomposable" && row.computed.find("ground-truth") == std::string::npos)
      o.fail("gf2 " + row.case_id + ": indecomposability not ground truth (" + row.computed + ")");
  auto q = verify_catalog(tower_qsqrt2());
  absorb(o, q);
  o.detail = std::to_string(g.rows.size()) + " + " + std::to_string(q.rows.size()) + " rows";
  return o;
}

// 5. oracle counts on K6 and A25, with the GF(3) spot check
Outcome theorem_d() {
  Outcome o;
  OracleOptions opt;
  opt.budget = 10'000'000;
  const auto& T2 = tower_gf2();
  const auto& T3 = tower_gf3();
  std::ostringstream det;
  for (const char* id : {"K6", "A25"}) {
    PosetRef P = known_poset(id);
    Box box{2, std::vector<long>(P->size(), 2)};
    auto r = verify_theorem_d(P, box, T2, std::string(id) == "K6" ? &T3 : nullptr, opt);
    absorb(o, r);
    if (r.count(Status::Skipped)) o.fail(std::string(id) + ": " + std::to_string(r.count(Status::Skipped)) + " vectors over budget");
    det << id << " " << r.rows.size() << " rows; ";
  }
  auto c = brute_force_vector(T2, known_poset("K6"), DimVector{1, {1, 1}}, opt);
  o.require(c.classes.size() == 3, "K6 (1;1,1): " + std::to_string(c.classes.size()) + " classes, expected 3");
  auto c3 = brute_force_vector(T3, known_poset("K6"), DimVector{1, {1, 1}}, opt);
  o.require(c3.classes.size() > c.classes.size(), "K6 (1;1,1) over gf3: " + std::to_string(c3.classes.size()) +
                                                      " classes, not more than over gf2");
  det << "K6 (1;1,1): " << c.classes.size() << " classes over gf2, " << c3.classes.size() << " over gf3";
  o.detail = det.str();
  return o;
}

// 6. series separation
Outcome series_separation() {
  Outcome o;
  const auto& T2 = tower_gf2();
  size_t rows = 0;
  for (auto [id, n] : {std::pair<const char*, size_t>{"K6", 1}, {"K6", 2}, {"K7", 1}}) {
    auto r = verify_series_separation(id, n, T2);
    absorb(o, r);
    rows += r.rows.size();
  }
  o.detail = std::to_string(rows) + " rows";
  return o;
}

// 7. duality on the oracle classes of the criterion-5 box
Outcome duality() {
  Outcome o;
  size_t rows = 0;
  for (const char* id : {"K6", "A25"}) {
    PosetRef P = known_poset(id);
    auto r = verify_duality_suite(P, Box{2, std::vector<long>(P->size(), 2)}, tower_gf2());
    absorb(o, r);
    rows += r.rows.size();
  }
  o.detail = std::to_string(rows) + " rows";
  return o;
}

// 8. subspace calculus
Outcome subspaces() {
  Outcome o;
  auto r = verify_subspace_calculus(tower_gf2(), 2);
  absorb(o, r);
  o.detail = std::to_string(r.rows.size()) + " rows";
  return o;
}

struct Criterion {
  const char* name;
  double limit_s;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-8)")->check(CLI::Range(1, 8));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> all = {
      {"table-reproduction", 1, table_reproduction},
      {"parametric-families", 1, parametric_families},
      {"one-parameter-criterion", 10, criterion},
      {"catalog-validity", 120, catalog_validity},
      {"oracle-counts", 600, theorem_d},
      {"series-separation", 300, series_separation},
      {"duality-suite", 600, duality},
      {"subspace-calculus", 60, subspaces},
  };
  bool ok = true;
  for (size_t i = 0; i < all.size(); ++i) {
    if (only && static_cast<size_t>(only) != i + 1) continue;
    const auto& c = all[i];
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (s > c.limit_s) {
      std::ostringstream m;
      m << "runtime " << s << " s over the " << c.limit_s << " s limit";
      o.fail(m.str());
    }
    std::printf("%s criterion %zu %s (%s; %.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, c.name, o.detail.c_str(), s);
    for (const auto& p : o.problems) std::printf("  %s\n", p.c_str());
    ok = ok && o.pass;
  }
  return ok ? 0 : 1;
}
