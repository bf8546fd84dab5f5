#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eqp/corep.hpp"
#include "eqp/tits.hpp"

namespace eqp {

enum class Status { Pass, Fail, Undecided, Skipped, Info };
std::string status_name(Status s);

struct ReportRow {
  std::string case_id, check, expected, computed;
  Status status;
};

struct Report {
  std::string suite;
  std::vector<ReportRow> rows;
  std::vector<std::string> notes;

  void add(std::string case_id, std::string check, std::string expected, std::string computed, Status s);
  // expected == computed decides Pass/Fail
  void expect(std::string case_id, std::string check, const std::string& expected, const std::string& computed);
  void append(const Report& o);
  size_t count(Status s) const;
  // No failing and no undecided row.
  bool pass() const { return count(Status::Fail) == 0 && count(Status::Undecided) == 0; }
  // Header "case check expected computed status", LF line endings.
  std::string tsv() const;
  std::string summary() const;
};

// Named conditions every indecomposable of F15, F17, F18, K6 and A25
// satisfies (empty for other posets), and the K8 series hypotheses.
template <class B>
std::vector<std::pair<std::string, bool>> hull_conditions(const CorepSpaces<B>& S);
template <class B>
std::vector<std::pair<std::string, bool>> k8_hypotheses(const CorepSpaces<B>& S);

// Dimension tables, step vectors and parametric families (k = 1..5).
Report verify_tits_tables();

// Printed matrices plus the K6/K7/K8 series instance sets over T.
template <class B>
Report verify_catalog(const Tower<B>& T, const SearchLimits& lim = {});

struct OracleOptions {
  std::uint64_t budget = 10'000'000;  // enumerated candidates per dimension vector
  size_t threads = 0;                  // 0: EQP_THREADS, else hardware concurrency
  SearchLimits lim;
};

struct OracleVector {
  DimVector d;
  Status status = Status::Pass;  // Skipped over budget, Undecided if a test was
  std::uint64_t candidates = 0;
  std::vector<CorepSpaces<PrimeField>> classes;  // one representative per class
};

// Thread count from EQP_THREADS (>= 1) or the hardware.
size_t default_threads();

// Every vector d <= box with d0 >= 1, in lexicographic order.
std::vector<DimVector> box_vectors(const Poset& P, const Box& box);

// Isomorphism classes of indecomposables with dimension vector d, by
// enumerating every corepresentation with that vector.
OracleVector brute_force_vector(const FiniteTower& T, PosetRef P, const DimVector& d, const OracleOptions& opt = {});
std::vector<OracleVector> brute_force_indecomposables(const FiniteTower& T, PosetRef P, const Box& box,
                                                      const OracleOptions& opt = {});

// Oracle counts against the root classification. spot: a second finite
// tower whose counts must be strictly larger at imaginary roots with d0 = 1.
Report verify_theorem_d(PosetRef P, const Box& box, const FiniteTower& T, const FiniteTower* spot = nullptr,
                        const OracleOptions& opt = {});

// Pairwise isomorphism of S(X), S(X') over companion blocks of size n versus
// similarity of the blocks. id in {K6, K7, K8}.
Report verify_series_separation(const std::string& id, size_t n, const FiniteTower& T, const SearchLimits& lim = {});

// Double dual, indecomposability of the dual, the sincere-dual construction,
// and duals of sums, on oracle classes in the box and catalog instances of P.
Report verify_duality_suite(PosetRef P, const Box& box, const FiniteTower& T, const OracleOptions& opt = {});

// Exhaustive checks of hull, cohull and perp over all F-subspaces of G^n,
// n = 1..nmax, enumerated from generator matrices.
Report verify_subspace_calculus(const FiniteTower& T, size_t nmax = 2);

}  // namespace eqp
