#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace eqp {

struct PosetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Kind { Weak, Strong };

struct PointDecl {
  std::string id;
  Kind kind;
};

// x < y declared weak or strong
struct Generator {
  std::string x, y;
  Kind kind;
};

using PointSet = std::vector<size_t>;

// A finite poset with a strong sub-relation closed under composition with
// the order on either side. Immutable once built.
class Poset {
 public:
  Poset() = default;

  static Poset build(std::string name, const std::vector<PointDecl>& points,
                     const std::vector<Generator>& gens);

  const std::string& name() const { return name_; }
  size_t size() const { return ids_.size(); }
  const std::string& id(size_t i) const { return ids_.at(i); }
  const std::vector<std::string>& ids() const { return ids_; }
  std::optional<size_t> find(std::string_view id) const;
  size_t index(std::string_view id) const;

  bool strong_point(size_t i) const { return st_[i][i]; }
  Kind kind(size_t i) const { return st_[i][i] ? Kind::Strong : Kind::Weak; }
  bool leq(size_t i, size_t j) const { return le_[i][j]; }
  bool lt(size_t i, size_t j) const { return i != j && le_[i][j]; }
  bool strong(size_t i, size_t j) const { return st_[i][j]; }
  bool weak(size_t i, size_t j) const { return le_[i][j] && !st_[i][j]; }
  bool comparable(size_t i, size_t j) const { return le_[i][j] || le_[j][i]; }

  // A generating set: covers with their strength plus strong pairs that the
  // covers do not force.
  std::vector<Generator> generators() const;
  std::vector<PointDecl> declarations() const;

  Poset renamed(std::string name) const {
    Poset p = *this;
    p.name_ = std::move(name);
    return p;
  }

  bool operator==(const Poset& o) const { return ids_ == o.ids_ && le_ == o.le_ && st_ == o.st_; }

 private:
  std::string name_;
  std::vector<std::string> ids_;
  std::vector<std::vector<char>> le_, st_;

  friend Poset dual_poset(const Poset&);
  friend Poset restrict_poset(const Poset&, const PointSet&, std::string);
  friend Poset disjoint_union(const Poset&, const Poset&, std::string);
};

// point weight: 1 for strong, 2 for weak
int point_weight(const Poset& P, size_t x);
bool is_antichain(const Poset& P, const PointSet& X);
// Weight of the antichain X (error if X is not one).
int weight(const Poset& P, const PointSet& X);
// Maximal antichain weight.
int weight(const Poset& P);

PointSet n_set(const Poset& P, const PointSet& X);

enum class Cone { Up, StrongUp, WeakUp, Down, StrongDown, WeakDown, StrictUp, StrictDown };
PointSet cone(const Poset& P, const PointSet& X, Cone kind);

struct Structure {
  bool chain = false, antichain = false, dyad = false, triad = false, garland = false;
  bool completely_weak = false, ordinary = false;
};
Structure structure_predicates(const Poset& P, const PointSet& X);

Poset dual_poset(const Poset& P);
Poset restrict_poset(const Poset& P, const PointSet& X, std::string name = "");
Poset disjoint_union(const Poset& P, const Poset& Q, std::string name = "");

// A bijection m with P-point i -> Q-point m[i] preserving (anti: reversing)
// both relations. Brute force, at most 12 points.
std::optional<std::vector<size_t>> poset_iso(const Poset& P, const Poset& Q, bool anti = false);
// Same search without the size guard, for internal pattern matching.
std::optional<std::vector<size_t>> poset_iso_unbounded(const Poset& P, const Poset& Q, bool anti);

// The critical posets: K1..K5 (ordinary, all strong) and K6..K9.
const std::vector<Poset>& critical_posets();
const Poset& critical_poset(std::string_view id);

struct Occurrence {
  std::string critical;
  PointSet points;
};
std::vector<Occurrence> critical_occurrences(const Poset& P);

enum class Verdict { OneParameter, FiniteTypeCandidate, NotOneParameter, Undetermined };
struct CriterionResult {
  Verdict verdict;
  int weight;
  size_t occurrences;     // full subposets counted by point set
  size_t distinct_types;  // distinct critical posets among them
  std::vector<Occurrence> list;
};
CriterionResult one_parameter_criterion(const Poset& P);
std::string verdict_name(Verdict v);

// ---- text format ----
// poset <name> / point <id> weak|strong / rel <x> < <y> weak|strong / # comment
Poset parse_poset(std::string_view text);
// Parse every poset block in a multi-poset text (blocks start at "poset").
std::vector<Poset> parse_posets(std::string_view text);
std::string format_poset(const Poset& P);
// The closed relation as a matrix: '.' incomparable, 'w' weak, 's' strong.
std::string format_relation_matrix(const Poset& P);

std::string point_set_str(const Poset& P, const PointSet& X);

}  // namespace eqp
