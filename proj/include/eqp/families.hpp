#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eqp/corep.hpp"
#include "eqp/poset.hpp"
#include "eqp/tits.hpp"

namespace eqp {

// Text of an embedded data file (posets.txt, families.txt, ...).
std::string_view embedded_data(std::string_view name);
std::vector<std::string> embedded_data_names();

// The 24 sincere posets A25..A48 in data order.
const std::vector<Poset>& sincere_list();
// K6..K9, A25..A48; a trailing '*' gives the dual.
const Poset& sincere_poset(std::string_view id);
// Every named poset: critical, sincere (and duals), F13..F18. Null if unknown.
PosetRef known_poset(const std::string& id);

struct Lin {
  long a = 0, b = 0;  // a k + b
  long at(long k) const { return a * k + b; }
};
struct Family {
  std::string poset;
  long f = 0;
  Lin d0;
  std::vector<Lin> d;  // by point index
  bool special = false;
};
const std::vector<Family>& families();
const Family* find_family(std::string_view id);

struct FamilyDims {
  DimVector d;
  long f;
};
// nullopt when the poset has no parametric family.
std::optional<FamilyDims> sincere_dims(std::string_view id, long k);

// Match d against the special families (A45..A48) on an isomorphic copy.
std::optional<std::pair<std::string, long>> special_family_match(const Poset& P, const DimVector& d);

struct SincereClass {
  std::string id;
  bool anti;
};
std::optional<SincereClass> sincere_class(const Poset& P);

struct DimTableRow {
  std::string type;  // "4" or "4*"
  long f;
  DimVector d;
};
struct DimTable {
  std::string id;  // A25, A25*, K7, ...
  PosetRef poset;
  std::vector<DimTableRow> rows;
  std::optional<DimVector> mu;
};
const DimTable& dim_table(std::string_view id);
std::vector<std::string> dim_table_ids();

}  // namespace eqp
