#pragma once

#include <gmpxx.h>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eqp/poset.hpp"

namespace eqp {

// Vector over P u {0}: d0 and one coordinate per point (by point index).
struct DimVector {
  long d0 = 0;
  std::vector<long> d;

  bool operator==(const DimVector&) const = default;
  auto operator<=>(const DimVector&) const = default;
};

// Index used for the extra vertex 0 in reflections and simple roots.
inline constexpr size_t kVertex0 = static_cast<size_t>(-1);

struct TitsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

DimVector zero_vector(const Poset& P);
DimVector simple_root(const Poset& P, size_t x);

long tits_form(const Poset& P, const DimVector& d);
// <a, b> = (f(a + b) - f(a - b)) / 4
mpq_class bilinear(const Poset& P, const DimVector& a, const DimVector& b);
// d - (2 / l_xx) <d, e_x> e_x
DimVector reflect(const Poset& P, size_t x, const DimVector& d);

// Box: inclusive upper bounds on d0 and on every coordinate.
struct Box {
  long d0;
  std::vector<long> d;
};
Box uniform_box(const Poset& P, long d0, long dx);

// Reflection orbit of the simple roots, explored inside the search box
// (absolute values bounded coordinatewise) and then filtered to non-negative
// vectors with d0 > 0 inside the output box. Sorted.
std::vector<DimVector> enumerate_admissible_roots(const Poset& P, const Box& out_box, const Box& search_box);
std::vector<DimVector> enumerate_admissible_roots(const Poset& P, const Box& out_box);

// Componentwise-minimal non-negative nonzero vector with f = 0 and coprime
// coordinates inside the box; throws when several minimal ones exist.
std::optional<DimVector> minimal_imaginary_root(const Poset& P, const Box& box);
std::optional<DimVector> minimal_imaginary_root(const Poset& P);

enum class RootKind { AdmissibleRoot, ImaginaryRoot, SpecialListed, Other };
struct RootClass {
  RootKind kind = RootKind::Other;
  std::string family;  // SpecialListed only
  long k = 0;
};
RootClass classify_vector(const Poset& P, const DimVector& d);
std::string root_class_str(const RootClass& c);

// d and d' differ by a non-negative integer multiple of mu (either order).
bool same_type(const DimVector& d, const DimVector& e, const DimVector& mu);

// "d0; x=n, y=m" (omitted points are 0)
DimVector parse_dim_vector(const Poset& P, std::string_view text);
std::string format_dim_vector(const Poset& P, const DimVector& d);
// "(d0; d_1, ..., d_n)"
std::string format_tuple(const DimVector& d);

}  // namespace eqp
