#include "eqp/tits.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

#include "eqp/families.hpp"

namespace eqp {

namespace {

void check_size(const Poset& P, const DimVector& d) {
  if (d.d.size() != P.size())
    throw TitsError("vector has " + std::to_string(d.d.size()) + " point coordinates, poset " + P.name() + " has " +
                    std::to_string(P.size()));
}

long l_of(const Poset& P, size_t x, size_t y) { return P.strong(x, y) ? 2 : 1; }

// True when every coordinate is bounded in absolute value by the box.
bool inside_abs(const DimVector& v, const Box& b) {
  if (std::labs(v.d0) > b.d0) return false;
  for (size_t i = 0; i < v.d.size(); ++i)
    if (std::labs(v.d[i]) > b.d[i]) return false;
  return true;
}

bool nonnegative(const DimVector& v) {
  if (v.d0 < 0) return false;
  for (auto x : v.d)
    if (x < 0) return false;
  return true;
}

bool is_zero(const DimVector& v) {
  if (v.d0 != 0) return false;
  for (auto x : v.d)
    if (x != 0) return false;
  return true;
}

bool leq_vec(const DimVector& a, const DimVector& b) {
  if (a.d0 > b.d0) return false;
  for (size_t i = 0; i < a.d.size(); ++i)
    if (a.d[i] > b.d[i]) return false;
  return true;
}

// Breadth-first reflection closure inside the search box. Stops early when
// target is reached (if given).
std::set<DimVector> reflection_closure(const Poset& P, const Box& search, const DimVector* target) {
  std::set<DimVector> seen;
  std::deque<DimVector> queue;
  auto push = [&](const DimVector& v) {
    if (!inside_abs(v, search)) return;
    if (seen.insert(v).second) queue.push_back(v);
  };
  push(simple_root(P, kVertex0));
  for (size_t x = 0; x < P.size(); ++x) push(simple_root(P, x));
  while (!queue.empty()) {
    DimVector v = queue.front();
    queue.pop_front();
    if (target && v == *target) break;
    push(reflect(P, kVertex0, v));
    for (size_t x = 0; x < P.size(); ++x) push(reflect(P, x, v));
  }
  return seen;
}

}  // namespace

DimVector zero_vector(const Poset& P) { return DimVector{0, std::vector<long>(P.size(), 0)}; }

DimVector simple_root(const Poset& P, size_t x) {
  DimVector e = zero_vector(P);
  if (x == kVertex0) e.d0 = 1;
  else e.d.at(x) = 1;
  return e;
}

long tits_form(const Poset& P, const DimVector& d) {
  check_size(P, d);
  long f = 2 * d.d0 * d.d0;
  long sum = 0;
  for (size_t x = 0; x < P.size(); ++x) {
    sum += d.d[x];
    for (size_t y = 0; y < P.size(); ++y)
      if (P.leq(x, y)) f += l_of(P, x, y) * d.d[x] * d.d[y];
  }
  return f - 2 * d.d0 * sum;
}

mpq_class bilinear(const Poset& P, const DimVector& a, const DimVector& b) {
  check_size(P, a);
  check_size(P, b);
  DimVector s = a, t = a;
  s.d0 += b.d0;
  t.d0 -= b.d0;
  for (size_t i = 0; i < a.d.size(); ++i) {
    s.d[i] += b.d[i];
    t.d[i] -= b.d[i];
  }
  mpq_class v(tits_form(P, s) - tits_form(P, t), 4);
  v.canonicalize();
  return v;
}

DimVector reflect(const Poset& P, size_t x, const DimVector& d) {
  DimVector e = simple_root(P, x);
  long lxx = (x == kVertex0) ? 2 : l_of(P, x, x);
  mpq_class c = mpq_class(2, lxx) * bilinear(P, d, e);
  c.canonicalize();
  if (c.get_den() != 1) throw TitsError("reflection coefficient is not an integer");
  long k = c.get_num().get_si();
  DimVector r = d;
  if (x == kVertex0) r.d0 -= k;
  else r.d[x] -= k;
  return r;
}

Box uniform_box(const Poset& P, long d0, long dx) { return Box{d0, std::vector<long>(P.size(), dx)}; }

std::vector<DimVector> enumerate_admissible_roots(const Poset& P, const Box& out_box, const Box& search_box) {
  auto seen = reflection_closure(P, search_box, nullptr);
  std::vector<DimVector> out;
  for (const auto& v : seen) {
    if (!nonnegative(v) || v.d0 <= 0) continue;
    if (v.d0 > out_box.d0) continue;
    bool in = true;
    for (size_t i = 0; i < v.d.size(); ++i)
      if (v.d[i] > out_box.d[i]) in = false;
    if (in) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<DimVector> enumerate_admissible_roots(const Poset& P, const Box& out_box) {
  Box search{2 * out_box.d0 + 2, {}};
  for (auto b : out_box.d) search.d.push_back(2 * b + 2);
  return enumerate_admissible_roots(P, out_box, search);
}

std::optional<DimVector> minimal_imaginary_root(const Poset& P, const Box& box) {
  std::vector<DimVector> zeros;
  DimVector v = zero_vector(P);
  size_t n = P.size();
  while (true) {
    if (!is_zero(v) && tits_form(P, v) == 0) {
      long g = v.d0;
      for (auto x : v.d) g = std::gcd(g, x);
      if (g == 1) zeros.push_back(v);
    }
    size_t i = 0;
    for (; i < n; ++i) {
      if (++v.d[i] <= box.d[i]) break;
      v.d[i] = 0;
    }
    if (i == n) {
      if (++v.d0 > box.d0) break;
    }
  }
  std::vector<DimVector> minimal;
  for (const auto& z : zeros) {
    bool min = true;
    for (const auto& w : zeros)
      if (!(w == z) && leq_vec(w, z)) min = false;
    if (min) minimal.push_back(z);
  }
  if (minimal.empty()) return std::nullopt;
  if (minimal.size() > 1) {
    std::string list;
    for (const auto& m : minimal) list += " " + format_tuple(m);
    throw TitsError("minimal imaginary root is ambiguous:" + list);
  }
  return minimal.front();
}

std::optional<DimVector> minimal_imaginary_root(const Poset& P) {
  long dx = P.size() <= 6 ? 4 : 3;
  return minimal_imaginary_root(P, uniform_box(P, 6, dx));
}

RootClass classify_vector(const Poset& P, const DimVector& d) {
  check_size(P, d);
  RootClass rc;
  if (!nonnegative(d) || is_zero(d)) return rc;
  long f = tits_form(P, d);
  if (f == 0) {
    rc.kind = RootKind::ImaginaryRoot;
    return rc;
  }
  std::optional<DimVector> mu;
  try {
    mu = minimal_imaginary_root(P);
  } catch (const TitsError&) {
    mu.reset();
  }
  if ((f == 1 || f == 2) && d.d0 > 0) {
    Box search{2 * (d.d0 + (mu ? mu->d0 : 1)), {}};
    for (size_t i = 0; i < P.size(); ++i) search.d.push_back(2 * (d.d[i] + (mu ? mu->d[i] : 1)));
    auto seen = reflection_closure(P, search, &d);
    if (seen.count(d)) {
      rc.kind = RootKind::AdmissibleRoot;
      return rc;
    }
  }
  if (auto m = special_family_match(P, d)) {
    rc.kind = RootKind::SpecialListed;
    rc.family = m->first;
    rc.k = m->second;
  }
  return rc;
}

std::string root_class_str(const RootClass& c) {
  switch (c.kind) {
    case RootKind::AdmissibleRoot: return "AdmissibleRoot";
    case RootKind::ImaginaryRoot: return "ImaginaryRoot";
    case RootKind::SpecialListed: return "SpecialListed(" + c.family + ",k=" + std::to_string(c.k) + ")";
    case RootKind::Other: return "Other";
  }
  return "?";
}

bool same_type(const DimVector& d, const DimVector& e, const DimVector& mu) {
  if (d.d.size() != e.d.size() || d.d.size() != mu.d.size()) return false;
  auto multiple = [&](const DimVector& a, const DimVector& b) {
    // a - b = c mu with c >= 0
    std::optional<long> c;
    auto coord = [&](long diff, long m) {
      if (m == 0) return diff == 0;
      if (diff % m != 0) return false;
      long k = diff / m;
      if (k < 0 || (c && *c != k)) return false;
      c = k;
      return true;
    };
    if (!coord(a.d0 - b.d0, mu.d0)) return false;
    for (size_t i = 0; i < a.d.size(); ++i)
      if (!coord(a.d[i] - b.d[i], mu.d[i])) return false;
    return true;
  };
  return multiple(d, e) || multiple(e, d);
}

DimVector parse_dim_vector(const Poset& P, std::string_view text) {
  std::string s(text);
  auto semi = s.find(';');
  DimVector d = zero_vector(P);
  auto trim = [](std::string t) {
    t.erase(0, t.find_first_not_of(" \t()"));
    t.erase(t.find_last_not_of(" \t()") + 1);
    return t;
  };
  auto number = [&](const std::string& t) {
    std::string u = trim(t);
    if (u.empty() || u.find_first_not_of("-0123456789") != std::string::npos)
      throw TitsError("malformed coordinate '" + t + "'");
    return std::stol(u);
  };
  d.d0 = number(s.substr(0, semi));
  if (semi == std::string::npos) return d;
  std::string rest = s.substr(semi + 1);
  std::stringstream ss(rest);
  std::string item;
  std::vector<char> set(P.size(), 0);
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw TitsError("expected 'point=value', got '" + item + "'");
    size_t x = P.index(trim(item.substr(0, eq)));
    if (set[x]) throw TitsError("coordinate '" + P.id(x) + "' given twice");
    set[x] = 1;
    d.d[x] = number(item.substr(eq + 1));
  }
  return d;
}

std::string format_dim_vector(const Poset& P, const DimVector& d) {
  std::string s = std::to_string(d.d0) + ";";
  for (size_t i = 0; i < d.d.size(); ++i) s += (i ? ", " : " ") + P.id(i) + "=" + std::to_string(d.d[i]);
  return s;
}

std::string format_tuple(const DimVector& d) {
  std::string s = "(" + std::to_string(d.d0) + ";";
  for (size_t i = 0; i < d.d.size(); ++i) s += (i ? "," : "") + std::to_string(d.d[i]);
  return s + ")";
}

}  // namespace eqp
