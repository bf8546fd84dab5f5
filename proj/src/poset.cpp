#include "eqp/poset.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace eqp {

namespace {

using BoolMat = std::vector<std::vector<char>>;

// Reflexive-transitive closure of the order and fixpoint of the strong law.
void close_relations(BoolMat& le, BoolMat& st) {
  size_t n = le.size();
  for (size_t k = 0; k < n; ++k)
    for (size_t i = 0; i < n; ++i)
      if (le[i][k])
        for (size_t j = 0; j < n; ++j)
          if (le[k][j]) le[i][j] = 1;
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t x = 0; x < n; ++x)
      for (size_t z = 0; z < n; ++z) {
        if (st[x][z] || !le[x][z]) continue;
        for (size_t y = 0; y < n; ++y)
          if ((le[x][y] && st[y][z]) || (st[x][y] && le[y][z])) {
            st[x][z] = 1;
            changed = true;
            break;
          }
      }
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

Kind parse_kind(const std::string& s, size_t lineno) {
  if (s == "weak") return Kind::Weak;
  if (s == "strong") return Kind::Strong;
  throw PosetError("line " + std::to_string(lineno) + ": expected weak|strong, got '" + s + "'");
}

}  // namespace

Poset Poset::build(std::string name, const std::vector<PointDecl>& points, const std::vector<Generator>& gens) {
  Poset P;
  P.name_ = std::move(name);
  size_t n = points.size();
  P.le_.assign(n, std::vector<char>(n, 0));
  P.st_.assign(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    if (points[i].id.empty()) throw PosetError("empty point id");
    if (P.find(points[i].id)) throw PosetError("duplicate point '" + points[i].id + "'");
    P.ids_.push_back(points[i].id);
    P.le_[i][i] = 1;
    P.st_[i][i] = points[i].kind == Kind::Strong;
  }
  for (const auto& g : gens) {
    size_t x = P.index(g.x), y = P.index(g.y);
    if (x == y) throw PosetError("relation '" + g.x + " < " + g.y + "' is not strict");
    P.le_[x][y] = 1;
    if (g.kind == Kind::Strong) P.st_[x][y] = 1;
  }
  close_relations(P.le_, P.st_);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = i + 1; j < n; ++j)
      if (P.le_[i][j] && P.le_[j][i])
        throw PosetError("cycle through '" + P.ids_[i] + "' and '" + P.ids_[j] + "'");
  for (const auto& g : gens) {
    if (g.kind != Kind::Weak) continue;
    size_t x = P.index(g.x), y = P.index(g.y);
    if (!P.st_[x][y]) continue;
    std::string via;
    for (size_t m = 0; m < n && via.empty(); ++m)
      if ((P.le_[x][m] && P.st_[m][y]) || (P.st_[x][m] && P.le_[m][y])) via = P.ids_[m];
    throw PosetError("contradiction: " + g.x + " < " + g.y + " declared weak but forced strong via (" + g.x +
                     ", " + via + ", " + g.y + ")");
  }
  return P;
}

std::optional<size_t> Poset::find(std::string_view id) const {
  for (size_t i = 0; i < ids_.size(); ++i)
    if (ids_[i] == id) return i;
  return std::nullopt;
}

size_t Poset::index(std::string_view id) const {
  auto i = find(id);
  if (!i) throw PosetError("unknown point '" + std::string(id) + "' in poset " + name_);
  return *i;
}

std::vector<PointDecl> Poset::declarations() const {
  std::vector<PointDecl> out;
  for (size_t i = 0; i < size(); ++i) out.push_back({ids_[i], kind(i)});
  return out;
}

std::vector<Generator> Poset::generators() const {
  size_t n = size();
  std::vector<Generator> gens;
  BoolMat le(n, std::vector<char>(n, 0)), st(n, std::vector<char>(n, 0));
  for (size_t i = 0; i < n; ++i) {
    le[i][i] = 1;
    st[i][i] = st_[i][i];
  }
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      if (!lt(i, j)) continue;
      bool cover = true;
      for (size_t m = 0; m < n && cover; ++m)
        if (m != i && m != j && lt(i, m) && lt(m, j)) cover = false;
      if (!cover) continue;
      gens.push_back({ids_[i], ids_[j], st_[i][j] ? Kind::Strong : Kind::Weak});
      le[i][j] = 1;
      if (st_[i][j]) st[i][j] = 1;
    }
  close_relations(le, st);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (st_[i][j] && !st[i][j]) {
        gens.push_back({ids_[i], ids_[j], Kind::Strong});
        st[i][j] = 1;
        close_relations(le, st);
      }
  return gens;
}

int point_weight(const Poset& P, size_t x) { return P.strong_point(x) ? 1 : 2; }

bool is_antichain(const Poset& P, const PointSet& X) {
  for (size_t i = 0; i < X.size(); ++i)
    for (size_t j = i + 1; j < X.size(); ++j)
      if (P.comparable(X[i], X[j])) return false;
  return true;
}

int weight(const Poset& P, const PointSet& X) {
  if (!is_antichain(P, X)) throw PosetError("point set is not an antichain");
  int w = 0;
  for (auto x : X) w += point_weight(P, x);
  return w;
}

int weight(const Poset& P) {
  size_t n = P.size();
  int best = 0;
  std::vector<size_t> chosen;
  // include/exclude search over antichains
  auto rec = [&](auto&& self, size_t i, int w) -> void {
    best = std::max(best, w);
    for (size_t j = i; j < n; ++j) {
      bool ok = true;
      for (auto c : chosen)
        if (P.comparable(c, j)) {
          ok = false;
          break;
        }
      if (!ok) continue;
      chosen.push_back(j);
      self(self, j + 1, w + point_weight(P, j));
      chosen.pop_back();
    }
  };
  rec(rec, 0, 0);
  return best;
}

PointSet n_set(const Poset& P, const PointSet& X) {
  PointSet out;
  for (size_t y = 0; y < P.size(); ++y) {
    bool inc = true;
    for (auto x : X)
      if (P.comparable(x, y)) inc = false;
    if (inc) out.push_back(y);
  }
  return out;
}

PointSet cone(const Poset& P, const PointSet& X, Cone kind) {
  PointSet out;
  for (size_t y = 0; y < P.size(); ++y) {
    bool in = false;
    for (auto x : X) {
      switch (kind) {
        case Cone::Up: in = in || P.leq(x, y); break;
        case Cone::StrongUp: in = in || P.strong(x, y); break;
        case Cone::WeakUp: in = in || P.weak(x, y); break;
        case Cone::Down: in = in || P.leq(y, x); break;
        case Cone::StrongDown: in = in || P.strong(y, x); break;
        case Cone::WeakDown: in = in || P.weak(y, x); break;
        case Cone::StrictUp: in = in || P.leq(x, y); break;
        case Cone::StrictDown: in = in || P.leq(y, x); break;
      }
    }
    if ((kind == Cone::StrictUp || kind == Cone::StrictDown) &&
        std::find(X.begin(), X.end(), y) != X.end())
      in = false;
    if (in) out.push_back(y);
  }
  return out;
}

Structure structure_predicates(const Poset& P, const PointSet& X) {
  Structure s;
  bool all_comp = true, none_comp = true, garland = true;
  for (size_t i = 0; i < X.size(); ++i) {
    int inc = 0;
    for (size_t j = 0; j < X.size(); ++j) {
      if (i == j) continue;
      if (P.comparable(X[i], X[j])) none_comp = false;
      else {
        all_comp = false;
        ++inc;
      }
    }
    if (inc > 1) garland = false;
  }
  s.chain = all_comp;
  s.antichain = none_comp;
  s.dyad = none_comp && X.size() == 2;
  s.triad = none_comp && X.size() == 3;
  s.garland = garland;
  bool cw = true, ord = true;
  for (auto x : X) {
    if (P.strong_point(x)) cw = false;
    else ord = false;
    for (auto y : X)
      if (P.strong(x, y)) cw = false;
  }
  s.completely_weak = cw;
  s.ordinary = ord;
  return s;
}

Poset dual_poset(const Poset& P) {
  Poset D = P;
  size_t n = P.size();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) {
      D.le_[i][j] = P.le_[j][i];
      D.st_[i][j] = P.st_[j][i];
    }
  const std::string& nm = P.name();
  if (!nm.empty() && nm.back() == '*') D.name_ = nm.substr(0, nm.size() - 1);
  else D.name_ = nm + "*";
  return D;
}

Poset restrict_poset(const Poset& P, const PointSet& X, std::string name) {
  Poset R;
  R.name_ = name.empty() ? P.name() + "|sub" : std::move(name);
  size_t k = X.size();
  R.le_.assign(k, std::vector<char>(k, 0));
  R.st_.assign(k, std::vector<char>(k, 0));
  for (size_t i = 0; i < k; ++i) {
    R.ids_.push_back(P.id(X[i]));
    for (size_t j = 0; j < k; ++j) {
      R.le_[i][j] = P.le_[X[i]][X[j]];
      R.st_[i][j] = P.st_[X[i]][X[j]];
    }
  }
  return R;
}

Poset disjoint_union(const Poset& P, const Poset& Q, std::string name) {
  Poset U;
  U.name_ = name.empty() ? P.name() + "+" + Q.name() : std::move(name);
  size_t n = P.size(), m = Q.size();
  U.le_.assign(n + m, std::vector<char>(n + m, 0));
  U.st_.assign(n + m, std::vector<char>(n + m, 0));
  for (size_t i = 0; i < n; ++i) {
    U.ids_.push_back(P.id(i));
    for (size_t j = 0; j < n; ++j) {
      U.le_[i][j] = P.le_[i][j];
      U.st_[i][j] = P.st_[i][j];
    }
  }
  for (size_t i = 0; i < m; ++i) {
    std::string id = Q.id(i);
    while (std::find(U.ids_.begin(), U.ids_.end(), id) != U.ids_.end()) id += "'";
    U.ids_.push_back(id);
    for (size_t j = 0; j < m; ++j) {
      U.le_[n + i][n + j] = Q.le_[i][j];
      U.st_[n + i][n + j] = Q.st_[i][j];
    }
  }
  return U;
}

namespace {

struct Profile {
  size_t strong_points = 0, comparable = 0, strong_pairs = 0;
  bool operator==(const Profile&) const = default;
};

Profile profile(const Poset& P) {
  Profile p;
  for (size_t i = 0; i < P.size(); ++i) {
    if (P.strong_point(i)) ++p.strong_points;
    for (size_t j = 0; j < P.size(); ++j) {
      if (P.lt(i, j)) ++p.comparable;
      if (i != j && P.strong(i, j)) ++p.strong_pairs;
    }
  }
  return p;
}

}  // namespace

std::optional<std::vector<size_t>> poset_iso_unbounded(const Poset& P, const Poset& Q, bool anti) {
  size_t n = P.size();
  if (Q.size() != n || !(profile(P) == profile(Q))) return std::nullopt;
  std::vector<size_t> m(n);
  std::vector<char> used(n, 0);
  auto rel_ok = [&](size_t i, size_t j) {
    size_t a = anti ? m[j] : m[i], b = anti ? m[i] : m[j];
    return P.leq(i, j) == Q.leq(a, b) && P.strong(i, j) == Q.strong(a, b);
  };
  auto rec = [&](auto&& self, size_t k) -> bool {
    if (k == n) return true;
    for (size_t c = 0; c < n; ++c) {
      if (used[c] || Q.kind(c) != P.kind(k)) continue;
      m[k] = c;
      bool ok = true;
      for (size_t j = 0; j < k && ok; ++j) ok = rel_ok(j, k) && rel_ok(k, j);
      if (!ok) continue;
      used[c] = 1;
      if (self(self, k + 1)) return true;
      used[c] = 0;
    }
    return false;
  };
  if (!rec(rec, 0)) return std::nullopt;
  return m;
}

std::optional<std::vector<size_t>> poset_iso(const Poset& P, const Poset& Q, bool anti) {
  if (P.size() > 12 || Q.size() > 12) throw PosetError("isomorphism search is limited to 12 points");
  return poset_iso_unbounded(P, Q, anti);
}

const std::vector<Poset>& critical_posets() {
  static const std::vector<Poset> list = [] {
    auto S = Kind::Strong, W = Kind::Weak;
    auto chains = [&](std::string name, std::vector<int> lengths) {
      std::vector<PointDecl> pts;
      std::vector<Generator> gens;
      char c = 'a';
      for (int len : lengths) {
        for (int i = 1; i <= len; ++i) {
          pts.push_back({std::string(1, c) + std::to_string(i), S});
          if (i > 1) gens.push_back({std::string(1, c) + std::to_string(i - 1), std::string(1, c) + std::to_string(i), S});
        }
        ++c;
      }
      return Poset::build(std::move(name), pts, gens);
    };
    std::vector<Poset> v;
    v.push_back(chains("K1", {1, 1, 1, 1}));
    v.push_back(chains("K2", {2, 2, 2}));
    v.push_back(chains("K3", {1, 3, 3}));
    v.push_back(chains("K4", {1, 2, 5}));
    v.push_back(Poset::build("K5",
                             {{"n1", S}, {"n2", S}, {"n3", S}, {"n4", S}, {"c1", S}, {"c2", S}, {"c3", S}, {"c4", S}},
                             {{"n1", "n3", S}, {"n2", "n3", S}, {"n2", "n4", S}, {"c1", "c2", S}, {"c2", "c3", S},
                              {"c3", "c4", S}}));
    v.push_back(Poset::build("K6", {{"a", W}, {"b", W}}, {}));
    v.push_back(Poset::build("K7", {{"a", W}, {"p", W}, {"q", W}, {"theta", S}}, {{"a", "p", W}, {"p", "q", W}}));
    v.push_back(Poset::build("K8", {{"rho", S}, {"sigma", S}, {"a", W}}, {}));
    v.push_back(Poset::build("K9", {{"a", W}, {"p", W}, {"zeta", S}, {"eta", S}}, {{"a", "p", W}, {"zeta", "eta", S}}));
    return v;
  }();
  return list;
}

const Poset& critical_poset(std::string_view id) {
  for (const auto& K : critical_posets())
    if (K.name() == id) return K;
  throw PosetError("unknown critical poset '" + std::string(id) + "'");
}

std::vector<Occurrence> critical_occurrences(const Poset& P) {
  size_t n = P.size();
  if (n > 24) throw PosetError("critical subposet search is limited to 24 points");
  std::map<size_t, std::vector<const Poset*>> by_size;
  for (const auto& K : critical_posets()) by_size[K.size()].push_back(&K);
  std::vector<Occurrence> out;
  for (const auto& [k, pats] : by_size) {
    if (k > n) continue;
    std::vector<size_t> X(k);
    for (size_t i = 0; i < k; ++i) X[i] = i;
    while (true) {
      Poset sub = restrict_poset(P, X);
      for (const Poset* K : pats)
        if (poset_iso_unbounded(sub, *K, false)) {
          out.push_back({K->name(), X});
          break;
        }
      // next combination
      size_t i = k;
      while (i > 0 && X[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++X[i - 1];
      for (size_t j = i; j < k; ++j) X[j] = X[j - 1] + 1;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Occurrence& a, const Occurrence& b) {
    return a.critical.size() != b.critical.size() ? a.critical.size() < b.critical.size() : a.critical < b.critical;
  });
  return out;
}

CriterionResult one_parameter_criterion(const Poset& P) {
  CriterionResult r;
  r.weight = weight(P);
  r.list = critical_occurrences(P);
  r.occurrences = r.list.size();
  std::vector<std::string> types;
  for (const auto& o : r.list)
    if (std::find(types.begin(), types.end(), o.critical) == types.end()) types.push_back(o.critical);
  r.distinct_types = types.size();
  if (r.occurrences >= 2) r.verdict = Verdict::NotOneParameter;
  else if (r.weight > 4) r.verdict = Verdict::Undetermined;
  else if (r.occurrences == 1) r.verdict = Verdict::OneParameter;
  else r.verdict = Verdict::FiniteTypeCandidate;
  return r;
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::OneParameter: return "OneParameter";
    case Verdict::FiniteTypeCandidate: return "FiniteTypeCandidate";
    case Verdict::NotOneParameter: return "NotOneParameter";
    case Verdict::Undetermined: return "Undetermined";
  }
  return "?";
}

std::vector<Poset> parse_posets(std::string_view text) {
  std::vector<Poset> out;
  std::string name;
  std::vector<PointDecl> pts;
  std::vector<Generator> gens;
  std::vector<size_t> gen_lines;
  bool open = false;
  size_t header = 0;
  auto flush = [&] {
    if (open) {
      for (size_t i = 0; i < gens.size(); ++i)
        for (const auto* id : {&gens[i].x, &gens[i].y})
          if (std::none_of(pts.begin(), pts.end(), [&](const PointDecl& d) { return d.id == *id; }))
            throw PosetError("line " + std::to_string(gen_lines[i]) + ": unknown point '" + *id + "' in poset " +
                             name);
      try {
        out.push_back(Poset::build(name, pts, gens));
      } catch (const PosetError& e) {
        throw PosetError("poset at line " + std::to_string(header) + ": " + e.what());
      }
    }
    pts.clear();
    gens.clear();
    gen_lines.clear();
  };
  std::istringstream is{std::string(text)};
  std::string line;
  size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto tok = split_ws(line);
    if (tok.empty()) continue;
    const std::string where = "line " + std::to_string(lineno) + ": ";
    if (tok[0] == "poset") {
      if (tok.size() != 2) throw PosetError(where + "expected 'poset <name>'");
      flush();
      name = tok[1];
      open = true;
      header = lineno;
    } else if (tok[0] == "point") {
      if (!open) throw PosetError(where + "point before poset header");
      if (tok.size() != 3) throw PosetError(where + "expected 'point <id> weak|strong'");
      pts.push_back({tok[1], parse_kind(tok[2], lineno)});
    } else if (tok[0] == "rel") {
      if (!open) throw PosetError(where + "relation before poset header");
      if (tok.size() != 5 || tok[2] != "<") throw PosetError(where + "expected 'rel <x> < <y> weak|strong'");
      gens.push_back({tok[1], tok[3], parse_kind(tok[4], lineno)});
      gen_lines.push_back(lineno);
    } else {
      throw PosetError(where + "unknown directive '" + tok[0] + "'");
    }
  }
  flush();
  return out;
}

Poset parse_poset(std::string_view text) {
  auto v = parse_posets(text);
  if (v.size() != 1) throw PosetError("expected exactly one poset, found " + std::to_string(v.size()));
  return v.front();
}

std::string format_poset(const Poset& P) {
  std::string s = "poset " + P.name() + "\n";
  for (const auto& d : P.declarations())
    s += "point " + d.id + (d.kind == Kind::Strong ? " strong\n" : " weak\n");
  for (const auto& g : P.generators())
    s += "rel " + g.x + " < " + g.y + (g.kind == Kind::Strong ? " strong\n" : " weak\n");
  return s;
}

std::string format_relation_matrix(const Poset& P) {
  size_t w = 1;
  for (const auto& id : P.ids()) w = std::max(w, id.size());
  auto pad = [&](const std::string& s) { return s + std::string(w - s.size(), ' '); };
  std::string s = pad("") + " ";
  for (const auto& id : P.ids()) s += " " + pad(id);
  s += "\n";
  for (size_t i = 0; i < P.size(); ++i) {
    s += pad(P.id(i)) + " ";
    for (size_t j = 0; j < P.size(); ++j) {
      char c = !P.leq(i, j) ? '.' : (P.strong(i, j) ? 's' : 'w');
      s += " " + pad(std::string(1, c));
    }
    s += "\n";
  }
  return s;
}

std::string point_set_str(const Poset& P, const PointSet& X) {
  std::string s = "{";
  for (size_t i = 0; i < X.size(); ++i) s += (i ? "," : "") + P.id(X[i]);
  return s + "}";
}

}  // namespace eqp
