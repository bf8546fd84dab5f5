#include "eqp/families.hpp"

#include <map>
#include <mutex>
#include <sstream>

namespace eqp {

namespace {

std::vector<std::string> tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

// "2k+1", "k", "2k-2", "1"
Lin parse_lin(const std::string& s) {
  Lin l;
  auto kpos = s.find('k');
  if (kpos == std::string::npos) {
    l.b = std::stol(s);
    return l;
  }
  std::string co = s.substr(0, kpos);
  l.a = co.empty() ? 1 : (co == "-" ? -1 : std::stol(co));
  std::string rest = s.substr(kpos + 1);
  l.b = rest.empty() ? 0 : std::stol(rest);
  return l;
}

std::vector<long> parse_csv(const std::string& s) {
  std::vector<long> v;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ',')) v.push_back(std::stol(t));
  return v;
}

}  // namespace

const std::vector<Poset>& sincere_list() {
  static const std::vector<Poset> v = parse_posets(embedded_data("posets.txt"));
  return v;
}

const Poset& sincere_poset(std::string_view id) {
  static std::map<std::string, Poset, std::less<>> duals;
  static std::mutex mu;
  std::string s(id);
  bool star = !s.empty() && s.back() == '*';
  if (star) s.pop_back();
  const Poset* base = nullptr;
  for (const auto& K : critical_posets())
    if (K.name() == s && s >= "K6") base = &K;
  for (const auto& A : sincere_list())
    if (A.name() == s) base = &A;
  if (!base) throw PosetError("unknown sincere poset '" + std::string(id) + "'");
  if (!star) return *base;
  std::lock_guard<std::mutex> lock(mu);
  auto it = duals.find(id);
  if (it == duals.end()) it = duals.emplace(std::string(id), dual_poset(*base)).first;
  return it->second;
}

PosetRef known_poset(const std::string& id) {
  static std::map<std::string, PosetRef> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(id); it != cache.end()) return it->second;
  PosetRef r;
  std::string s = id;
  bool star = !s.empty() && s.back() == '*';
  if (star) s.pop_back();
  const Poset* base = nullptr;
  for (const auto& K : critical_posets())
    if (K.name() == s) base = &K;
  for (const auto& A : sincere_list())
    if (A.name() == s) base = &A;
  static const std::vector<Poset> finite = parse_posets(embedded_data("finite_posets.txt"));
  for (const auto& F : finite)
    if (F.name() == s) base = &F;
  if (base) r = share(star ? dual_poset(*base) : *base);
  cache[id] = r;
  return r;
}

const std::vector<Family>& families() {
  static const std::vector<Family> v = [] {
    std::vector<Family> out;
    std::istringstream is{std::string(embedded_data("families.txt"))};
    std::string line;
    while (std::getline(is, line)) {
      auto h = line.find('#');
      if (h != std::string::npos) line.erase(h);
      auto t = tokens(line);
      if (t.empty()) continue;
      if (t[0] != "family" || t.size() < 4) throw PosetError("bad family line: " + line);
      Family f;
      f.poset = t[1];
      const Poset& P = sincere_poset(f.poset);
      f.d.assign(P.size(), Lin{});
      for (size_t i = 2; i < t.size(); ++i) {
        if (t[i] == "special") {
          f.special = true;
          continue;
        }
        auto eq = t[i].find('=');
        std::string key = t[i].substr(0, eq), val = t[i].substr(eq + 1);
        if (key == "f") f.f = std::stol(val);
        else if (key == "d0") f.d0 = parse_lin(val);
        else f.d[P.index(key)] = parse_lin(val);
      }
      out.push_back(std::move(f));
    }
    return out;
  }();
  return v;
}

const Family* find_family(std::string_view id) {
  for (const auto& f : families())
    if (f.poset == id) return &f;
  return nullptr;
}

std::optional<FamilyDims> sincere_dims(std::string_view id, long k) {
  sincere_poset(id);  // validates the id
  const Family* f = find_family(id);
  if (!f) return std::nullopt;
  if (k < 1) throw PosetError("family parameter k must be at least 1");
  FamilyDims r{{f->d0.at(k), {}}, f->f};
  for (const auto& l : f->d) r.d.d.push_back(l.at(k));
  return r;
}

std::optional<std::pair<std::string, long>> special_family_match(const Poset& P, const DimVector& d) {
  for (const auto& f : families()) {
    if (!f.special) continue;
    const Poset& S = sincere_poset(f.poset);
    if (S.size() != P.size()) continue;
    auto m = poset_iso_unbounded(P, S, false);
    if (!m) continue;
    if (f.d0.a == 0 || (d.d0 - f.d0.b) % f.d0.a != 0) continue;
    long k = (d.d0 - f.d0.b) / f.d0.a;
    if (k < 1) continue;
    bool ok = true;
    for (size_t i = 0; i < P.size(); ++i)
      if (f.d[(*m)[i]].at(k) != d.d[i]) ok = false;
    if (ok) return std::make_pair(f.poset, k);
  }
  return std::nullopt;
}

std::optional<SincereClass> sincere_class(const Poset& P) {
  std::vector<const Poset*> all;
  for (const auto& K : critical_posets())
    if (K.name() >= "K6") all.push_back(&K);
  for (const auto& A : sincere_list()) all.push_back(&A);
  for (bool anti : {false, true})
    for (const Poset* S : all)
      if (S->size() == P.size() && poset_iso_unbounded(P, *S, anti)) return SincereClass{S->name(), anti};
  return std::nullopt;
}

namespace {

std::map<std::string, DimTable, std::less<>> load_tables() {
  std::map<std::string, DimTable, std::less<>> out;
  std::istringstream is{std::string(embedded_data("dimtables.txt"))};
  std::string line, cur;
  std::vector<size_t> cols;  // table column -> point index
  size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    auto t = tokens(line);
    if (t.empty()) continue;
    auto where = "dimtables.txt line " + std::to_string(no) + ": ";
    if (t[0] == "table") {
      cur = t[1];
      const Poset& P = sincere_poset(cur);
      cols.clear();
      size_t i = 3;  // "table X columns d0 ..."
      if (t.size() < 4 || t[2] != "columns" || t[3] != "d0") throw PosetError(where + "bad table header");
      std::optional<DimVector> mu;
      for (i = 4; i < t.size(); ++i) {
        if (t[i] == "mu") {
          auto v = parse_csv(t.at(i + 1));
          DimVector m{v.at(0), std::vector<long>(P.size(), 0)};
          for (size_t c = 0; c < cols.size(); ++c) m.d[cols[c]] = v.at(c + 1);
          mu = m;
          break;
        }
        cols.push_back(P.index(t[i]));
      }
      if (cols.size() != P.size()) throw PosetError(where + "table columns do not cover the poset");
      bool self_dual_rows = mu.has_value();
      auto& tab = out[cur];
      tab.id = cur;
      tab.poset = known_poset(cur);
      tab.mu = mu;
      if (!self_dual_rows) {
        auto& dt = out[cur + "*"];
        dt.id = cur + "*";
        dt.poset = known_poset(cur + "*");
      }
    } else if (t[0] == "row") {
      if (t.size() != 4) throw PosetError(where + "expected 'row <type> <f> <vector>'");
      const Poset& P = sincere_poset(cur);
      auto v = parse_csv(t[3]);
      if (v.size() != P.size() + 1) throw PosetError(where + "vector length mismatch");
      DimVector d{v[0], std::vector<long>(P.size(), 0)};
      for (size_t c = 0; c < cols.size(); ++c) d.d[cols[c]] = v[c + 1];
      bool star = t[1].back() == '*';
      auto& tab = out[star && !out[cur].mu ? cur + "*" : cur];
      tab.rows.push_back({t[1], std::stol(t[2]), d});
    } else {
      throw PosetError(where + "unknown directive '" + t[0] + "'");
    }
  }
  return out;
}

const std::map<std::string, DimTable, std::less<>>& tables() {
  static const auto t = load_tables();
  return t;
}

}  // namespace

const DimTable& dim_table(std::string_view id) {
  auto it = tables().find(id);
  if (it == tables().end()) throw PosetError("no dimension table for '" + std::string(id) + "'");
  return it->second;
}

std::vector<std::string> dim_table_ids() {
  std::vector<std::string> v;
  for (const auto& [k, t] : tables()) v.push_back(k);
  return v;
}

}  // namespace eqp
