#pragma once

#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "eqp/corep.hpp"

namespace eqp {

// corep <poset> field <preset|any>
// label <text>                       (optional)
// f <value>                          (optional printed Tits value)
// stripes: a=4 b=4 eta=1
// <d0 rows, entries separated by spaces, stripes by '|'>

struct CorepHeader {
  std::string poset, field, label;
  std::optional<long> f;  // printed Tits value, when recorded
};

using PosetResolver = std::function<PosetRef(const std::string&)>;

namespace detail {

inline std::vector<std::string> ws_tokens(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

struct TextLine {
  size_t no;
  std::string text;
};

// Non-empty lines with comments removed.
inline std::vector<TextLine> content_lines(std::string_view text) {
  std::vector<TextLine> out;
  std::istringstream is{std::string(text)};
  std::string line;
  size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    auto h = line.find('#');
    if (h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back({no, line});
  }
  return out;
}

inline std::string first_token(const std::string& s) {
  auto t = ws_tokens(s);
  return t.empty() ? "" : t[0];
}

}  // namespace detail

// Poset blocks and corep blocks of a text, each with its first line number.
struct TextBlocks {
  std::string posets;  // poset blocks concatenated (line numbers preserved)
  std::vector<std::pair<size_t, std::string>> coreps;
};

inline TextBlocks split_blocks(std::string_view text) {
  TextBlocks b;
  std::istringstream is{std::string(text)};
  std::string line;
  enum { None, InPoset, InCorep } mode = None;
  size_t no = 0;
  while (std::getline(is, line)) {
    ++no;
    std::string head = detail::first_token(line.substr(0, line.find('#')));
    if (head == "poset") mode = InPoset;
    if (head == "corep") {
      mode = InCorep;
      b.coreps.push_back({no, ""});
    }
    if (mode == InCorep) b.coreps.back().second += line + "\n";
    b.posets += (mode == InPoset ? line : std::string()) + "\n";
  }
  return b;
}

inline CorepHeader peek_corep_header(std::string_view block) {
  auto lines = detail::content_lines(block);
  if (lines.empty()) throw CorepError("empty corepresentation text");
  auto t = detail::ws_tokens(lines[0].text);
  if (t.size() != 4 || t[0] != "corep" || t[2] != "field")
    throw CorepError("line " + std::to_string(lines[0].no) + ": expected 'corep <poset> field <preset>'");
  CorepHeader h{t[1], t[3], "", std::nullopt};
  for (size_t k = 1; k < lines.size(); ++k) {
    auto tok = detail::ws_tokens(lines[k].text);
    if (tok[0] == "label") {
      for (size_t i = 1; i < tok.size(); ++i) h.label += (i > 1 ? " " : "") + tok[i];
    } else if (tok[0] == "f") {
      if (tok.size() != 2) throw CorepError("line " + std::to_string(lines[k].no) + ": expected 'f <value>'");
      h.f = std::stol(tok[1]);
    } else {
      break;
    }
  }
  return h;
}

// One corep block; line_offset is added to reported line numbers.
template <class B>
MatrixCorep<B> parse_corep(const Tower<B>& T, std::string_view block, const PosetResolver& resolve,
                           size_t line_offset = 0) {
  auto lines = detail::content_lines(block);
  auto where = [&](size_t no) { return "line " + std::to_string(no + line_offset) + ": "; };
  CorepHeader h = peek_corep_header(block);
  if (h.field != "any" && h.field != T.name())
    throw CorepError(where(lines[0].no) + "corepresentation is over " + h.field + ", requested " + T.name());
  PosetRef P = resolve(h.poset);
  if (!P) throw CorepError(where(lines[0].no) + "unknown poset '" + h.poset + "'");
  size_t k = 1;
  while (k < lines.size() && (detail::first_token(lines[k].text) == "label" || detail::first_token(lines[k].text) == "f"))
    ++k;
  if (k >= lines.size() || detail::first_token(lines[k].text) != "stripes:")
    throw CorepError(where(k < lines.size() ? lines[k].no : lines.back().no) + "expected 'stripes: x=n ...'");
  std::vector<size_t> order;
  std::vector<size_t> width(P->size(), 0);
  std::vector<char> seen(P->size(), 0);
  auto st = detail::ws_tokens(lines[k].text);
  for (size_t i = 1; i < st.size(); ++i) {
    auto eq = st[i].find('=');
    if (eq == std::string::npos) throw CorepError(where(lines[k].no) + "expected 'x=n', got '" + st[i] + "'");
    auto id = st[i].substr(0, eq);
    auto x = P->find(id);
    if (!x) throw CorepError(where(lines[k].no) + "unknown point '" + id + "'");
    if (seen[*x]) throw CorepError(where(lines[k].no) + "stripe '" + id + "' given twice");
    seen[*x] = 1;
    auto num = st[i].substr(eq + 1);
    if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
      throw CorepError(where(lines[k].no) + "bad stripe width '" + num + "'");
    width[*x] = std::stoul(num);
    order.push_back(*x);
  }
  for (size_t x = 0; x < P->size(); ++x)
    if (!seen[x]) throw CorepError(where(lines[k].no) + "missing stripe for point '" + P->id(x) + "'");
  size_t d0 = lines.size() - k - 1;
  MatrixCorep<B> M = zero_matrix_corep(T, P, d0, width);
  M.label = h.label;
  M.printed_f = h.f;
  for (size_t r = 0; r < d0; ++r) {
    const auto& ln = lines[k + 1 + r];
    std::vector<std::string> segs;
    std::string cur;
    for (char c : ln.text) {
      if (c == '|') {
        segs.push_back(cur);
        cur.clear();
      } else {
        cur += c;
      }
    }
    segs.push_back(cur);
    if (segs.size() != order.size())
      throw CorepError(where(ln.no) + "expected " + std::to_string(order.size()) + " stripes, found " +
                       std::to_string(segs.size()));
    for (size_t s = 0; s < order.size(); ++s) {
      auto ents = detail::ws_tokens(segs[s]);
      size_t x = order[s];
      if (ents.size() != width[x])
        throw CorepError(where(ln.no) + "stripe '" + P->id(x) + "' has " + std::to_string(ents.size()) +
                         " entries, expected " + std::to_string(width[x]));
      for (size_t j = 0; j < ents.size(); ++j) {
        try {
          M.stripes[x](r, j) = T.parse(ents[j]);
        } catch (const std::exception& e) {
          throw CorepError(where(ln.no) + e.what());
        }
      }
    }
  }
  return M;
}

template <class B>
std::string format_corep(const MatrixCorep<B>& M, const std::string& field = "") {
  const Tower<B>& T = *M.T;
  const Poset& P = *M.P;
  std::string s = "corep " + P.name() + " field " + (field.empty() ? T.name() : field) + "\n";
  if (!M.label.empty()) s += "label " + M.label + "\n";
  if (M.printed_f) s += "f " + std::to_string(*M.printed_f) + "\n";
  s += "stripes:";
  for (size_t x = 0; x < P.size(); ++x) s += " " + P.id(x) + "=" + std::to_string(M.stripes[x].cols());
  s += "\n";
  for (size_t r = 0; r < M.d0; ++r) {
    std::string row;
    for (size_t x = 0; x < P.size(); ++x) {
      if (x) row += " |";
      for (size_t j = 0; j < M.stripes[x].cols(); ++j) row += " " + T.str(M.stripes[x](r, j));
    }
    s += row.substr(row.empty() || row[0] != ' ' ? 0 : 1) + "\n";
  }
  return s;
}

}  // namespace eqp
