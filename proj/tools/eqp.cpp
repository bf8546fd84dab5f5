#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <tuple>

#include "eqp/catalog.hpp"
#include "eqp/corep_io.hpp"
#include "eqp/families.hpp"
#include "eqp/poset.hpp"
#include "eqp/tits.hpp"
#include "eqp/verify.hpp"

using namespace eqp;

namespace {

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string field;  // empty: from the input, else gf2
  std::string out;
  std::string dvec;
  std::string box = "2,2";
  std::string spot;
  std::uint64_t budget = 10'000'000;
  long n = 1;
  long k = 1;
  std::string type;
  std::string x;
  std::string variant;
  bool discrete = false;
  std::vector<std::string> args;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_out(const Options& o, const std::string& text) {
  if (o.out.empty()) return;
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw InputError("cannot write '" + o.out + "'");
  f << text;
}

// A poset file, or the name of a built-in poset (K6, A25*, F17, ...).
std::vector<Poset> load_posets(const std::string& arg) {
  if (std::filesystem::exists(arg)) {
    auto v = parse_posets(read_file(arg));
    if (v.empty()) throw InputError(arg + ": no poset blocks");
    return v;
  }
  if (auto P = known_poset(arg)) return {*P};
  throw InputError("'" + arg + "' is neither a readable file nor a known poset");
}

PosetRef load_one_poset(const std::string& arg) {
  auto v = load_posets(arg);
  if (v.size() != 1) throw InputError(arg + ": expected one poset, found " + std::to_string(v.size()));
  return share(v.front());
}

const std::string& need_arg(const Options& o, size_t i, const std::string& what) {
  if (o.args.size() <= i) throw InputError("missing " + what);
  return o.args[i];
}

template <class Fn>
int with_tower(const std::string& name, Fn&& fn) {
  if (name == "qsqrt2") return fn(tower_qsqrt2());
  if (name == "gf2" || name == "gf3") return fn(finite_tower(name));
  throw InputError("unknown field '" + name + "' (gf2, gf3, qsqrt2)");
}

const FiniteTower& finite_field(const Options& o) {
  std::string f = o.field.empty() ? "gf2" : o.field;
  if (f == "qsqrt2") throw InputError("this suite needs a finite field (gf2 or gf3)");
  return finite_tower(f);
}

Box parse_box(const Poset& P, const std::string& s) {
  if (s.find(';') != std::string::npos) {
    DimVector d = parse_dim_vector(P, s);
    return Box{d.d0, d.d};
  }
  auto comma = s.find(',');
  try {
    if (comma == std::string::npos) return uniform_box(P, std::stol(s), std::stol(s));
    return uniform_box(P, std::stol(s.substr(0, comma)), std::stol(s.substr(comma + 1)));
  } catch (const std::logic_error&) {
    throw InputError("bad --box '" + s + "' (use 'd0,dx' or 'd0; x=n, ...')");
  }
}

// ---- corep files ----

struct CorepFile {
  std::string field;  // header field of the first block
  std::string text;
};

CorepFile load_corep_file(const std::string& path) {
  CorepFile f{"", read_file(path)};
  auto b = split_blocks(f.text);
  if (b.coreps.empty()) throw InputError(path + ": no corep blocks");
  f.field = peek_corep_header(b.coreps.front().second).field;
  return f;
}

std::string pick_field(const Options& o, const std::vector<CorepFile>& files) {
  if (!o.field.empty()) return o.field;
  for (const auto& f : files)
    if (f.field != "any") return f.field;
  return "gf2";
}

template <class B>
std::vector<MatrixCorep<B>> coreps_of(const Tower<B>& T, const CorepFile& f, const std::string& path) {
  try {
    return parse_corep_text(T, f.text);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

std::string poly_coeffs_help() { return "comma-separated coefficients a0,...,a_{n-1} of the monic polynomial"; }

template <class B>
std::vector<GElem<B>> parse_coeffs(const Tower<B>& T, const std::string& s, size_t n) {
  std::vector<GElem<B>> c;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ',')) c.push_back(T.parse(t));
  if (c.size() != n) throw InputError("--x needs " + std::to_string(n) + " coefficients (" + poly_coeffs_help() + ")");
  return c;
}

// ---- commands ----

int cmd_poset(const std::string& sub, const Options& o) {
  auto posets = load_posets(need_arg(o, 0, "poset file"));
  bool many = posets.size() > 1;
  for (const auto& P : posets) {
    std::string pre = many ? P.name() + ": " : "";
    if (sub == "check") {
      size_t strong = 0;
      for (size_t i = 0; i < P.size(); ++i) strong += P.strong_point(i);
      std::cout << pre << "ok, " << P.size() << " points (" << P.size() - strong << " weak, " << strong
                << " strong), weight " << weight(P) << "\n";
      if (!many) std::cout << format_relation_matrix(P);
    } else if (sub == "criterion") {
      auto r = one_parameter_criterion(P);
      std::string list;
      for (const auto& occ : r.list) list += (list.empty() ? "" : ", ") + occ.critical;
      std::cout << pre << verdict_name(r.verdict) << " (" << r.occurrences << " critical occurrence"
                << (r.occurrences == 1 ? "" : "s") << (list.empty() ? "" : ": " + list);
      if (r.verdict == Verdict::Undetermined) std::cout << "; weight " << r.weight << " > 4";
      std::cout << ")\n";
    } else if (sub == "sincere") {
      auto c = sincere_class(P);
      if (c) std::cout << pre << c->id << (c->anti ? " (anti-isomorphic)" : " (isomorphic)") << "\n";
      else std::cout << pre << "not isomorphic or anti-isomorphic to a listed sincere poset\n";
    }
  }
  return 0;
}

int cmd_tits(const std::string& sub, const Options& o) {
  PosetRef P = load_one_poset(need_arg(o, 0, "poset file"));
  if (sub == "eval" || sub == "classify") {
    if (o.dvec.empty()) throw InputError("--d is required");
    DimVector d = parse_dim_vector(*P, o.dvec);
    if (sub == "eval") std::cout << tits_form(*P, d) << "\n";
    else std::cout << root_class_str(classify_vector(*P, d)) << "\n";
    return 0;
  }
  Box b = parse_box(*P, o.box);
  auto roots = enumerate_admissible_roots(*P, b);
  std::string tsv = "d\tf\n";
  for (const auto& r : roots) tsv += format_tuple(r) + "\t" + std::to_string(tits_form(*P, r)) + "\n";
  std::cout << roots.size() << " admissible roots in the box\n";
  if (o.out.empty()) std::cout << tsv;
  write_out(o, tsv);
  return 0;
}

int cmd_corep(const std::string& sub, const Options& o) {
  size_t want = (sub == "iso" || sub == "sum") ? 2 : 1;
  std::vector<CorepFile> files;
  for (size_t i = 0; i < want; ++i) files.push_back(load_corep_file(need_arg(o, i, "corep file")));
  return with_tower(pick_field(o, files), [&](const auto& T) -> int {
    using BT = typename std::decay_t<decltype(T)>::Base;
    std::vector<std::vector<MatrixCorep<BT>>> cs;
    for (size_t i = 0; i < want; ++i) cs.push_back(coreps_of(T, files[i], o.args[i]));
    std::string text;
    if (sub == "dim") {
      for (const auto& M : cs[0]) {
        auto S = spaces_of(M);
        DimVector d = dim_vector(S);
        text += (M.label.empty() ? M.P->name() : M.P->name() + " " + M.label) + ": dim " + format_tuple(d) +
                ", f = " + std::to_string(tits_form(*M.P, d)) + (is_reduced(M) ? ", reduced" : ", not reduced") + "\n";
      }
      std::cout << text;
    } else if (sub == "decompose") {
      for (const auto& M : cs[0]) {
        auto dec = decompose(spaces_of(M));
        text += (M.label.empty() ? M.P->name() : M.P->name() + " " + M.label) + ": " +
                std::to_string(dec.summands.size()) + " summand" + (dec.summands.size() == 1 ? "" : "s") + " (" +
                certainty_name(dec.certainty) + ")\n";
        for (const auto& s : dec.summands) {
          text += "  dim " + format_tuple(dim_vector(s.U)) + " (" + certainty_name(s.certainty) + ")\n";
          std::istringstream is(format_corep(matrix_of(s.U)));
          for (std::string l; std::getline(is, l);) text += "    " + l + "\n";
        }
      }
      std::cout << text;
    } else if (sub == "iso") {
      auto r = are_isomorphic(spaces_of(cs[0].at(0)), spaces_of(cs[1].at(0)));
      text = std::string(r.iso ? "isomorphic" : "not isomorphic") + " (" + certainty_name(r.certainty) + ")\n";
      std::cout << text;
      write_out(o, text);
      return 0;
    } else if (sub == "dual") {
      for (const auto& M : cs[0]) text += format_corep(matrix_of(dual_corep(spaces_of(M)))) + "\n";
      if (o.out.empty()) std::cout << text;
    } else if (sub == "sum") {
      text = format_corep(direct_sum(cs[0].at(0), cs[1].at(0)));
      if (o.out.empty()) std::cout << text;
    }
    write_out(o, text);
    return 0;
  });
}

int cmd_catalog(const Options& o) {
  const std::string& id = need_arg(o, 0, "catalog id");
  if (id == "table") {
    const DimTable& t = dim_table(need_arg(o, 1, "table id"));
    std::string tsv = "type\tf\td\n";
    for (const auto& r : t.rows) tsv += r.type + "\t" + std::to_string(r.f) + "\t" + format_tuple(r.d) + "\n";
    if (t.mu) tsv += "mu\t0\t" + format_tuple(*t.mu) + "\n";
    std::cout << tsv;
    write_out(o, tsv);
    return 0;
  }
  if (id == "family") {
    const std::string& pid = need_arg(o, 1, "poset id");
    auto fd = sincere_dims(pid, o.k);
    if (!fd) throw InputError(pid + " has no parametric family");
    std::cout << format_tuple(fd->d) << " f=" << fd->f << "\n";
    return 0;
  }
  std::string field = o.field.empty() ? "gf2" : o.field;
  return with_tower(field, [&](const auto& T) -> int {
    using BT = typename std::decay_t<decltype(T)>::Base;
    std::optional<MatrixCorep<BT>> M;
    size_t n = static_cast<size_t>(o.n);
    if (id.size() == 3 && id[0] == 'F') {
      M = finite_type_corep(T, id, o.type);
    } else if (id.find('(') != std::string::npos) {
      for (auto& c : table2_coreps(T))
        if (c.label == id) M = c;
      if (!M) throw InputError("unknown printed matrix '" + id + "'");
    } else if (id == "K6" && o.discrete) {
      M = k6_discrete(T, n);
    } else if (id == "K6" || id == "K7" || id == "K8") {
      if (o.x.empty()) throw InputError("--x is required (" + poly_coeffs_help() + ")");
      auto c = parse_coeffs(T, o.x, n);
      if (id == "K8") {
        K8Variant v = T.inseparable() ? K8Variant::Inseparable
                      : T.characteristic() == 2 ? K8Variant::Char2
                                                : K8Variant::Separable;
        if (o.variant == "char2") v = K8Variant::Char2;
        else if (o.variant == "separable") v = K8Variant::Separable;
        else if (o.variant == "inseparable") v = K8Variant::Inseparable;
        else if (!o.variant.empty()) throw InputError("unknown variant '" + o.variant + "'");
        M = k8_series(T, v, frobenius_companion(T, c));
      } else {
        auto X = frobenius_companion(T, c, Scalars::F);
        M = id == "K6" ? k6_series(T, X) : k7_series(T, X);
      }
    } else {
      throw InputError("unknown catalog id '" + id + "'");
    }
    std::string text = format_corep(*M, T.name());
    if (o.out.empty()) std::cout << text;
    write_out(o, text);
    return 0;
  });
}

int finish(const Report& r, const Options& o) {
  std::cout << r.summary();
  write_out(o, r.tsv());
  return r.pass() ? 0 : 1;
}

int cmd_verify(const std::string& sub, const Options& o) {
  OracleOptions opt;
  opt.budget = o.budget;
  if (sub == "tables") return finish(verify_tits_tables(), o);
  if (sub == "catalog")
    return with_tower(o.field.empty() ? "gf2" : o.field, [&](const auto& T) { return finish(verify_catalog(T), o); });
  if (sub == "subspaces") return finish(verify_subspace_calculus(finite_field(o), static_cast<size_t>(o.n)), o);
  if (sub == "series") {
    const std::string& id = need_arg(o, 0, "series id (K6, K7, K8)");
    return finish(verify_series_separation(id, static_cast<size_t>(o.n), finite_field(o)), o);
  }
  PosetRef P = load_one_poset(need_arg(o, 0, "poset"));
  Box b = parse_box(*P, o.box);
  if (sub == "theorem-d") {
    const FiniteTower* spot = o.spot.empty() ? nullptr : &finite_tower(o.spot);
    return finish(verify_theorem_d(P, b, finite_field(o), spot, opt), o);
  }
  return finish(verify_duality_suite(P, b, finite_field(o), opt), o);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Corepresentations of 2-equipped posets: posets, Tits forms, matrices, catalog and verification"};
  app.require_subcommand(1);
  Options o;
  auto out_opt = [&](CLI::App* c) { c->add_option("--out", o.out, "write the TSV report (or matrix text) here"); };
  auto field_opt = [&](CLI::App* c) { c->add_option("--field", o.field, "gf2, gf3 or qsqrt2"); };

  std::string chosen;
  auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, size_t min_args,
                 size_t max_args) {
    CLI::App* c = parent->add_subcommand(name, help);
    if (max_args > 0) c->add_option("args", o.args, "inputs")->expected(static_cast<int>(min_args), static_cast<int>(max_args));
    c->callback([&chosen, c, parent] { chosen = parent->get_name() + " " + c->get_name(); });
    return c;
  };

  auto* poset = app.add_subcommand("poset", "poset files: check, criterion, sincere");
  poset->require_subcommand(1);
  for (auto n : {"check", "criterion", "sincere"}) add(poset, n, std::string("poset ") + n + " <file>", 1, 1);

  auto* tits = app.add_subcommand("tits", "Tits form: eval, classify, roots");
  tits->require_subcommand(1);
  for (auto n : {"eval", "classify"}) add(tits, n, std::string(n) + " a vector", 1, 1)->add_option("--d", o.dvec, "\"d0; x=n, ...\"");
  {
    auto* c = add(tits, "roots", "admissible roots in a box", 1, 1);
    c->add_option("--box", o.box, "d0,dx or \"d0; x=n, ...\"");
    out_opt(c);
  }

  auto* corep = app.add_subcommand("corep", "matrix corepresentations: dim, decompose, iso, dual, sum");
  corep->require_subcommand(1);
  for (auto n : {"dim", "decompose", "dual"}) {
    auto* c = add(corep, n, std::string("corep ") + n + " <file>", 1, 1);
    field_opt(c);
    out_opt(c);
  }
  for (auto n : {"iso", "sum"}) {
    auto* c = add(corep, n, std::string("corep ") + n + " <file> <file>", 2, 2);
    field_opt(c);
    out_opt(c);
  }

  auto* catalog = app.add_subcommand("catalog", "printed matrices, series and tables");
  catalog->require_subcommand(1);
  {
    auto* c = add(catalog, "emit", "emit <F13..F18|4(K6-4)|K6|K7|K8|table <id>|family <id>>", 1, 2);
    c->add_option("--type", o.type, "letter of a finite-type matrix (A, B, ...)");
    c->add_option("--n", o.n, "block size");
    c->add_option("--k", o.k, "family parameter");
    c->add_option("--x", o.x, poly_coeffs_help());
    c->add_option("--variant", o.variant, "K8 variant: char2, separable, inseparable");
    c->add_flag("--discrete", o.discrete, "K6 discrete series [I | I + xi J]");
    field_opt(c);
    out_opt(c);
  }

  auto* verify = app.add_subcommand("verify", "verification suites (TSV reports)");
  verify->require_subcommand(1);
  for (auto [n, lo, hi] : std::vector<std::tuple<const char*, size_t, size_t>>{
           {"tables", 0, 0}, {"catalog", 0, 0}, {"theorem-d", 1, 1}, {"series", 1, 1}, {"duality", 1, 1},
           {"subspaces", 0, 0}}) {
    auto* c = add(verify, n, std::string("verify ") + n, lo, hi);
    field_opt(c);
    out_opt(c);
    c->add_option("--budget", o.budget, "candidate budget per dimension vector");
    c->add_option("--box", o.box, "d0,dx or \"d0; x=n, ...\"");
    c->add_option("--n", o.n, "block size (series) or ambient G-dimension bound (subspaces)");
    c->add_option("--spot", o.spot, "second finite field for the imaginary-root spot check");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  try {
    auto sp = chosen.find(' ');
    std::string group = chosen.substr(0, sp), sub = chosen.substr(sp + 1);
    if (group == "poset") return cmd_poset(sub, o);
    if (group == "tits") return cmd_tits(sub, o);
    if (group == "corep") return cmd_corep(sub, o);
    if (group == "catalog") return cmd_catalog(o);
    if (group == "verify") return cmd_verify(sub, o);
    std::cerr << "error: no command\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
