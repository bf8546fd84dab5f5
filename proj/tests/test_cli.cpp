#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

std::string bin() {
  const char* b = std::getenv("EQP_BIN");
  REQUIRE_MESSAGE(b, "EQP_BIN is not set");
  return b;
}

struct Scratch {
  fs::path dir = fs::temp_directory_path() / ("eqp_cli_test_" + std::to_string(::getpid()));
  Scratch() { fs::create_directories(dir); }
  ~Scratch() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
};

fs::path scratch() {
  static Scratch s;
  return s.dir;
}

// stdout only, or stdout and stderr merged
Run run(const std::string& args, bool merge = false, const std::string& env = "") {
  std::string cmd = env + (env.empty() ? "" : " ") + "'" + bin() + "' " + args + (merge ? " 2>&1" : " 2>/dev/null");
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p);
  std::string out;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  int st = pclose(p);
  return {WIFEXITED(st) ? WEXITSTATUS(st) : -1, out};
}

std::string write(const std::string& name, const std::string& text) {
  auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

const char* kA25 = "poset A25\npoint a weak\npoint b weak\npoint eta strong\nrel b < eta strong\n";

}  // namespace

TEST_CASE("poset commands") {
  auto k6 = write("k6.poset", "poset K6\npoint a weak\npoint b weak\n");
  auto r = run("poset criterion " + k6);
  CHECK(r.code == 0);
  CHECK(r.out == "OneParameter (1 critical occurrence: K6)\n");
  auto a25 = write("a25.poset", kA25);
  r = run("poset check " + a25);
  CHECK(r.code == 0);
  CHECK(r.out.rfind("ok, 3 points", 0) == 0);
  r = run("poset sincere " + a25);
  CHECK(r.code == 0);
  CHECK(r.out.find("A25") != std::string::npos);
}

TEST_CASE("tits commands") {
  auto a25 = write("a25.poset", kA25);
  auto r = run("tits eval " + a25 + " --d \"1; a=1, eta=1\"");
  CHECK(r.code == 0);
  CHECK(r.out == "1\n");
  r = run("tits classify " + a25 + " --d \"1; a=1, eta=1\"");
  CHECK(r.out == "AdmissibleRoot\n");
  r = run("tits roots " + a25 + " --box 1,1");
  CHECK(r.code == 0);
  CHECK(r.out.find("(1;0,1,0)\t1") != std::string::npos);
}

TEST_CASE("corep commands") {
  auto f17 = scratch() / "f17.corep";
  CHECK(run("catalog emit F17 --out " + f17.string()).code == 0);
  CHECK(slurp(f17.string()) == "corep F17 field gf2\nf 1\nstripes: a=1 b=1\n1 | x\n");
  auto r = run("corep dim " + f17.string());
  CHECK(r.code == 0);
  CHECK(r.out.find("dim (1;1,1), f = 1, reduced") != std::string::npos);
  auto s0 = write("s0.corep", run("catalog emit K6 --n 1 --x 0").out);
  auto s1 = write("s1.corep", run("catalog emit K6 --n 1 --x 1").out);
  CHECK(run("corep iso " + s0 + " " + s1).out == "not isomorphic (ground-truth)\n");
  CHECK(run("corep iso " + s0 + " " + s0).out == "isomorphic (ground-truth)\n");
  auto sum = write("sum.corep", run("corep sum " + s0 + " " + s1).out);
  r = run("corep decompose " + sum);
  CHECK(r.code == 0);
  CHECK(r.out.rfind("K6: 2 summands (ground-truth)", 0) == 0);
  r = run("corep dual " + f17.string());
  CHECK(r.code == 0);
  CHECK(r.out.rfind("corep F17* field gf2\n", 0) == 0);
}

TEST_CASE("input errors exit 2 with line numbers") {
  auto bad = write("bad.poset", "poset X\npoint a weak\nrel a < b weak\n");
  auto r = run("poset check " + bad, true);
  CHECK(r.code == 2);
  CHECK(r.out.find("line 3") != std::string::npos);
  auto badc = write("bad.corep", "corep K6 field gf2\nstripes: a=1 b=1\n1 | 1 1\n");
  r = run("corep dim " + badc, true);
  CHECK(r.code == 2);
  CHECK(r.out.find("line 3") != std::string::npos);
  CHECK(run("poset check /nonexistent/file", true).code == 2);
  CHECK(run("bogus", true).code == 2);
  CHECK(run("", true).code == 2);
}

TEST_CASE("verify commands write TSV and use exit codes") {
  auto out = (scratch() / "tables.tsv").string();
  auto r = run("verify tables --out " + out);
  CHECK(r.code == 1);  // two printed A40* rows do not reproduce
  CHECK(r.out.rfind("tables: FAIL", 0) == 0);
  auto tsv = slurp(out);
  CHECK(tsv.rfind("case\tcheck\texpected\tcomputed\tstatus\n", 0) == 0);
  CHECK(tsv.find('\r') == std::string::npos);
  r = run("verify catalog --field gf2");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("catalog gf2: PASS", 0) == 0);
  r = run("verify subspaces");
  CHECK(r.code == 0);
}

TEST_CASE("outputs are byte-identical across runs and thread counts") {
  auto a = (scratch() / "td1.tsv").string(), b = (scratch() / "td2.tsv").string();
  auto r1 = run("verify theorem-d K6 --box 2,1 --out " + a, false, "EQP_THREADS=1");
  auto r2 = run("verify theorem-d K6 --box 2,1 --out " + b, false, "EQP_THREADS=2");
  CHECK(r1.code == 0);
  CHECK(r1.out == r2.out);
  CHECK(slurp(a) == slurp(b));
  CHECK(run("catalog emit K7 --n 2 --x 1,1").out == run("catalog emit K7 --n 2 --x 1,1").out);
}
