#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "obsgame/cli.hpp"
#include "obsgame/errors.hpp"
#include "obsgame/scenario.hpp"
#include "reference_systems.hpp"

using namespace obsgame;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  args.insert(args.begin(), "obsgame");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("obsgame_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& text) {
  const auto p = scratch() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  return {std::istreambuf_iterator<char>(f), {}};
}

bool has(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

const char* kChain = R"({
  "name": "chain",
  "A0": [[0,1],[0,0]],
  "B1": [[0],[1]],
  "B2": [[0],[0]],
  "C0": [[1,0]]
})";

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("scenario parsing is exact") {
  auto s = parse_scenario(R"({"name":"d","A":[[0.3,"1/10"],[-2,1e-1]],"B":[[1],[0]],"m":1})");
  REQUIRE(s.A.has_value());
  CHECK((*s.A)(0, 0) == Rational(3, 10));
  CHECK((*s.A)(0, 1) == Rational(1, 10));
  CHECK((*s.A)(1, 0) == Rational(-2));
  CHECK((*s.A)(1, 1) == Rational(1, 10));
  CHECK(s.outputs() == 1);
  CHECK(parse_matrix_literal("[[1,\"2/4\"],[0.25,3]]") == Matrix{{1, Rational(1, 2)}, {Rational(1, 4), 3}});
}

TEST_CASE("scenario round trip") {
  auto s = load_scenario(refsys::fixture("diag5_forced_loop.json"));
  auto back = parse_scenario(to_json(s));
  CHECK(back.name == s.name);
  CHECK(*back.A == *s.A);
  CHECK(*back.B == *s.B);
  CHECK(*back.F0 == *s.F0);
  CHECK(back.m == s.m);
  CHECK(back.depth == s.depth);
  CHECK(back.horizon == s.horizon);
  CHECK(back.sticky == s.sticky);
  CHECK(back.overrides == s.overrides);
  CHECK(to_json(back) == to_json(s));
}

TEST_CASE("scenario errors") {
  try {
    parse_scenario("{\n  \"A\": [[1,2],\n  oops\n}");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(e.column() == 3);
  }
  CHECK_THROWS_AS(parse_scenario(R"({"A":[[1]],"colour":1})"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"A":[[1,2],[3]]})"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"A":[["1/0"]]})"), ParseError);
  CHECK_THROWS_AS(parse_scenario(R"({"depth":"three-step"})"), ParseError);
}

TEST_CASE("vstar command") {
  auto r = cli({"vstar", refsys::fixture("diag5_vstar.json")});
  CHECK(r.code == 0);
  CHECK(has(r.out, "dim V* = 3"));

  const auto zero = write("czero.json", R"({"A":[[1,0],[0,2]],"B":[[1],[0]],"C":[[0,0]]})");
  CHECK(has(cli({"vstar", zero}).out, "dim V* = 2"));

  const auto ex3 = write("ex3.json", R"({"A":[[0,0,1,0],[0,0,0,1],[1,0,0,0],[0,1,0,0]],
    "B":[[0],[0],[1],[0]],"C":[[1,0,0,0],[0,1,0,0]]})");
  CHECK(has(cli({"vstar", ex3}).out, "dim V* = 0"));
}

TEST_CASE("game command") {
  auto r1 = cli({"game", refsys::fixture("diag5_loop.json")});
  CHECK(r1.code == 0);
  CHECK(has(r1.out, "epoch,actor,phi,dim_vstar,max_geo_mult\n"));
  CHECK(has(r1.out, "# mode=oscillation"));
  CHECK(has(r1.out, "# loop_period=4"));

  auto r2 = cli({"game", refsys::fixture("diag5_lock.json")});
  CHECK(has(r2.out, "# mode=lock"));

  const auto csv = (scratch() / "h1.csv").string();
  auto r3 = cli({"game", refsys::fixture("diag5_loop.json"), "--horizon", "1", "--out", csv});
  CHECK(r3.code == 0);
  CHECK(has(r3.out, "mode=inconclusive"));
  CHECK(slurp(csv) == "epoch,actor,phi,dim_vstar,max_geo_mult\n1,attacker,1,3,3\n");

  // same input, same bytes
  auto a = cli({"game", refsys::fixture("diag5_loop.json"), "--depth", "two-step", "--budget",
                "6", "--seed", "3"});
  auto b = cli({"game", refsys::fixture("diag5_loop.json"), "--depth", "two-step", "--budget",
                "6", "--seed", "3"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("game override flag") {
  const auto cfile = write("cb.json", "[[1,0,0,1,1],[0,0,1,0,0]]");
  auto r = cli({"game", refsys::fixture("diag5_loop.json"), "--override", "1=" + cfile});
  CHECK(r.code == 0);
  CHECK(has(r.out, "# mode=lock"));
}

TEST_CASE("attack and defend commands") {
  auto a = cli({"attack", refsys::fixture("diag5_loop.json")});
  CHECK(a.code == 0);
  CHECK(has(a.out, "phi = 1"));
  CHECK(has(a.out, "candidates = 24"));
  auto d = cli({"defend", refsys::fixture("diag5_vstar.json")});
  CHECK(d.code == 0);
  CHECK(has(d.out, "F = [[-1/10,0,0,1/10,0]]"));
  CHECK(has(d.out, "phi = 3"));
}

TEST_CASE("reduce command") {
  auto ok = cli({"reduce", write("chain.json", kChain)});
  CHECK(ok.code == 0);
  CHECK(has(ok.out, "r = (2)"));
  CHECK(has(ok.out, "holds"));

  const auto bad = write("chain_bad.json", R"({"A0":[[0,1,0],[0,0,0],[1,0,2]],
    "B1":[[0],[1],[0]],"B2":[[1],[0],[0]],"C0":[[1,0,0]]})");
  auto warn = cli({"reduce", bad});
  CHECK(warn.code == 0);
  CHECK(has(warn.err, "HypothesisViolated"));

  const auto mk = write("chain_mk.json", R"({"A0":[[0,1],[0,0]],"B1":[[0,1],[1,0]],
    "B2":[[0],[0]],"C0":[[1,0]]})");
  auto nrd = cli({"reduce", mk});
  CHECK(nrd.code == 3);
  CHECK(has(nrd.err, "NoRelativeDegree"));
}

TEST_CASE("exit codes") {
  const auto broken = write("broken.json", "{\n  \"A\": [[1,0],\n    ]\n}");
  auto p = cli({"vstar", broken});
  CHECK(p.code == 2);
  CHECK(has(p.err, "line 3"));

  auto missing = cli({"vstar", (scratch() / "nope.json").string()});
  CHECK(missing.code == 2);

  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"game", refsys::fixture("diag5_loop.json"), "--depth", "deep"}).code == 2);

  const auto rot = write("rot.json", R"({"A":[[0,1],[-1,0]],"B":[[0],[1]],"m":1,"horizon":3})");
  auto nr = cli({"game", rot});
  CHECK(nr.code == 3);
  CHECK(has(nr.err, "epoch 1"));
}

TEST_CASE("stackelberg command") {
  auto r = cli({"stackelberg", refsys::fixture("diag5_loop.json"), "--seed", "2"});
  CHECK(r.code == 0);
  CHECK(has(r.out, "ordering_holds=true"));
  CHECK(has(r.out, "lemma4_holds=true"));
}

TEST_CASE("sweep command") {
  const auto dir = scratch() / "sweep";
  fs::create_directories(dir);
  fs::copy_file(refsys::fixture("diag5_loop.json"), dir / "a.json",
                fs::copy_options::overwrite_existing);
  fs::copy_file(refsys::fixture("diag5_lock.json"), dir / "b.json",
                fs::copy_options::overwrite_existing);
  std::ofstream(dir / "c.json") << R"({"A":[[0,1],[-1,0]],"B":[[0],[1]],"m":1})";
  auto r = cli({"sweep", dir.string()});
  CHECK(has(r.out, "a.json mode=oscillation"));
  CHECK(has(r.out, "b.json mode=lock"));
  CHECK(has(r.out, "total=3 lock=1 oscillation=1 inconclusive=0 failed=1"));
  CHECK(has(r.err, "c.json"));
  CHECK(cli({"sweep", dir.string()}).out == r.out);
}

}  // TEST_SUITE
