#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "report.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

Outcome run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "hrmod");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = hrmod::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch() {
  static const fs::path dir = [] {
    auto p = fs::temp_directory_path() / ("hrmod_cli_test_" + std::to_string(::getpid()));
    fs::create_directories(p);
    return p;
  }();
  return dir;
}

std::string write(const std::string& name, const std::string& body) {
  const auto path = scratch() / name;
  std::ofstream(path) << body;
  return path.string();
}

std::string four_cycle_precision() {
  return write("c4.json",
               R"({"d":4,"kind":"precision","name":"four-cycle",)"
               R"("matrix":[[2,-1,0,-1],[-1,2,-1,0],[0,-1,2,-1],[-1,0,-1,2]]})");
}

std::string four_cycle_variogram() {
  return write("c4v.json",
               R"({"d":4,"kind":"variogram","matrix":[[0,0.75,1,0.75],[0.75,0,0.75,1],[1,0.75,0,0.75],[0.75,1,0.75,0]]})");
}

void check_schema(const Outcome& o) {
  INFO(o.out);
  const auto msg = hrmod::cli::check_report_schema(o.report());
  CHECK(msg == "");
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("validate") {
  auto o = run_cli({"validate", four_cycle_variogram()});
  CHECK(o.code == 0);
  CHECK(o.report()["results"]["valid"] == true);
  check_schema(o);

  o = run_cli({"validate", write("diag.json", R"({"d":3,"kind":"variogram","matrix":[[0.1,1,1],[1,0,1],[1,1,0]]})")});
  CHECK(o.code == 2);
  CHECK(o.report()["results"]["reason"] == "NonzeroDiagonal");
  check_schema(o);

  o = run_cli({"validate", write("rows.json", R"({"d":2,"kind":"precision","matrix":[[1,-0.5],[-0.5,1]]})")});
  CHECK(o.code == 2);
  CHECK(o.report()["results"]["reason"] == "BadKernel");

  o = run_cli({"validate", write("asym.json", R"({"d":2,"kind":"variogram","matrix":[[0,1],[1.001,0]]})")});
  CHECK(o.code == 2);
  CHECK(o.report()["results"]["reason"] == "NotSymmetric");

  o = run_cli({"validate", (scratch() / "missing.json").string()});
  CHECK(o.code == 1);
  check_schema(o);
  CHECK(o.report().contains("error"));

  o = run_cli({"validate", write("schema.json", R"({"d":3,"kind":"variogram","matrix":[[0,1],[1,0]]})")});
  CHECK(o.code == 1);
  o = run_cli({"validate", write("notjson.json", "{d: 3")});
  CHECK(o.code == 1);
}

TEST_CASE("setfn") {
  const auto c4 = four_cycle_precision();
  auto o = run_cli({"setfn", c4, "--fn", "mhr", "--subsets", "1,2,3,4;2;1,3", "--reps", "all"});
  REQUIRE(o.code == 0);
  check_schema(o);
  auto values = o.report()["results"]["values"];
  CHECK(values[0]["value"].get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  for (auto& [rep, v] : values[0]["reps"].items()) {
    INFO(rep);
    CHECK(v.get<double>() == doctest::Approx(std::log(2.0)).epsilon(1e-9));
  }
  CHECK(values[0]["reps_skipped_for_size"] == json::array({"integral"}));
  CHECK(values[1]["value"].get<double>() == 0.0);
  CHECK(values[2]["value"].dump() == "0.0");

  // Rows come back in canonical subset order.
  o = run_cli({"setfn", c4, "--fn", "sigma2", "--subsets", "2,4;1,2,3,4"});
  REQUIRE(o.code == 0);
  values = o.report()["results"]["values"];
  CHECK(values[0]["subset"] == "{1,2,3,4}");
  CHECK(values[0]["value"].get<double>() == doctest::Approx(5.0 / 16.0).epsilon(1e-12));
  CHECK(values[1]["subset"] == "{2,4}");
  CHECK(values[1]["value"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));

  o = run_cli({"setfn", c4, "--fn", "mhr", "--subsets", "all"});
  CHECK(o.report()["results"]["values"].size() == 15);

  CHECK(run_cli({"setfn", c4, "--fn", "entropy"}).code == 1);
  CHECK(run_cli({"setfn", c4, "--fn", "mhr", "--subsets", "1,9"}).code == 1);
}

TEST_CASE("ci golden verdicts") {
  const auto c4 = four_cycle_precision();
  auto o = run_cli({"ci", c4, "--A", "1", "--B", "3", "--C", "2,4"});
  CHECK(o.code == 0);
  CHECK(o.report()["results"]["verdict"] == "holds");
  CHECK(o.report()["results"]["methods_compared"] == true);
  check_schema(o);

  o = run_cli({"ci", c4, "--A", "1", "--B", "2", "--C", "3,4"});
  CHECK(o.code == 2);
  CHECK(o.report()["results"]["verdict"] == "fails");
  check_schema(o);

  for (const char* method : {"mhr", "sigma2", "singleton"}) {
    o = run_cli({"ci", c4, "--A", "2", "--B", "4", "--C", "1,3", "--method", method});
    INFO(method);
    CHECK(o.code == 0);
    check_schema(o);
  }

  o = run_cli({"ci", c4, "--A", "1", "--B", "3", "--C", ""});
  CHECK(o.code == 1);
  CHECK(run_cli({"ci", c4, "--A", "1", "--B", "3"}).code == 1);
  CHECK(run_cli({"ci", c4, "--A", "1", "--B", "1", "--C", "2"}).code == 1);
  CHECK(run_cli({"ci", c4, "--A", "1,2", "--B", "3", "--C", "4", "--method", "singleton"}).code == 1);

  // Path 1-2-3 has a zero in p, so sigma2 is inconclusive there.
  const auto path = write("path.json", R"({"d":3,"kind":"variogram","matrix":[[0,1,2],[1,0,1],[2,1,0]]})");
  o = run_cli({"ci", path, "--A", "1", "--B", "3", "--C", "2", "--method", "sigma2"});
  CHECK(o.code == 4);
  CHECK(o.report()["results"]["verdict"] == "indeterminate");
  o = run_cli({"ci", path, "--A", "1", "--B", "3", "--C", "2"});
  CHECK(o.code == 0);
  CHECK(o.report()["results"]["methods_compared"] == false);
}

TEST_CASE("markov") {
  const auto c4 = four_cycle_precision();
  auto o = run_cli({"markov", c4});
  REQUIRE(o.code == 0);
  check_schema(o);
  const auto g = o.report()["results"]["pairwise_graph"];
  CHECK(g["edge_list"] == "1-2,1-4,2-3,3-4");
  for (const auto& e : g["edges"]) CHECK(e["weight"].get<double>() == doctest::Approx(1.0));

  o = run_cli({"markov", c4, "--graph", "1-2,2-3,3-4"});
  CHECK(o.code == 2);
  CHECK(o.report()["results"]["global_markov"]["violations"].size() == 7);
  check_schema(o);

  o = run_cli({"markov", c4, "--graph", "1-2,2-3,3-4,1-4"});
  CHECK(o.code == 0);

  const auto tree = run_cli({"gen", "--mode", "laplacian", "--d", "5", "--graph", "1-2,2-3,2-4,4-5", "--seed", "3"});
  REQUIRE(tree.code == 0);
  o = run_cli({"markov", write("tree.json", tree.out), "--graph", "1-2,2-3,2-4,4-5"});
  CHECK(o.code == 0);
  CHECK(o.report()["results"]["global_markov"]["passes"] == true);

  o = run_cli({"markov", write("tree.json", tree.out), "--graph", "1-2,2-3,2-4,4-5", "--max-d", "4"});
  CHECK(o.code == 1);
  CHECK(o.report()["error"]["code"] == "TooLarge");
}

TEST_CASE("gen") {
  const auto a = run_cli({"gen", "--mode", "laplacian", "--graph", "1-2,2-3,3-4,1-4", "--d", "4", "--seed", "7"});
  const auto b = run_cli({"gen", "--mode", "laplacian", "--graph", "1-2,2-3,3-4,1-4", "--d", "4", "--seed", "7"});
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  const auto m = json::parse(a.out);
  CHECK(m["kind"] == "precision");
  CHECK(m["matrix"][0][2].get<double>() == 0.0);
  CHECK(m["matrix"][1][3].get<double>() == 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) CHECK(m["matrix"][i][j].get<double>() <= 0.0);
  CHECK(run_cli({"validate", write("gen_c4.json", a.out)}).code == 0);

  for (int seed = 0; seed < 5; ++seed) {
    const auto p = run_cli({"gen", "--mode", "points", "--d", "5", "--seed", std::to_string(seed)});
    REQUIRE(p.code == 0);
    CHECK(run_cli({"validate", write("gen_pts.json", p.out)}).code == 0);
  }
  CHECK(run_cli({"gen", "--mode", "points", "--d", "1"}).code == 1);
  CHECK(run_cli({"gen", "--mode", "laplacian", "--d", "4", "--graph", "1-2,3-4"}).code == 1);
  CHECK(run_cli({"gen", "--mode", "spheres", "--d", "4"}).code == 1);
}

TEST_CASE("elliptope") {
  const auto out1 = (scratch() / "e1.csv").string();
  const auto out2 = (scratch() / "e2.csv").string();
  auto o = run_cli({"elliptope", "--n", "1000", "--seed", "1", "--out", out1});
  REQUIRE(o.code == 0);
  check_schema(o);
  CHECK(run_cli({"elliptope", "--n", "1000", "--seed", "1", "--out", out2}).code == 0);
  CHECK(slurp(out1) == slurp(out2));
  const auto r = o.report()["results"];
  CHECK(r["draws"] == 1000);
  CHECK(r["accepted"].get<int>() > 500);

  o = run_cli({"elliptope", "--n", "1000", "--seed", "1", "--filters", "emtp2", "--out", out2});
  REQUIRE(o.code == 0);
  std::istringstream rows(slurp(out2));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "g12,g13,g23,in_f3,sigma2,emtp2,p_nonneg,ci12_3,ci13_2,ci23_1,boundary_flag");
  int n = 0;
  while (std::getline(rows, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 11);
    CHECK(cells[5] == "1");
    ++n;
  }
  CHECK(n == o.report()["results"]["emitted"].get<int>());

  const auto ex = (scratch() / "ex.csv").string();
  o = run_cli({"elliptope", "--n", "10", "--seed", "1", "--out", out1, "--excluded-out", ex, "--excluded-n", "25"});
  REQUIRE(o.code == 0);
  std::istringstream exrows(slurp(ex));
  int excluded = 0;
  for (std::getline(exrows, line); std::getline(exrows, line);) excluded += line.ends_with(",excluded");
  CHECK(excluded == 25);

  CHECK(run_cli({"elliptope", "--n", "0", "--out", out1}).code == 1);
  CHECK(run_cli({"elliptope", "--n", "10", "--out", (scratch() / "no/such/dir.csv").string()}).code == 1);
}

TEST_CASE("tolerance configuration") {
  const auto c4 = four_cycle_precision();
  auto o = run_cli({"--tol", "1e-6", "ci", c4, "--A", "1", "--B", "3", "--C", "2,4"});
  CHECK(o.report()["tolerance"]["source"] == "flag");
  CHECK(o.report()["tolerance"]["rel"].get<double>() == 1e-6);

  ::setenv("HRMOD_TOL", "1e-7", 1);
  o = run_cli({"ci", c4, "--A", "1", "--B", "3", "--C", "2,4"});
  CHECK(o.report()["tolerance"]["source"] == "env");
  o = run_cli({"--tol", "1e-6", "ci", c4, "--A", "1", "--B", "3", "--C", "2,4"});
  CHECK(o.report()["tolerance"]["source"] == "flag");
  ::setenv("HRMOD_TOL", "banana", 1);
  CHECK(run_cli({"ci", c4, "--A", "1", "--B", "3", "--C", "2,4"}).code == 1);
  ::unsetenv("HRMOD_TOL");

  CHECK(run_cli({}).code == 1);
  CHECK(run_cli({"frobnicate"}).code == 1);
}

TEST_CASE("schema checker rejects malformed reports") {
  json good = json::parse(R"({"command":"ci","version":"hrmod 0.1.0","tolerance":{"rel":1e-9,"source":"default"},
                             "input":{},"results":{"verdict":"holds"}})");
  CHECK(hrmod::cli::check_report_schema(good) == "");
  auto bad = good;
  bad["results"]["verdict"] = "probably";
  CHECK(hrmod::cli::check_report_schema(bad) != "");
  bad = good;
  bad["error"] = {{"code", "X"}, {"message", "y"}};
  CHECK(hrmod::cli::check_report_schema(bad) != "");
  bad = good;
  bad.erase("version");
  CHECK(hrmod::cli::check_report_schema(bad) != "");
}

TEST_CASE("installed binary honours the exit-code contract") {
  const auto c4 = four_cycle_precision();
  auto status = [](const std::string& args) {
    const std::string cmd = std::string(HRMOD_BINARY) + " " + args + " > /dev/null 2>&1";
    const int raw = std::system(cmd.c_str());
    return WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  };
  CHECK(status("ci " + c4 + " --A 1 --B 3 --C 2,4") == 0);
  CHECK(status("ci " + c4 + " --A 1 --B 2 --C 3,4") == 2);
  CHECK(status("ci " + c4 + " --A 1 --B 3 --C ''") == 1);
  CHECK(status("--version") == 0);

  FILE* pipe = ::popen((std::string(HRMOD_BINARY) + " setfn " + c4 + " --fn mhr --subsets 1,2,3,4").c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string text;
  char buf[4096];
  for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) text.append(buf, n);
  CHECK(::pclose(pipe) == 0);
  CHECK(json::parse(text)["results"]["values"][0]["value"].get<double>() == doctest::Approx(std::log(2.0)));
}
