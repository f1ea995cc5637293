#include "support.hpp"

#include "hyperdyn/errors.hpp"
#include "hyperdyn/io.hpp"
#include "hyperdyn/scenario.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>
#include <unistd.h>

using namespace testing;
namespace fs = std::filesystem;

namespace {

const fs::path kData = HYPERDYN_TEST_DATA;

Scenario load(const std::string& name) { return parse_scenario(read_text_file(kData / name)); }

RunOptions at_data() {
  RunOptions o;
  o.base_dir = kData;
  return o;
}

fs::path scratch_dir(const std::string& tag) {
  fs::path d = fs::temp_directory_path() / ("hyperdyn_" + tag + "_" + std::to_string(::getpid()));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::vector<std::string> lines_of(const fs::path& p) {
  std::ifstream in(p);
  std::vector<std::string> out;
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

int run_cli(const std::string& args) {
  int status = std::system((std::string(HYPERDYN_CLI) + " " + args + " > /dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("scenario round trip") {
  for (const char* name : {"star.scn", "failing.scn", "empty.scn", "truncated_tent.scn"}) {
    Scenario s = load(name);
    CHECK(parse_scenario(serialize_scenario(s)) == s);
    CHECK(serialize_scenario(parse_scenario(serialize_scenario(s))) == serialize_scenario(s));
  }
  Scenario s;
  s.name = "quote \" and \\ inside";
  s.map = "builtin:period-doubling(4)";
  s.seed = 42;
  s.continua = {{"x", "{ e0:[1/4,1/2] }"}};
  s.analyses.push_back({"probe-equicontinuity", {{"continuum", "@x"}, {"eps", "[1/10, 1/20]"}, {"horizon", "30"}}});
  s.analyses.push_back({"check-center", {{"depth", "4"}, {"tol", "1/1000"}}});
  CHECK(parse_scenario(serialize_scenario(s)) == s);
}

TEST_CASE("scenario parse errors carry positions") {
  auto position = [](const std::string& text) -> std::pair<std::size_t, std::size_t> {
    try {
      parse_scenario(text);
    } catch (const ParseError& e) {
      return {e.line(), e.column()};
    }
    return {0, 0};
  };
  CHECK(position("name = \"x\"\n[analyses]\n") == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(position("map = \"builtin:tent\"\n  oops\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(position("map = \"builtin:tent\"\nname = \"unterminated\n") == std::pair<std::size_t, std::size_t>{2, 8});
  CHECK(position("map = \"builtin:tent\"\nseed = -4\n") == std::pair<std::size_t, std::size_t>{2, 8});
  CHECK(position("map = \"builtin:tent\"\nmap = \"builtin:flip\"\n").first == 2);
  CHECK(position("map = \"builtin:tent\"\n[[analysis]]\nkind = \"classify\"\ncontinuum = \"@w\"\nhorizon = many\n") ==
        std::pair<std::size_t, std::size_t>{5, 11});
}

TEST_CASE("scenario validation errors") {
  CHECK_THROWS_AS(parse_scenario("map = \"builtin:tent\"\n[[analysis]]\nkind = \"integrate\"\n"), ValidationError);
  CHECK_THROWS_AS(parse_scenario("map = \"builtin:tent\"\n[[analysis]]\nkind = \"classify\"\ncontinuum = \"@w\"\nspeed = 3\n"), Error);
  CHECK_THROWS_AS(parse_scenario("map = \"builtin:tent\"\n[[analysis]]\nkind = \"classify\"\n"), Error);
  CHECK_THROWS_AS(parse_scenario("map = \"builtin:tent\"\n[[analysis]]\nkind = \"classify\"\ncontinuum = \"@w\"\nhorizon = 0\n"), Error);
  CHECK_THROWS_AS(parse_scenario("map = \"builtin:tent\"\n[[analysis]]\nkind = \"check-center\"\ndepth = 99\n"), Error);
  CHECK_THROWS_AS(parse_scenario("name = \"no map\"\n"), Error);

  Scenario unknown = parse_scenario("map = \"builtin:tent\"\n[[analysis]]\nkind = \"classify\"\ncontinuum = \"@nope\"\n");
  CHECK_THROWS_AS(run_scenario(unknown), Error);
  Scenario missing_file = parse_scenario("graph = \"absent.graph\"\nmap = \"absent.map\"\n");
  CHECK_THROWS_AS(run_scenario(missing_file, at_data()), IoError);
}

TEST_CASE("star scenario reports periods 12 and 30") {
  RunResult r = run_scenario(load("star.scn"), at_data());
  CHECK(r.failures == 0);
  const Json& a = r.report["analyses"];
  REQUIRE(a.size() == 4);
  CHECK(a[0]["result"]["period"] == 12);
  CHECK(a[1]["result"]["period"] == 30);
  CHECK(a[0]["result"]["preperiod"] == 0);
  CHECK(a[2]["status"] == "pass");
  CHECK(a[3]["status"] == "pass");
}

TEST_CASE("file-based scenario") {
  RunResult r = run_scenario(load("truncated_tent.scn"), at_data());
  CHECK(r.failures == 0);
  const Json& a = r.report["analyses"];
  CHECK(a[0]["result"]["verdict"] == "AsymptoticallyDegenerate");
  CHECK(a[0]["result"]["limit_cycle"] == Json::array({"{ e0:[0,0] }"}));
  CHECK(a[2]["result"]["period"] == 1);
  CHECK(a[2]["result"]["limit_cycle"] == Json::array({"{ e0:[0,1] }"}));
  CHECK(a[3]["result"]["points"].size() == 2);
  CHECK(a[3]["result"]["heuristic"] == true);
  CHECK(r.report["approximate"] == false);
}

TEST_CASE("empty scenario and failing scenario") {
  RunResult empty = run_scenario(load("empty.scn"), at_data());
  CHECK(empty.failures == 0);
  CHECK(empty.report["analyses"].empty());

  RunResult failing = run_scenario(load("failing.scn"), at_data());
  CHECK(failing.failures == 1);
  CHECK(failing.report["analyses"][0]["status"] == "fail");
}

TEST_CASE("reports are byte-identical across runs and worker counts") {
  Scenario s = load("truncated_tent.scn");
  s.analyses.push_back({"probe-equicontinuity", {{"continuum", "{ e0:[1/4,3/4] }"}, {"eps", "[1/10]"}, {"horizon", "40"}, {"samples", "20"}}});
  RunOptions one = at_data(), four = at_data();
  four.jobs = 4;
  std::string a = run_scenario(s, one).report.dump(2);
  std::string b = run_scenario(s, one).report.dump(2);
  std::string c = run_scenario(s, four).report.dump(2);
  CHECK(a == b);
  CHECK(a == c);

  RunOptions reseeded = at_data();
  reseeded.seed_override = 99;
  CHECK(run_scenario(s, reseeded).report["seed"] == 99);
}

TEST_CASE("plot data export") {
  Scenario s;
  s.map = "builtin:star-3-4-2-5";
  s.analyses.push_back({"orbit", {{"continuum", "@A"}, {"horizon", "24"}}});
  s.analyses.push_back({"classify", {{"continuum", "@B"}, {"horizon", "100"}}});
  RunResult star = run_scenario(s);
  fs::path dir = scratch_dir("star_csv");
  export_plot_data(star.report, dir);

  auto orbit = lines_of(dir / "orbit_0_orbit.csv");
  REQUIRE(orbit.size() == 26);
  CHECK(orbit[0] == "n,diameter,diameter_decimal,dist_to_limit,dist_to_limit_decimal");
  std::string first_diam = orbit[1].substr(orbit[1].find(',') + 1);
  first_diam = first_diam.substr(0, first_diam.find(','));
  for (std::size_t i = 1; i < orbit.size(); ++i) {
    std::string row = orbit[i].substr(orbit[i].find(',') + 1);
    CHECK(row.substr(0, row.find(',')) == first_diam);
    CHECK(row.substr(row.rfind(',') - 1) == "0,0");
  }

  Scenario t;
  t.map = "builtin:truncated-tent(3)";
  t.analyses.push_back({"classify", {{"continuum", "@plateau"}, {"horizon", "20"}}});
  fs::path tdir = scratch_dir("tent_csv");
  export_plot_data(run_scenario(t).report, tdir);
  auto tent = lines_of(tdir / "orbit_0_classify.csv");
  REQUIRE(tent.size() >= 4);
  CHECK(tent[1].rfind("0,1/3,", 0) == 0);
  CHECK(tent[2].rfind("1,0,", 0) == 0);
  CHECK(tent[3].rfind("2,0,0,0,0", 0) == 0);

  fs::path fdir = scratch_dir("fail_csv");
  export_plot_data(run_scenario(load("failing.scn"), at_data()).report, fdir);
  auto checks = lines_of(fdir / "checks.csv");
  REQUIRE(checks.size() == 2);
  CHECK(checks[1].rfind("0,verify-cycle,cycle-of-graphs,fail,", 0) == 0);
  fs::remove_all(dir);
  fs::remove_all(tdir);
  fs::remove_all(fdir);
}

TEST_CASE("outputs are written next to the scenario") {
  fs::path dir = scratch_dir("outputs");
  fs::copy(kData / "tent.graph", dir / "tent.graph");
  fs::copy(kData / "truncated_tent.map", dir / "truncated_tent.map");
  Scenario s = load("truncated_tent.scn");
  s.report = "out/report.json";
  s.csv_dir = "out/csv";
  RunOptions o;
  o.base_dir = dir;
  RunResult r = run_scenario(s, o);
  write_outputs(s, r, dir);
  CHECK(Json::parse(read_text_file(dir / "out/report.json")) == r.report);
  CHECK(fs::exists(dir / "out/csv/orbit_1_orbit.csv"));
  fs::remove_all(dir);
}

TEST_CASE("random theorem suites") {
  for (const char* suite : {"period-bound", "nesting", "recurrence"}) {
    RunResult r = run_random_suite(suite, 30, 5, 2000);
    CHECK(r.failures == 0);
    CHECK(run_random_suite(suite, 30, 5, 2000).report.dump() == r.report.dump());
  }
  CHECK_THROWS_AS(run_random_suite("no-such-suite", 1, 1, 10), Error);
}

TEST_CASE("command line exit codes") {
  fs::path dir = scratch_dir("cli");
  std::string data = kData.string();
  CHECK(run_cli("run " + data + "/star.scn --report " + (dir / "star.json").string()) == 0);
  CHECK(run_cli("run " + data + "/failing.scn") == 1);
  CHECK(run_cli("run " + data + "/malformed.scn") == 2);
  CHECK(run_cli("run " + data + "/absent.scn") == 2);
  CHECK(run_cli("classify --builtin 'truncated-tent(3)' --continuum '{ e0:[1/3,2/3] }' --horizon 10") == 0);
  CHECK(run_cli("classify --graph " + data + "/tent.graph --map " + data + "/truncated_tent.map --continuum '{ e0:[0,1/10] }'") == 0);
  CHECK(run_cli("check nesting --builtin 'period-doubling(4)'") == 0);
  CHECK(run_cli("enumerate periodic --builtin tent") == 0);
  CHECK(run_cli("probe equicontinuity --builtin tent --continuum '{ e0:[1/4,3/4] }' --eps 1/10 --horizon 40 --samples 20") == 0);
  CHECK(run_cli("export --report " + (dir / "star.json").string() + " --csv-dir " + (dir / "csv").string()) == 0);
  CHECK(fs::exists(dir / "csv/checks.csv"));
  CHECK(run_cli("builtins") == 0);
  CHECK(run_cli("frobnicate") != 0);

  std::string seeded = (dir / "seeded.json").string();
  CHECK(std::system(("HYPERDYN_SEED=77 " + std::string(HYPERDYN_CLI) + " run " + data + "/empty.scn --report " + seeded + " > /dev/null").c_str()) == 0);
  CHECK(Json::parse(read_text_file(seeded))["seed"] == 77);
  CHECK(run_cli("run " + data + "/empty.scn --seed 5 --report " + seeded) == 0);
  CHECK(Json::parse(read_text_file(seeded))["seed"] == 5);
  fs::remove_all(dir);
}
