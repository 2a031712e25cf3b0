// End-to-end checks of the ruelle-kit binary: exit codes, output formats,
// and determinism. The binary path and sample-map directory come in as
// compile definitions from CMake.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
  std::string cmd = env.empty() ? std::string() : env + " ";
  cmd += std::string(RUELLE_KIT_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return {};
  RunResult r;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int status = pclose(pipe);
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string map_path(const char* name) {
  return std::string(RUELLE_KIT_MAPS_DIR) + "/" + name;
}

std::string write_temp(const char* name, const std::string& body) {
  std::string path = std::string("/tmp/ruelle_cli_") + name;
  std::ofstream(path) << body;
  return path;
}

bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("analyze reports the fixture decomposition") {
  RunResult r = run_cli("analyze --map " + map_path("g.json"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"degree\": 2"));
  CHECK(contains(r.out, "critical_points"));
  CHECK(contains(r.out, "0.3333333333333333"));  // c = 1/3 as json renders it
}

TEST_CASE("input problems exit with code 2") {
  CHECK(run_cli("analyze --map /no/such/file.json").exit_code == 2);
  CHECK(run_cli("analyze").exit_code == 2);  // --map missing
  CHECK(run_cli("definitely-not-a-subcommand").exit_code == 2);

  std::string bad = write_temp("bad.json", "{ this is not json");
  CHECK(run_cli("analyze --map " + bad).exit_code == 2);

  std::string shared = write_temp(
      "shared.json", R"({"numerator": [0, 1], "denominator": [0, 1]})");
  CHECK(run_cli("analyze --map " + shared).exit_code == 2);
}

TEST_CASE("maps outside the calculus hypotheses exit with code 3") {
  // z^3 has a non-simple critical point at 0
  std::string cube = write_temp(
      "cube.json", R"({"numerator": [0, 0, 0, 1], "denominator": [1]})");
  CHECK(run_cli("analyze --map " + cube).exit_code == 3);
}

TEST_CASE("summability csv emits the four labelled blocks") {
  RunResult r = run_cli("summability --map " + map_path("g.json") +
                        " --point=-0.3333333333333333 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("# forward", 0) == 0);
  CHECK(contains(r.out, "# absolute"));
  CHECK(contains(r.out, "# conjugation_sensitivity"));
  CHECK(contains(r.out, "n,term_re,term_im,partial_re,partial_im,|term|"));
}

TEST_CASE("forward series csv is exact on the fixture") {
  RunResult r = run_cli("series --map " + map_path("g.json") +
                        " --type forward --point=-0.3333333333333333"
                        " --order 1 --format csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.rfind("n,term_re,term_im,partial_re,partial_im,|term|\n", 0) == 0);
  CHECK(contains(r.out, "\n0,1,0,1,0,1\n"));
}

TEST_CASE("modified series hits the frozen value") {
  RunResult r = run_cli("series --map " + map_path("g.json") +
                        " --type modified --point=-0.3333333333333333"
                        " --z 2 --order 5");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "0.09523809523809523"));  // 2/21
}

TEST_CASE("verify passes, repeats bitwise, and honors a forced tolerance") {
  std::string args = "verify --suite lemma4 --trials 5 --seed 9";
  RunResult a = run_cli(args);
  CHECK(a.exit_code == 0);
  CHECK(contains(a.out, "\"passed\": true"));
  RunResult b = run_cli(args);
  CHECK(b.out == a.out);
  CHECK(run_cli(args + " --tol 1e-16").exit_code == 1);
}

TEST_CASE("orbit csv rows are exact") {
  RunResult g = run_cli("orbit --map " + map_path("g.json") +
                        " --point=-0.3333333333333333 --n 3");
  CHECK(g.exit_code == 0);
  CHECK(g.out ==
        "n,z_re,z_im,dz_re,dz_im\n"
        "0,-0.33333333333333331,0,1,0\n"
        "1,1,0,-4,0\n"
        "2,1,0,-16,0\n"
        "3,1,0,-64,0\n");

  RunResult z2 = run_cli("orbit --map " + map_path("z2.json") +
                         " --point=3 --n 3");
  CHECK(contains(z2.out, "\n3,6561,0,17496,0\n"));

  RunResult zero = run_cli("orbit --map " + map_path("z2.json") +
                           " --point=3 --n 0");
  CHECK(zero.out == "n,z_re,z_im,dz_re,dz_im\n0,3,0,1,0\n");
}

TEST_CASE("grid emits resolution^2 rows after the header") {
  RunResult r = run_cli("grid --map " + map_path("z2.json") +
                        " --resolution 5");
  CHECK(r.exit_code == 0);
  std::size_t lines = 0;
  for (char c : r.out) lines += (c == '\n');
  CHECK(lines == 26);
  CHECK(r.out.rfind("ix,iy,re,im,iterations,escaped\n", 0) == 0);
}

TEST_CASE("analyze output round-trips through its own map echo") {
  RunResult first = run_cli("analyze --map " + map_path("g.json"));
  REQUIRE(first.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(first.out);
  nlohmann::json echo{{"numerator", j["map"]["numerator"]},
                      {"denominator", j["map"]["denominator"]}};
  std::string path = write_temp("echo.json", echo.dump());
  RunResult second = run_cli("analyze --map " + path);
  CHECK(second.exit_code == 0);
  CHECK(second.out == first.out);
}

TEST_CASE("stability subcommand certifies the fixture") {
  RunResult r = run_cli("stability --map " + map_path("g.json") + " --index 0");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "unstable-certified"));
  CHECK(contains(r.out, "\"margin_c1\": 9.0"));
}

TEST_CASE("rank subcommand reports the 1x1 system") {
  RunResult r = run_cli("rank --map " + map_path("g.json") + " --index 0");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "\"rank\": 1"));
  CHECK(contains(r.out, "\"dimension_bound\": 1"));
}

TEST_CASE("ruelle-apply agrees between closed form and preimage sum") {
  RunResult r = run_cli("ruelle-apply --map " + map_path("z2.json") +
                        " --kind tau --base 2 --at 1");
  CHECK(r.exit_code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["value_closed_form"] == j["value_preimage_sum"]);
  CHECK(j["value_closed_form"] == "-0.33333333333333331,0");
}

TEST_CASE("thread count does not change results") {
  std::string args = "verify --suite contraction --trials 1 --samples 20000 --seed 4";
  RunResult one = run_cli(args, "RUELLE_KIT_THREADS=1");
  RunResult seven = run_cli(args, "RUELLE_KIT_THREADS=7");
  CHECK(one.exit_code == 0);
  CHECK(one.out == seven.out);
}
