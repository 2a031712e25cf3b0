#include <doctest.h>

#include <json.hpp>

#include "ruelle/json_io.hpp"
#include "test_support.hpp"

using namespace ruelle;
using nlohmann::json;

TEST_CASE("map json round-trips byte for byte") {
  RationalMap g = fixture_g();
  std::string text = map_to_json_text(g);
  RationalMap back = map_from_json_text(text);
  CHECK(map_to_json_text(back) == text);
  CHECK(back.degree() == 2);
  CHECK(close(back.eval(cplx(2.0)), cplx(8.0)));
}

TEST_CASE("bare reals parse like [re,im] pairs") {
  RationalMap a = map_from_json_text(
      R"({"numerator": [0, -2, 3], "denominator": [1]})");
  RationalMap b = map_from_json_text(
      R"({"numerator": [[0,0], [-2,0], [3,0]], "denominator": [[1,0]]})");
  CHECK(map_to_json_text(a) == map_to_json_text(b));
}

TEST_CASE("malformed map files are input errors") {
  CHECK_THROWS_AS(map_from_json_text("not json at all"), InputError);
  CHECK_THROWS_AS(map_from_json_text(R"({"numerator": [1, 2]})"), InputError);
  CHECK_THROWS_AS(
      map_from_json_text(R"({"numerator": 7, "denominator": [1]})"),
      InputError);
  CHECK_THROWS_AS(
      map_from_json_text(R"({"numerator": [[1,2,3]], "denominator": [1]})"),
      InputError);
  CHECK_THROWS_AS(
      map_from_json_text(R"({"numerator": [["x",0]], "denominator": [1]})"),
      InputError);
  CHECK_THROWS_AS(map_from_json_file("/no/such/file.json"), InputError);
}

TEST_CASE("combination json round-trips") {
  KernelCombination f;
  f.add_term(cplx(2.0, -1.0), Kernel::gamma(cplx(0.5, 0.25)));
  f.add_term(cplx(0.0, 3.0), Kernel::tau(cplx(-2.0)));
  std::string text = combination_to_json_text(f);
  KernelCombination back = combination_from_json_text(text);
  CHECK(combination_to_json_text(back) == text);
  cplx z(1.7, 0.3);
  CHECK(close(back.eval(z), f.eval(z)));

  CHECK_THROWS_AS(combination_from_json_text(R"([{"kind":"sigma","base":1,"coeff":1}])"),
                  InputError);
  CHECK_THROWS_AS(combination_from_json_text(R"({"kind":"tau"})"), InputError);
}

TEST_CASE("complex scalar syntax") {
  CHECK(parse_complex("1,2") == cplx(1.0, 2.0));
  CHECK(parse_complex("3") == cplx(3.0, 0.0));
  CHECK(parse_complex("-1.5,2e-3") == cplx(-1.5, 2e-3));
  CHECK_THROWS_AS(parse_complex("nonsense"), InputError);
  CHECK_THROWS_AS(parse_complex("1,junk"), InputError);
  CHECK_THROWS_AS(parse_complex(""), InputError);
  cplx v(0.1, -7.25);
  CHECK(parse_complex(format_complex(v)) == v);
}

TEST_CASE("analysis report carries the frozen fixture facts") {
  RationalMap g = fixture_g();
  json j = json::parse(critical_data_to_json_text(g, critical_data(g)));
  CHECK(j["degree"] == 2);
  CHECK(j["standard_normalized"] == true);
  REQUIRE(j["critical_points"].size() == 1);
  CHECK(j["critical_points"][0][0].get<double>() ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(j["residues_b"][0][0].get<double>() ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-12));
  CHECK(j["critical_values"][0][0].get<double>() ==
        doctest::Approx(-1.0 / 3.0).epsilon(1e-12));
  CHECK(j["map"]["numerator"].size() == 3);
  CHECK(j["poles"].empty());
}

TEST_CASE("stability report emits the certificate verdict") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  StabilityReport rep = instability_certificate(g, cd, 0, 60);
  json j = json::parse(stability_to_json_text(rep));
  CHECK(j["certificate"] == "unstable-certified");
  CHECK(j["summability"] == "summable-evidence");
  CHECK(j["S"][0].get<double>() == doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(j["triviality"]["trivial"] == false);
  CHECK(j["triviality"]["margin_c1"].get<double>() ==
        doctest::Approx(9.0).epsilon(1e-9));
}

TEST_CASE("suite result json keeps the pass flag and residual") {
  SuiteOptions opts;
  opts.trials = 5;
  SuiteResult r = run_suite("mobius", opts);
  json j = json::parse(suite_result_to_json_text(r));
  CHECK(j["suite"] == "mobius");
  CHECK(j["passed"] == true);
  CHECK(j["worst_residual"].get<double>() == r.worst_residual);
  CHECK(j["trials"] == 5);
}
