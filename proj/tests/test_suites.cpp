#include <doctest.h>

#include "ruelle/suites.hpp"
#include "test_support.hpp"

using namespace ruelle;

TEST_CASE("every suite passes with small budgets") {
  SuiteOptions opts;
  opts.seed = 7;

  opts.trials = 10;
  SuiteResult lemma4 = run_suite("lemma4", opts);
  CHECK(lemma4.passed);
  CHECK(lemma4.worst_residual < lemma4.tolerance);
  CHECK(lemma4.trials == 10);

  opts.trials = 100;
  CHECK(run_suite("prop6", opts).passed);
  CHECK(run_suite("cor9", opts).passed);

  opts.trials = 2;
  opts.samples = 20000;
  SuiteResult contraction = run_suite("contraction", opts);
  CHECK(contraction.passed);
  CHECK(contraction.worst_residual < 1.0);  // the MC norm ratio itself

  opts.trials = 5;
  CHECK(run_suite("mobius", opts).passed);
}

TEST_CASE("suites are deterministic in the seed") {
  SuiteOptions opts;
  opts.seed = 11;
  opts.trials = 8;
  SuiteResult a = run_suite("lemma4", opts);
  SuiteResult b = run_suite("lemma4", opts);
  CHECK(a.worst_residual == b.worst_residual);
  CHECK(a.detail == b.detail);
  opts.seed = 12;
  SuiteResult c = run_suite("lemma4", opts);
  CHECK(a.worst_residual != c.worst_residual);
}

TEST_CASE("an unreachable tolerance fails honestly") {
  SuiteOptions opts;
  opts.trials = 5;
  opts.tolerance = 1e-18;
  SuiteResult r = run_suite("lemma4", opts);
  CHECK_FALSE(r.passed);
  CHECK(r.worst_residual > r.tolerance);
}

TEST_CASE("unknown suite names are rejected") {
  CHECK_THROWS_AS(run_suite("nonsense", SuiteOptions{}), InputError);
}

TEST_CASE("suite names are stable") {
  std::vector<std::string> names = suite_names();
  REQUIRE(names.size() == 5);
  CHECK(names[0] == "lemma4");
  CHECK(names[1] == "prop6");
  CHECK(names[2] == "cor9");
  CHECK(names[3] == "contraction");
  CHECK(names[4] == "mobius");
}

TEST_CASE("random standard maps are usable fixtures") {
  for (std::uint64_t k = 0; k < 10; ++k) {
    RationalMap m = random_standard_map(5, k);
    CHECK(m.standard_normalized());
    CHECK(m.degree() >= 2);
    CHECK(m.degree() <= 4);
    CriticalData cd = critical_data(m);  // simple critical points guaranteed
    CHECK(cd.points.size() >= 1);
    CHECK(cd.max_decomposition_residual < 1e-8);
  }
}
