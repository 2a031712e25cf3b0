#pragma once

// Seeded verification suites behind the CLI `verify` subcommand. Each suite
// exercises one identity of the calculus and reports its worst residual:
//   lemma4       closed-form transfer operator vs direct preimage sums on
//                random standard maps
//   prop6        column expansion of operator powers on the fixture map
//   cor9         functional relation between the three series on the fixture
//   contraction  Monte-Carlo L1 norm never grows under the operator
//   mobius       exact Mobius-transform algebra along an orbit

#include <cstdint>
#include <string>
#include <vector>

#include "ruelle/stability.hpp"

namespace ruelle {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double worst_residual = 0.0;
  double tolerance = 0.0;
  std::size_t trials = 0;
  std::string detail;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  std::size_t trials = 100;
  std::size_t samples = 200000;  // contraction suite Monte-Carlo size
  double tolerance = 0.0;        // 0 means the suite default
};

// known suite names, in the order the CLI lists them
std::vector<std::string> suite_names();

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts);

// fixture maps used across suites and tests
RationalMap fixture_g();        // 3w^2 - 2w, conjugate of z^2 - 2
RationalMap fixture_z2();       // z^2
RationalMap fixture_z2_over();  // z^2 / (2z - 1)

// deterministic random rational map fixing 0, 1, infinity with simple,
// well-separated critical points; degree drawn from [min_degree, max_degree]
RationalMap random_standard_map(std::uint64_t seed, std::uint64_t index,
                                int min_degree = 2, int max_degree = 4);

}  // namespace ruelle
