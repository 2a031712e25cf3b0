// Acceptance gate for the toolkit. Each criterion prints exactly one
// PASS/FAIL line with its wall time; the process exits nonzero when any
// criterion fails. Tolerances are pinned here, not read from anywhere.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "ruelle/json_io.hpp"
#include "ruelle/ruelle_operator.hpp"
#include "ruelle/series.hpp"
#include "ruelle/stability.hpp"
#include "ruelle/suites.hpp"

using namespace ruelle;

namespace {

int g_failures = 0;

void criterion(const char* name, const std::function<bool(std::string&)>& body) {
  std::string detail;
  bool ok = false;
  auto t0 = std::chrono::steady_clock::now();
  try {
    ok = body(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  double ms = std::chrono::duration<double, std::milli>(
                  std::chrono::steady_clock::now() - t0)
                  .count();
  std::printf("%s  %-58s [%8.1f ms]%s%s\n", ok ? "PASS" : "FAIL", name, ms,
              detail.empty() ? "" : "  ", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

bool near(cplx v, cplx want, double tol, std::string& detail, const char* what) {
  if (std::abs(v - want) <= tol) return true;
  std::ostringstream os;
  os << what << " = (" << v.real() << "," << v.imag() << ") wanted ("
     << want.real() << "," << want.imag() << ") tol " << tol;
  detail = os.str();
  return false;
}

}  // namespace

int main() {
  // 1. Normalizing z^2 - 2 by its fixed points yields the fixture, and the
  //    full closed-form certificate comes out exactly, in under a second.
  criterion("normalization and closed-form certificate", [](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    RationalMap m(Polynomial({cplx(-2.0), cplx(0.0), cplx(1.0)}),
                  Polynomial({cplx(1.0)}));
    NormalizationResult nr = normalize_to_standard(
        m, SpherePoint::at(cplx(-1.0)), SpherePoint::at(cplx(2.0)),
        SpherePoint::infinity());
    if (!nr.map.standard_normalized()) {
      d = "normalized map not standard";
      return false;
    }
    RationalMap g = fixture_g();
    for (cplx z : {cplx(0.4, 0.2), cplx(-1.3, 0.7), cplx(2.0, -2.0)}) {
      if (std::abs(nr.map.eval(z) - g.eval(z)) > 1e-9) {
        d = "normalized map disagrees with 3w^2 - 2w";
        return false;
      }
    }
    CriticalData cd = critical_data(nr.map);
    StabilityReport rep = instability_certificate(nr.map, cd, 0, 60);
    if (!near(rep.s_value, cplx(2.0 / 3.0), 1e-10, d, "S")) return false;
    if (!near(rep.a_value, cplx(-2.0 / 3.0), 1e-10, d, "A")) return false;
    if (!near(rep.b_value, cplx(2.0 / 3.0), 1e-10, d, "B")) return false;
    if (!near(rep.coefficients[0], cplx(-3.0), 1e-10, d, "C1")) return false;
    if (!near(cd.b[0], cplx(1.0 / 6.0), 1e-12, d, "b1")) return false;
    if (rep.triviality.trivial || std::abs(rep.triviality.margin_c1 - 9.0) > 1e-9) {
      d = "triviality verdict wrong";
      return false;
    }
    if (rep.certificate != Certificate::unstable_certified) {
      d = "certificate: " + certificate_name(rep.certificate);
      return false;
    }
    LinearRelationSystem sys = build_linear_system(nr.map, cd, {0}, 60);
    if (!near(sys.matrix[0][0], cplx(1.5), 1e-10, d, "system entry")) return false;
    if (sys.rank != 1 || sys.dimension_bound != 1) {
      d = "rank/bound wrong";
      return false;
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (secs >= 1.0) {
      d = "took " + std::to_string(secs) + " s (budget 1 s)";
      return false;
    }
    return true;
  });

  // 2. Closed form vs direct preimage sums on 100 random standard maps.
  criterion("closed form matches preimage sums on random maps", [](std::string& d) {
    auto t0 = std::chrono::steady_clock::now();
    SuiteOptions opts;
    opts.seed = 1;
    opts.trials = 100;
    SuiteResult r = run_suite("lemma4", opts);
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (!r.passed || r.worst_residual >= 1e-8) {
      d = "worst residual " + std::to_string(r.worst_residual);
      return false;
    }
    if (secs >= 30.0) {
      d = "took " + std::to_string(secs) + " s (budget 30 s)";
      return false;
    }
    d = r.detail;
    return true;
  });

  // 3. The exact image of tau_2 under the z^2 operator, both routes.
  criterion("exact operator image on z^2", [](std::string& d) {
    RationalMap m = fixture_z2();
    CriticalData cd = critical_data(m);
    Kernel k = Kernel::tau(cplx(2.0));
    KernelCombination img = apply_to_kernel(m, cd, k);
    cplx closed = img.eval(cplx(1.0));
    cplx direct =
        apply_pointwise(m, [&](cplx y) { return k.eval(y); }, cplx(1.0));
    if (!near(closed, cplx(-1.0 / 3.0), 1e-12, d, "closed")) return false;
    if (!near(direct, cplx(-1.0 / 3.0), 1e-12, d, "direct")) return false;
    return true;
  });

  // 4. Column expansion through order 20 and the three-series functional
  //    relation, with truncation-dominated decay.
  criterion("column and functional relations", [](std::string& d) {
    RationalMap g = fixture_g();
    CriticalData cd = critical_data(g);
    std::vector<cplx> probes{cplx(2.0, 1.0), cplx(-0.7, -0.3)};
    std::vector<double> cols =
        column_relation_residuals(g, cd, cplx(0.9), 20, probes);
    for (double r : cols)
      if (r >= 1e-8) {
        d = "column residual " + std::to_string(r);
        return false;
      }
    cplx a = cd.values[0];
    double r100 = functional_relation_residual(g, cd, a, cplx(0.9),
                                               cplx(2.0, 1.0), 100);
    double r10 = functional_relation_residual(g, cd, a, cplx(0.9),
                                              cplx(2.0, 1.0), 10);
    double r20 = functional_relation_residual(g, cd, a, cplx(0.9),
                                              cplx(2.0, 1.0), 20);
    if (r100 >= 1e-6) {
      d = "functional residual " + std::to_string(r100);
      return false;
    }
    if (!(r20 < r10)) {
      d = "residual did not shrink under deeper truncation";
      return false;
    }
    return true;
  });

  // 5. The fixed-point identity of the kernel series: exact for the gamma
  //    kind, geometric tail decay for the tau kind.
  criterion("fixed-point identity of the kernel series", [](std::string& d) {
    RationalMap g = fixture_g();
    CriticalData cd = critical_data(g);
    std::vector<cplx> probes{cplx(2.0, 1.0), cplx(-1.5, 0.5), cplx(0.25, -2.0)};
    double rg = fixed_point_identity_residual(g, cd, 0, 60, probes);
    if (rg >= 1e-8) {
      d = "gamma residual " + std::to_string(rg);
      return false;
    }
    double r5 = fixed_point_identity_residual(g, cd, 0, 5, probes, KernelKind::tau);
    double r10 = fixed_point_identity_residual(g, cd, 0, 10, probes, KernelKind::tau);
    double r20 = fixed_point_identity_residual(g, cd, 0, 20, probes, KernelKind::tau);
    double q1 = r5 / r10, q2 = r10 / r20;
    if (q1 < 256.0 || q1 > 4096.0 || q2 < 2.6e5 || q2 > 4.2e6) {
      std::ostringstream os;
      os << "tau decay ratios " << q1 << ", " << q2;
      d = os.str();
      return false;
    }
    return true;
  });

  // 6. The operator calculus: pushforward is a right inverse on 100 random
  //    trials, the Monte-Carlo L1 norm never grows, and the Beltrami
  //    pullback is a pointwise isometry of moduli.
  criterion("right inverse, L1 contraction, Beltrami isometry", [](std::string& d) {
    KernelCombination phi;
    phi.add_term(cplx(1.0), Kernel::gamma(cplx(2.0, 0.5)));
    phi.add_term(cplx(0.0, 2.0), Kernel::tau(cplx(-1.0, -1.0)));
    std::size_t trials = 0;
    for (std::uint64_t k = 0; k < 25; ++k) {
      RationalMap m = random_standard_map(7, k);
      CriticalData cd = critical_data(m);
      std::vector<cplx> excl = phi.pole_locations();
      excl.insert(excl.end(), cd.values.begin(), cd.values.end());
      for (cplx z : annulus_probes(4, excl, 1000 + k)) {
        auto phi_fn = [&](cplx w) { return phi.eval(w); };
        cplx back = apply_pointwise(
            m, [&](cplx y) { return pushforward_at(m, phi_fn, y); }, z);
        cplx want = phi.eval(z);
        if (std::abs(back - want) > 1e-10 * std::max(1.0, std::abs(want))) {
          d = "right inverse failed on map " + std::to_string(k);
          return false;
        }
        ++trials;
      }
    }
    if (trials != 100) {
      d = "expected 100 trials, ran " + std::to_string(trials);
      return false;
    }

    RationalMap g = fixture_g();
    CriticalData cdg = critical_data(g);
    KernelCombination f =
        KernelCombination::single(cplx(1.0), Kernel::gamma(cplx(2.2, 0.7)));
    ContractionCheck cc = l1_contraction_check(g, cdg, f, 1000000, 2);
    if (!cc.holds || cc.ratio >= 1.0) {
      d = "contraction ratio " + std::to_string(cc.ratio);
      return false;
    }

    RationalMap over = fixture_z2_over();
    auto mu = [](cplx w) { return (w - cplx(0.0, 1.0)) / (std::abs(w) + 2.0); };
    for (cplx z : {cplx(0.3, 0.8), cplx(-1.2, 0.4), cplx(2.0, -1.0)}) {
      double lhs = std::abs(beltrami_apply(over, mu, z));
      double rhs = std::abs(mu(over.eval(z)));
      if (std::abs(lhs - rhs) > 1e-14 * std::max(1.0, rhs)) {
        d = "Beltrami modulus drifted";
        return false;
      }
    }
    return true;
  });

  // 7. The exact Mobius-transform identity along the fixture orbit.
  criterion("Mobius transform identity along the orbit", [](std::string& d) {
    RationalMap g = fixture_g();
    MobiusIdentityResult r = mobius_transform_identity(
        g, cplx(-1.0 / 3.0), cplx(5.0), cplx(2.0, 2.0), 60);
    if (r.residual >= 1e-9) {
      d = "residual " + std::to_string(r.residual);
      return false;
    }
    return true;
  });

  // 8. Rank reporting of the relation system, stable under row scaling.
  criterion("relation system rank reporting", [](std::string& d) {
    RationalMap g = fixture_g();
    CriticalData cd = critical_data(g);
    LinearRelationSystem sys = build_linear_system(g, cd, {0}, 60);
    if (sys.rank != 1 || sys.dimension_bound != 1) {
      d = "1x1 system rank/bound wrong";
      return false;
    }
    std::vector<std::vector<cplx>> scaled = sys.matrix;
    for (auto& row : scaled)
      for (cplx& v : row) v *= 1e3;
    if (matrix_rank(scaled) != sys.rank) {
      d = "rank changed under 1e3 scaling";
      return false;
    }
    LinearRelationSystem empty = build_linear_system(g, cd, {}, 60);
    if (empty.rank != 0 || empty.dimension_bound != 2) {
      d = "empty system bound wrong";
      return false;
    }
    return true;
  });

  if (g_failures) {
    std::printf("%d acceptance criterion(s) failed\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
