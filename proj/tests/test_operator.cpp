#include <doctest.h>

#include <cmath>

#include "ruelle/ruelle_operator.hpp"
#include "ruelle/suites.hpp"
#include "test_support.hpp"

using namespace ruelle;

TEST_CASE("transfer of tau_2 under z^2 in closed form and by preimages") {
  RationalMap m = fixture_z2();
  CriticalData cd = critical_data(m);
  KernelCombination out = apply_to_kernel(m, cd, Kernel::tau(cplx(2.0)));
  // (1/4) tau_4 - (1/4) tau_0
  REQUIRE(out.terms().size() == 2);
  for (const KernelTerm& t : out.terms()) {
    CHECK(t.kernel.kind == KernelKind::tau);
    if (std::abs(t.kernel.base - cplx(4.0)) < 1e-12)
      CHECK(close(t.coeff, cplx(0.25)));
    else {
      CHECK(close(t.kernel.base, cplx(0.0)));
      CHECK(close(t.coeff, cplx(-0.25)));
    }
  }
  cplx closed = out.eval(cplx(1.0));
  cplx direct = apply_pointwise(
      m, [](cplx y) { return Kernel::tau(cplx(2.0)).eval(y); }, cplx(1.0));
  CHECK(close(closed, cplx(-1.0 / 3.0)));
  CHECK(close(direct, cplx(-1.0 / 3.0)));
}

TEST_CASE("pointwise operator facts on the fixtures") {
  RationalMap g = fixture_g();
  // preimages of 1 under g are 1 and -1/3 with derivative +-4
  cplx v = apply_pointwise(g, [](cplx) { return cplx(1.0); }, cplx(1.0));
  CHECK(close(v, cplx(1.0 / 8.0)));

  RationalMap m = fixture_z2();
  double mod = modulus_apply_pointwise(
      m, [](cplx y) { return Kernel::tau(cplx(2.0)).eval(y); }, cplx(1.0));
  CHECK(std::abs(mod - 1.0 / 3.0) < 1e-12);
  CHECK(close(pushforward_at(m, [](cplx) { return cplx(1.0); }, cplx(1.0)),
              cplx(2.0)));
  CHECK(close(beltrami_apply(m, [](cplx) { return cplx(1.0); }, cplx(0.0, 1.0)),
              cplx(-1.0)));
}

TEST_CASE("evaluation at a critical value is refused") {
  RationalMap m = fixture_z2();
  CHECK_THROWS_AS(
      apply_pointwise(m, [](cplx) { return cplx(1.0); }, cplx(0.0)),
      PreconditionError);
}

TEST_CASE("critical-base coefficients on g") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  cplx cg = critical_kernel_coefficient(g, cd, 0, KernelKind::gamma);
  CHECK(close(cg, cplx(-0.25), 1e-12));
  cplx ct = critical_kernel_coefficient(g, cd, 0, KernelKind::tau);
  CHECK(close(ct, cplx(0.0), 1e-12));

  // the gamma coefficient is the limit of 1/R'(a) + b gamma_a(c) as a -> c,
  // with deviation linear in delta. Below delta ~ 1e-5 the 1/(6 delta)
  // cancellation between the two summands eats the signal, so probe above it.
  const cplx c = cd.points[0];
  auto probe = [&](double delta) {
    cplx a = c + delta;
    return 1.0 / g.derivative_at(a) + cd.b[0] * Kernel::gamma(a).eval(c);
  };
  for (double delta : {1e-3, 1e-4, 1e-5})
    CHECK(std::abs(probe(delta) - cg) <= delta);
  double decade = std::abs(probe(1e-3) - cg) / std::abs(probe(1e-4) - cg);
  CHECK(decade > 9.5);  // deviation shrinks linearly
  CHECK(decade < 10.5);
  // two-point extrapolation removes the linear term entirely
  const double d1 = 1e-3, d2 = 1e-5;
  cplx extrap = (d1 * probe(d2) - d2 * probe(d1)) / (d1 - d2);
  CHECK(std::abs(extrap - cg) < 1e-6);
}

TEST_CASE("gamma at the critical value of g is an eigenfunction") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  KernelCombination out = apply_to_kernel(g, cd, Kernel::gamma(cplx(-1.0 / 3.0)));
  REQUIRE(out.terms().size() == 1);
  CHECK(out.terms()[0].kernel.kind == KernelKind::gamma);
  CHECK(close(out.terms()[0].kernel.base, cplx(-1.0 / 3.0), 1e-12));
  CHECK(close(out.terms()[0].coeff, cplx(-0.5), 1e-12));
}

TEST_CASE("a base at the critical point dispatches to the limit form") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  for (cplx base : {cplx(1.0 / 3.0), cplx(1.0 / 3.0 + 1e-10)}) {
    KernelCombination out = apply_to_kernel(g, cd, Kernel::gamma(base));
    REQUIRE(out.terms().size() == 1);
    CHECK(close(out.terms()[0].kernel.base, cplx(-1.0 / 3.0), 1e-9));
    CHECK(close(out.terms()[0].coeff, cplx(-0.25), 1e-9));
  }
}

TEST_CASE("critical terms with degenerate output bases are dropped") {
  // both critical values of z^2/(2z-1) sit at 0 and 1, so only the
  // principal term survives: (25/12) gamma_{9/5}
  RationalMap m = fixture_z2_over();
  CriticalData cd = critical_data(m);
  KernelCombination out = apply_to_kernel(m, cd, Kernel::gamma(cplx(3.0)));
  REQUIRE(out.terms().size() == 1);
  CHECK(close(out.terms()[0].kernel.base, cplx(9.0 / 5.0), 1e-12));
  CHECK(close(out.terms()[0].coeff, cplx(25.0 / 12.0), 1e-12));
}

TEST_CASE("degenerate input kernels map to the empty combination") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  CHECK(apply_to_kernel(g, cd, Kernel::gamma(cplx(1.0))).empty());
}

TEST_CASE("closed form agrees with preimage sums on random maps") {
  for (std::uint64_t idx = 0; idx < 5; ++idx) {
    RationalMap m = random_standard_map(41, idx);
    CriticalData cd = critical_data(m);
    std::vector<cplx> excl = cd.points;
    for (cplx d : cd.values) excl.push_back(d);
    for (cplx p : m.poles()) excl.push_back(p);
    excl.emplace_back(0.0);
    excl.emplace_back(1.0);
    cplx a = annulus_probes(1, excl, 1000 + idx, 0.7, 2.2, 0.1)[0];
    Kernel k = Kernel::gamma(a);
    KernelCombination out = apply_to_kernel(m, cd, k);
    std::vector<cplx> probe_excl = excl;
    probe_excl.push_back(a);
    for (cplx p : out.pole_locations()) probe_excl.push_back(p);
    for (cplx z : annulus_probes(4, probe_excl, 2000 + idx, 0.5, 3.0, 0.05)) {
      cplx direct = apply_pointwise(m, [&](cplx y) { return k.eval(y); }, z);
      CHECK(std::abs(out.eval(z) - direct) <= 1e-8 * (1.0 + std::abs(direct)));
    }
  }
}

TEST_CASE("closed-form application is linear") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  KernelCombination f = KernelCombination::single(cplx(1.0), Kernel::gamma(cplx(2.0, 1.0)));
  KernelCombination h = KernelCombination::single(cplx(1.0), Kernel::tau(cplx(-2.0)));
  const cplx alpha(0.7, -0.4);
  KernelCombination lhs = apply_to_combination(g, cd, f * alpha + h);
  KernelCombination rf = apply_to_combination(g, cd, f);
  KernelCombination rh = apply_to_combination(g, cd, h);
  for (std::uint64_t i = 0; i < 5; ++i) {
    cplx z = sample_annulus(17, 8, i, 2.5, 4.0);
    cplx expect = alpha * rf.eval(z) + rh.eval(z);
    CHECK(std::abs(lhs.eval(z) - expect) <= 1e-12 * (1.0 + std::abs(expect)));
  }
}

TEST_CASE("pushforward is a right inverse of the transfer operator") {
  KernelCombination phi = KernelCombination::single(cplx(1.0), Kernel::gamma(cplx(2.0, 0.5)));
  phi.add_term(cplx(0.0, 2.0), Kernel::tau(cplx(-1.0, -1.0)));
  auto f = phi.as_evaluable();
  for (std::uint64_t idx = 0; idx < 4; ++idx) {
    RationalMap m = idx < 2 ? (idx == 0 ? fixture_g() : fixture_z2_over())
                            : random_standard_map(43, idx);
    std::vector<cplx> excl{cplx(0.0), cplx(1.0)};
    for (cplx p : m.poles()) excl.push_back(p);
    CriticalData cd = critical_data(m);
    for (cplx c : cd.points) excl.push_back(c);
    for (cplx d : cd.values) excl.push_back(d);
    for (cplx z : annulus_probes(5, excl, 3000 + idx, 0.6, 2.8, 0.05)) {
      cplx back = apply_pointwise(
          m, [&](cplx y) { return pushforward_at(m, f, y); }, z);
      CHECK(std::abs(back - f(z)) <= 1e-10 * (1.0 + std::abs(f(z))));
    }
  }
}

TEST_CASE("beltrami composition preserves modulus exactly") {
  RationalMap m = fixture_z2_over();
  auto mu = [](cplx w) { return (w - cplx(0.0, 1.0)) / (std::abs(w) + 2.0); };
  for (std::uint64_t i = 0; i < 6; ++i) {
    cplx z = sample_annulus(19, 9, i, 0.8, 2.0);
    cplx b = beltrami_apply(m, mu, z);
    CHECK(std::abs(std::abs(b) - std::abs(mu(m.eval(z)))) <=
          1e-15 * (1.0 + std::abs(b)));
  }
}

TEST_CASE("monte-carlo contraction check holds on the fixtures") {
  RationalMap g = fixture_g();
  CriticalData cd = critical_data(g);
  KernelCombination f = KernelCombination::single(cplx(1.0), Kernel::gamma(cplx(2.2, 0.7)));
  ContractionCheck c = l1_contraction_check(g, cd, f, 50000, 2);
  CHECK(c.holds);
  CHECK(c.norm_before > 0.0);
  CHECK(c.ratio < 1.0);
}

TEST_CASE("annulus probes respect radii and exclusions") {
  std::vector<cplx> excl{cplx(1.0, 0.0)};
  std::vector<cplx> pts = annulus_probes(30, excl, 5, 0.5, 3.0, 0.2);
  REQUIRE(pts.size() == 30);
  for (cplx p : pts) {
    CHECK(std::abs(p) >= 0.5 - 1e-12);
    CHECK(std::abs(p) <= 3.0 + 1e-12);
    CHECK(std::abs(p - cplx(1.0)) >= 0.2 - 1e-12);
  }
  // deterministic in the seed
  CHECK(annulus_probes(30, excl, 5, 0.5, 3.0, 0.2)[7] == pts[7]);
}
