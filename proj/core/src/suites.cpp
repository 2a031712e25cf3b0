#include "ruelle/suites.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ruelle/ruelle_operator.hpp"

namespace ruelle {

RationalMap fixture_g() {
  return RationalMap(Polynomial({0.0, -2.0, 3.0}), Polynomial({1.0}));
}

RationalMap fixture_z2() {
  return RationalMap(Polynomial({0.0, 0.0, 1.0}), Polynomial({1.0}));
}

RationalMap fixture_z2_over() {
  return RationalMap(Polynomial({0.0, 0.0, 1.0}), Polynomial({-1.0, 2.0}));
}

namespace {

cplx coeff_sample(std::uint64_t seed, std::uint64_t stream, std::uint64_t index,
                  std::uint64_t k) {
  // modulus in [0.5, 1.5] keeps constant and leading coefficients honest
  double m = 0.5 + sample_u01(seed, stream, index, 2 * k);
  double ph = 6.283185307179586 * sample_u01(seed, stream, index, 2 * k + 1);
  return std::polar(m, ph);
}

bool well_conditioned(const RationalMap& map, const CriticalData& cd) {
  const auto& c = cd.points;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (std::abs(c[i]) > 20.0) return false;
    if (std::abs(c[i]) < 0.05 || std::abs(c[i] - 1.0) < 0.05) return false;
    double bm = std::abs(cd.b[i]);
    if (bm < 1e-4 || bm > 1e4) return false;
    if (std::abs(cd.values[i]) > 1e3) return false;
    for (std::size_t j = i + 1; j < c.size(); ++j)
      if (std::abs(c[i] - c[j]) < 1e-2) return false;
    for (cplx p : map.poles())
      if (std::abs(c[i] - p) < 0.05) return false;
  }
  return true;
}

}  // namespace

RationalMap random_standard_map(std::uint64_t seed, std::uint64_t index,
                                int min_degree, int max_degree) {
  if (min_degree < 2 || max_degree < min_degree)
    throw InputError("degree range must satisfy 2 <= min <= max");
  for (std::uint64_t attempt = 0; attempt < 500; ++attempt) {
    const std::uint64_t stream = 1000 + attempt;
    const int span = max_degree - min_degree + 1;
    int d = min_degree +
            std::min<int>(span - 1, static_cast<int>(
                                        sample_u01(seed, stream, index, 0) * span));
    int e = std::min<int>(d - 1,
                          static_cast<int>(sample_u01(seed, stream, index, 1) * d));

    std::vector<cplx> pc(static_cast<std::size_t>(d));  // P, degree d-1
    for (std::size_t k = 0; k < pc.size(); ++k)
      pc[k] = coeff_sample(seed, stream, index, 10 + k);
    std::vector<cplx> qc(static_cast<std::size_t>(e) + 1);
    for (std::size_t k = 0; k < qc.size(); ++k)
      qc[k] = coeff_sample(seed, stream, index, 40 + k);

    try {
      Polynomial p(pc), q(qc);
      cplx p1 = p.eval(1.0), q1 = q.eval(1.0);
      if (std::abs(p1) < 0.1 || std::abs(q1) < 0.1) continue;
      q = q * (p1 / q1);  // forces R(1) = 1

      std::vector<cplx> num_coeffs(pc.size() + 1, 0.0);
      for (std::size_t k = 0; k < pc.size(); ++k) num_coeffs[k + 1] = pc[k];
      RationalMap map{Polynomial(num_coeffs), q};
      if (!map.standard_normalized()) continue;
      CriticalData cd = critical_data(map);
      if (!well_conditioned(map, cd)) continue;
      return map;
    } catch (const Error&) {
      continue;
    }
  }
  throw PreconditionError("random map generation exhausted its attempts");
}

namespace {

std::vector<cplx> probe_exclusions(const RationalMap& map,
                                   const CriticalData& cd) {
  std::vector<cplx> excl = {0.0, 1.0};
  for (cplx p : map.poles()) excl.push_back(p);
  for (cplx c : cd.points) excl.push_back(c);
  for (cplx v : cd.values) excl.push_back(v);
  return excl;
}

double lemma4_trial(std::uint64_t seed, std::uint64_t t) {
  RationalMap map = random_standard_map(seed, t);
  CriticalData cd = critical_data(map);
  std::vector<cplx> excl = probe_exclusions(map, cd);

  const std::uint64_t trial_seed = splitmix64(seed ^ (0x9e3779b97f4a7c15ULL + t));
  cplx base = annulus_probes(1, excl, trial_seed, 0.7, 2.5, 0.1)[0];

  double worst = 0.0;
  for (KernelKind kind : {KernelKind::gamma, KernelKind::tau}) {
    Kernel k(kind, base);
    KernelCombination closed = apply_to_kernel(map, cd, k);
    std::vector<cplx> zexcl = excl;
    zexcl.push_back(base);
    for (cplx p : closed.pole_locations()) zexcl.push_back(p);
    Evaluable f = [k](cplx y) { return k.eval(y); };

    std::size_t good = 0;
    std::uint64_t probe_index = 0;
    while (good < 20 && probe_index < 400) {
      cplx z = sample_annulus(trial_seed, 17, probe_index++, 0.5, 3.0);
      bool excluded = false;
      for (cplx epnt : zexcl)
        if (std::abs(z - epnt) < 0.05) {
          excluded = true;
          break;
        }
      if (excluded) continue;
      try {
        cplx pw = apply_pointwise(map, f, z);
        cplx cl = closed.eval(z);
        worst = std::max(worst,
                         std::abs(cl - pw) / std::max(1.0, std::abs(pw)));
        ++good;
      } catch (const Error&) {
        continue;  // preimage landed on a kernel pole or conditioning guard
      }
    }
    if (good < 20)
      throw PreconditionError("could not collect 20 well-placed probes");
  }
  return worst;
}

SuiteResult suite_lemma4(const SuiteOptions& opts) {
  SuiteResult r;
  r.name = "lemma4";
  r.tolerance = opts.tolerance > 0 ? opts.tolerance : 1e-8;
  r.trials = opts.trials;
  std::vector<double> per_trial(opts.trials, 0.0);
  parallel_for_blocks(opts.trials, 1, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t t = lo; t < hi; ++t)
      per_trial[t] = lemma4_trial(opts.seed, t);
  });
  std::size_t worst_at = 0;
  for (std::size_t t = 0; t < per_trial.size(); ++t)
    if (per_trial[t] > per_trial[worst_at]) worst_at = t;
  r.worst_residual = per_trial.empty() ? 0.0 : per_trial[worst_at];
  r.passed = r.worst_residual < r.tolerance;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "worst trial %zu of %zu", worst_at,
                per_trial.size());
  r.detail = buf;
  return r;
}

SuiteResult suite_prop6(const SuiteOptions& opts) {
  SuiteResult r;
  r.name = "prop6";
  r.tolerance = opts.tolerance > 0 ? opts.tolerance : 1e-8;
  RationalMap map = fixture_g();
  CriticalData cd = critical_data(map);
  const cplx a = cd.values[0];  // -1/3
  std::vector<cplx> excl = probe_exclusions(map, cd);
  excl.push_back(a);
  std::vector<cplx> probes = annulus_probes(4, excl, 0xabcULL, 0.5, 3.0, 0.1);
  probes.insert(probes.begin(), cplx(2.0, 1.0));
  std::vector<double> res =
      column_relation_residuals(map, cd, a, 20, probes, KernelKind::gamma);
  r.trials = res.size();
  r.worst_residual = *std::max_element(res.begin(), res.end());
  r.passed = r.worst_residual < r.tolerance;
  r.detail = "orders 0..20 at 5 probes";
  return r;
}

SuiteResult suite_cor9(const SuiteOptions& opts) {
  SuiteResult r;
  r.name = "cor9";
  r.tolerance = opts.tolerance > 0 ? opts.tolerance : 1e-6;
  RationalMap map = fixture_g();
  CriticalData cd = critical_data(map);
  r.worst_residual = functional_relation_residual(
      map, cd, cd.values[0], 0.9, cplx(2.0, 1.0), 100, KernelKind::gamma);
  r.trials = 1;
  r.passed = r.worst_residual < r.tolerance;
  r.detail = "x = 0.9, z = 2+1i, order 100";
  return r;
}

SuiteResult suite_contraction(const SuiteOptions& opts) {
  SuiteResult r;
  r.name = "contraction";
  r.tolerance = opts.tolerance > 0 ? opts.tolerance : 0.0;  // slack is statistical
  std::size_t trials = std::max<std::size_t>(1, std::min<std::size_t>(opts.trials, 24));
  r.trials = trials;
  r.passed = true;
  double worst_excess = 0.0;
  double worst_ratio = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    RationalMap map = t % 3 == 0 ? fixture_z2()
                     : t % 3 == 1 ? fixture_g()
                                  : fixture_z2_over();
    CriticalData cd = critical_data(map);
    std::vector<cplx> excl = probe_exclusions(map, cd);
    const std::uint64_t trial_seed = splitmix64(opts.seed ^ (0xc0ffee + t));
    cplx base = annulus_probes(1, excl, trial_seed, 1.2, 3.0, 0.2)[0];
    KernelCombination f = KernelCombination::single(1.0, Kernel::gamma(base));
    ContractionCheck chk =
        l1_contraction_check(map, cd, f, opts.samples, trial_seed);
    if (!chk.holds) r.passed = false;
    double slack = 3.0 * std::hypot(chk.sigma_before, chk.sigma_after);
    double excess = (chk.norm_after - chk.norm_before - slack) /
                    std::max(chk.norm_before, 1e-30);
    worst_excess = std::max(worst_excess, excess);
    worst_ratio = std::max(worst_ratio, chk.ratio);
  }
  r.worst_residual = std::max(0.0, worst_excess);
  if (r.tolerance > 0) r.passed = r.passed && r.worst_residual < r.tolerance;
  char buf[96];
  std::snprintf(buf, sizeof(buf), "max ratio %.6f over %zu kernels",
                worst_ratio, trials);
  r.detail = buf;
  return r;
}

SuiteResult suite_mobius(const SuiteOptions& opts) {
  SuiteResult r;
  r.name = "mobius";
  r.tolerance = opts.tolerance > 0 ? opts.tolerance : 1e-9;
  RationalMap map = fixture_g();
  CriticalData cd = critical_data(map);
  const cplx d1 = cd.values[0];
  r.worst_residual =
      mobius_transform_identity(map, d1, 5.0, cplx(2.0, 2.0), 60).residual;
  std::size_t done = 1;
  std::uint64_t index = 0;
  while (done < std::max<std::size_t>(1, opts.trials) && index < 4096) {
    cplx y = sample_annulus(opts.seed, 23, index, 1.5, 3.5);
    cplx z = sample_annulus(opts.seed, 29, index, 0.5, 3.0);
    ++index;
    try {
      double res = mobius_transform_identity(map, d1, y, z, 60).residual;
      r.worst_residual = std::max(r.worst_residual, res);
      ++done;
    } catch (const Error&) {
      continue;  // collision with an orbit point or the transform pole
    }
  }
  r.trials = done;
  r.passed = r.worst_residual < r.tolerance;
  r.detail = "fixture orbit, headline point y=5, z=2+2i";
  return r;
}

}  // namespace

std::vector<std::string> suite_names() {
  return {"lemma4", "prop6", "cor9", "contraction", "mobius"};
}

SuiteResult run_suite(const std::string& name, const SuiteOptions& opts) {
  if (name == "lemma4") return suite_lemma4(opts);
  if (name == "prop6") return suite_prop6(opts);
  if (name == "cor9") return suite_cor9(opts);
  if (name == "contraction") return suite_contraction(opts);
  if (name == "mobius") return suite_mobius(opts);
  throw InputError("unknown suite: " + name);
}

}  // namespace ruelle
