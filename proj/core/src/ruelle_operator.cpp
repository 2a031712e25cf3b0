#include "ruelle/ruelle_operator.hpp"

#include <cmath>
#include <cstdio>

namespace ruelle {

cplx apply_pointwise(const RationalMap& map, const Evaluable& f, cplx z) {
  PreimageResult pre = preimages(map, z);
  KahanSum acc;
  for (cplx y : pre.points) {
    cplx dy = map.derivative_at(y);
    if (std::abs(dy) < tol::hard_cond) {
      char buf[128];
      std::snprintf(buf, sizeof(buf),
                    "preimage with |R'| = %.3e below %.1e; z is numerically "
                    "a critical value",
                    std::abs(dy), tol::hard_cond);
      throw PreconditionError(buf);
    }
    acc.add(f(y) / (dy * dy));
  }
  return acc.value();
}

double modulus_apply_pointwise(const RationalMap& map, const Evaluable& f,
                               cplx z) {
  PreimageResult pre = preimages(map, z);
  KahanSumReal acc;
  for (cplx y : pre.points) {
    cplx dy = map.derivative_at(y);
    if (std::abs(dy) < tol::hard_cond)
      throw PreconditionError("preimage at critical point in modulus sum");
    acc.add(std::abs(f(y)) / std::norm(dy));
  }
  return acc.value();
}

cplx pushforward_at(const RationalMap& map, const Evaluable& f, cplx z) {
  cplx d = map.derivative_at(z);
  return f(map.eval(z)) * d * d / static_cast<double>(map.degree());
}

cplx beltrami_apply(const RationalMap& map, const Evaluable& mu, cplx z) {
  cplx d = map.derivative_at(z);
  if (std::abs(d) < 1e-14)
    throw PreconditionError("Beltrami pullback at a critical point");
  return mu(map.eval(z)) * std::conj(d) / d;
}

cplx critical_kernel_coefficient(const RationalMap& map,
                                 const CriticalData& cd, std::size_t i,
                                 KernelKind kind) {
  if (i >= cd.points.size()) throw InputError("critical index out of range");
  cplx c = cd.points[i];
  cplx h = cd.h(i, c);
  if (kind == KernelKind::tau) return h;
  // gamma kernel at a critical base: the finite part of
  // 1/R'(a) + b_i gamma_a(c_i) as a -> c_i
  if (std::abs(c) < tol::degenerate_base ||
      std::abs(c - 1.0) < tol::degenerate_base)
    throw DegenerateKernelError(
        "gamma kernel degenerates at a critical point on {0, 1}");
  (void)map;
  return h + cd.b[i] * (1.0 - 2.0 * c) / (c * (c - 1.0));
}

namespace {

// index of the critical point within dispatch radius of a, or npos
std::size_t critical_index_near(const CriticalData& cd, cplx a) {
  for (std::size_t i = 0; i < cd.points.size(); ++i)
    if (std::abs(a - cd.points[i]) < tol::critical_dispatch) return i;
  return static_cast<std::size_t>(-1);
}

}  // namespace

KernelCombination apply_to_kernel(const RationalMap& map,
                                  const CriticalData& cd, Kernel k) {
  KernelCombination out;
  if (k.degenerate()) return out;
  const cplx a = k.base;
  const std::size_t ci = critical_index_near(cd, a);
  const bool critical_base = ci != static_cast<std::size_t>(-1);

  // principal term K_{R(a)} / R'(a), replaced at a critical base by the
  // finite-limit coefficient times K_{R(c_i)}
  if (critical_base) {
    cplx v = cd.values[ci];
    Kernel image(k.kind, v);
    cplx coeff = critical_kernel_coefficient(map, cd, ci, k.kind);
    if (!image.degenerate()) out.add_term(coeff, image);
  } else {
    cplx ra = map.eval(a);
    cplx da = map.derivative_at(a);
    Kernel image(k.kind, ra);
    if (!image.degenerate()) out.add_term(1.0 / da, image);
  }

  // critical-value terms b_j K_a(c_j) K_{R(c_j)}; a term whose output
  // kernel degenerates is dropped before K_a(c_j) is touched, so a pole of
  // the input kernel there is harmless
  for (std::size_t j = 0; j < cd.points.size(); ++j) {
    if (critical_base && j == ci) continue;  // folded into the limit term
    Kernel image(k.kind, cd.values[j]);
    if (image.degenerate()) continue;
    cplx scalar = k.eval(cd.points[j]);  // PoleError here is genuine
    out.add_term(cd.b[j] * scalar, image);
  }
  return out;
}

KernelCombination apply_to_combination(const RationalMap& map,
                                       const CriticalData& cd,
                                       const KernelCombination& f) {
  KernelCombination out;
  for (const KernelTerm& t : f.terms())
    out.add(apply_to_kernel(map, cd, t.kernel), t.coeff);
  return out;
}

ContractionCheck l1_contraction_check(const RationalMap& map,
                                      const CriticalData& cd,
                                      const KernelCombination& f,
                                      std::size_t samples,
                                      std::uint64_t seed) {
  ContractionCheck r;
  NormEstimate before = l1_norm_estimate(f, samples, seed);
  KernelCombination g = apply_to_combination(map, cd, f);
  NormEstimate after = l1_norm_estimate(g, samples, seed + 1);
  r.norm_before = before.value;
  r.norm_after = after.value;
  r.sigma_before = before.sigma;
  r.sigma_after = after.sigma;
  if (before.divergent) {
    // no finite contraction statement to test
    r.ratio = 1.0;
    r.holds = true;
    return r;
  }
  r.ratio = before.value > 0 ? after.value / before.value : 1.0;
  double slack = 3.0 * std::sqrt(before.sigma * before.sigma +
                                 after.sigma * after.sigma);
  r.holds = after.value <= before.value + slack;
  return r;
}

std::vector<cplx> annulus_probes(std::size_t count,
                                 const std::vector<cplx>& exclusions,
                                 std::uint64_t seed, double r_lo, double r_hi,
                                 double excl_radius) {
  std::vector<cplx> probes;
  probes.reserve(count);
  std::uint64_t index = 0;
  while (probes.size() < count) {
    cplx z = sample_annulus(seed, 11, index++, r_lo, r_hi);
    bool ok = true;
    for (cplx e : exclusions)
      if (std::abs(z - e) < excl_radius) {
        ok = false;
        break;
      }
    if (ok) probes.push_back(z);
    if (index > 1000 * (count + 1))
      throw PreconditionError("annulus probe rejection rate too high");
  }
  return probes;
}

}  // namespace ruelle
