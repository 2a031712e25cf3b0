#pragma once

// The weight-2 transfer (Ruelle) operator of a rational map R,
//   (R* f)(z) = sum_{R(y)=z} f(y) / R'(y)^2,
// its closed form on the gamma/tau kernel span, the pushforward right
// inverse, the modulus variant, and the Beltrami pullback on line fields.

#include <cstdint>
#include <functional>

#include "ruelle/kernels.hpp"
#include "ruelle/rational_map.hpp"

namespace ruelle {

using Evaluable = std::function<cplx(cplx)>;

// direct preimage-sum evaluation; throws PreconditionError when a preimage
// has |R'(y)| < tol::hard_cond (z numerically a critical value)
cplx apply_pointwise(const RationalMap& map, const Evaluable& f, cplx z);

// |R*|: sum of |f(y)| / |R'(y)|^2 over preimages
double modulus_apply_pointwise(const RationalMap& map, const Evaluable& f,
                               cplx z);

// pushforward density (R_* f)(z) = f(R(z)) R'(z)^2 / deg(R); right inverse
// of the transfer operator
cplx pushforward_at(const RationalMap& map, const Evaluable& f, cplx z);

// Beltrami pullback (B_R mu)(z) = mu(R(z)) conj(R'(z)) / R'(z);
// |B_R mu| = |mu . R| pointwise. Throws at critical points.
cplx beltrami_apply(const RationalMap& map, const Evaluable& mu, cplx z);

// Closed form of R* on a single kernel. Non-critical base a:
//   R*(K_a) = K_{R(a)} / R'(a) + sum_i b_i K_a(c_i) K_{R(c_i)},
// where K is gamma or tau. A base within tol::critical_dispatch of a
// critical point dispatches to the critical-base form whose leading
// coefficient is critical_kernel_coefficient. gamma terms whose output base
// lands on 0/1 are dropped before their scalar factor is evaluated.
KernelCombination apply_to_kernel(const RationalMap& map,
                                  const CriticalData& cd, Kernel k);

// leading coefficient of R*(K_{c_i}) at base c_i:
//   tau:   h_i(c_i)
//   gamma: h_i(c_i) + b_i (1 - 2c_i) / (c_i (c_i - 1))
//        = lim_{a->c_i} ( 1/R'(a) + b_i gamma_a(c_i) )
// gamma kind throws DegenerateKernelError when c_i is 0 or 1.
cplx critical_kernel_coefficient(const RationalMap& map,
                                 const CriticalData& cd, std::size_t i,
                                 KernelKind kind);

// term-by-term closed form, merged
KernelCombination apply_to_combination(const RationalMap& map,
                                       const CriticalData& cd,
                                       const KernelCombination& f);

struct ContractionCheck {
  double norm_before = 0.0;
  double norm_after = 0.0;
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  double ratio = 1.0;  // norm_after / norm_before, 1 when both vanish
  bool holds = true;   // norm_after <= norm_before + 3 sigma (combined)
};

// Monte-Carlo check of ||R* f||_1 <= ||f||_1 on a kernel combination
ContractionCheck l1_contraction_check(const RationalMap& map,
                                      const CriticalData& cd,
                                      const KernelCombination& f,
                                      std::size_t samples = 200000,
                                      std::uint64_t seed = 1);

// deterministic probe points in the annulus r_lo <= |z| <= r_hi, kept at
// least excl_radius away from every exclusion point
std::vector<cplx> annulus_probes(std::size_t count,
                                 const std::vector<cplx>& exclusions,
                                 std::uint64_t seed = 42, double r_lo = 0.5,
                                 double r_hi = 3.0, double excl_radius = 0.05);

}  // namespace ruelle
