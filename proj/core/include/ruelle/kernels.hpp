#pragma once

// Rational kernel span used by the transfer-operator calculus:
//   gamma_a(z) = a(a-1) / (z(z-1)(z-a))   (integrable, cubic decay)
//   tau_a(z)   = 1 / (z-a)                (locally integrable)
// gamma bases at 0 or 1 denote the identically-zero function. Linear
// combinations keep one term per (kind, base) and drop zero terms.

#include <cstdint>
#include <functional>
#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

enum class KernelKind { gamma, tau };

struct Kernel {
  KernelKind kind = KernelKind::gamma;
  cplx base{0.0};

  static Kernel gamma(cplx a) { return {KernelKind::gamma, a}; }
  static Kernel tau(cplx a) { return {KernelKind::tau, a}; }

  // gamma with base within tol::degenerate_base of 0 or 1: the zero function
  bool degenerate() const;
  // throws PoleError within tol::pole_eval of a pole; degenerate -> 0
  cplx eval(cplx z) const;
  // no pole guard; used by the Monte-Carlo integrator near strata centers
  cplx eval_unchecked(cplx z) const;
  // finite poles: gamma {0, 1, base}, tau {base}; empty when degenerate
  std::vector<cplx> pole_locations() const;
};

// gamma_a = (a-1) tau_0 + (-a) tau_1 + 1 tau_a
struct GammaDecomposition {
  cplx coeff_tau0;
  cplx coeff_tau1;
  cplx coeff_tau_a;
};
GammaDecomposition gamma_decompose(cplx a);

struct KernelTerm {
  cplx coeff{0.0};
  Kernel kernel;
};

class KernelCombination {
 public:
  KernelCombination() = default;
  static KernelCombination single(cplx coeff, Kernel k);

  // merges on (kind, base); drops degenerate kernels and zero coefficients
  void add_term(cplx coeff, Kernel k);
  void add(const KernelCombination& other, cplx scale = cplx{1.0});

  const std::vector<KernelTerm>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }

  cplx eval(cplx z) const;
  std::function<cplx(cplx)> as_evaluable() const;

  KernelCombination operator*(cplx scale) const;
  KernelCombination operator+(const KernelCombination& rhs) const;

  // distinct finite poles over all terms
  std::vector<cplx> pole_locations() const;
  double coeff_scale() const;

 private:
  std::vector<KernelTerm> terms_;
};

// ---- L1 norms ----------------------------------------------------------------

struct NormEstimate {
  double value = 0.0;
  double sigma = 0.0;      // statistical standard error of `value`
  bool divergent = false;  // far-field moments force an infinite norm
};

// Monte-Carlo estimate of the planar L1 norm of f, stratified: polar
// refinement inside a disk around each pole, uniform bulk, inverted polar
// far field. Deterministic for a fixed seed regardless of thread count.
// Combinations whose tau far-field moments do not cancel have infinite norm
// and come back flagged divergent.
NormEstimate l1_norm_estimate(const KernelCombination& f,
                              std::size_t samples = 100000,
                              std::uint64_t seed = 1);

// same integrator for an arbitrary integrand with known finite poles and
// cubic-or-faster decay at infinity
NormEstimate l1_norm_estimate_fn(const std::function<cplx(cplx)>& f,
                                 const std::vector<cplx>& poles,
                                 std::size_t samples, std::uint64_t seed);

// Empirical constant M with ||gamma_a||_1 <= M |a| ln|a| over |a| in [2, 50],
// fitted once per process from the Monte-Carlo integrator (fixed internal
// seed, cached). The asymptotic shape only holds away from |a| = 1, so the
// constant is fitted and reported, never asserted as a global bound.
double fitted_gamma_norm_constant();

}  // namespace ruelle
