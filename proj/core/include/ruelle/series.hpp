#pragma once

// Orbit-weighted series built from a rational map: the forward series
// sum 1/(R^n)'(R(a)), the modified kernel-weighted series
// A(x, z, R, a) = sum x^n K_{R^n(a)}(z) / (R^n)'(a), the backward
// operator-iterate series RS(x, z, R, a) = sum x^n ((R*)^n K_a)(z),
// summability diagnostics, and the relations tying the three together.

#include <optional>
#include <string>
#include <vector>

#include "ruelle/kernels.hpp"
#include "ruelle/rational_map.hpp"

namespace ruelle {

enum class Verdict { summable_evidence, divergent_evidence, inconclusive };

std::string verdict_name(Verdict v);

struct RatioFit {
  double ratio = 0.0;  // fitted |term| ratio over the trailing window
  double tail = 0.0;   // geometric tail estimate, +inf when ratio >= 1
  Verdict verdict = Verdict::inconclusive;
};

// median consecutive-ratio fit over the last `window` magnitudes; a trailing
// all-zero window means the series terminated: ratio 0, tail 0, summable
RatioFit fit_geometric_tail(const std::vector<double>& magnitudes,
                            std::size_t window = 20,
                            double margin = tol::ratio_margin);

struct SeriesReport {
  std::vector<cplx> terms;
  std::vector<cplx> partial_sums;  // partial_sums[n] = partial_sums[n-1] + terms[n], bitwise
  double tail_estimate = 0.0;
  double fitted_ratio = 0.0;
  Verdict verdict = Verdict::inconclusive;
  bool escape_truncated = false;  // orbit escaped before the requested length

  cplx sum() const { return partial_sums.empty() ? cplx(0.0) : partial_sums.back(); }
  static SeriesReport from_terms(std::vector<cplx> terms, bool escaped = false);
};

// columns: n,term_re,term_im,partial_re,partial_im,|term|
std::string series_csv(const SeriesReport& r);

// terms 1/(R^n)'(R(a)) for n = 0 .. n_terms-1; errors when the orbit of
// R(a) passes through a critical point (cocycle hits zero)
SeriesReport forward_series(const RationalMap& map, cplx a,
                            std::size_t n_terms);

struct SummabilityReport {
  SeriesReport forward;                      // signed terms, sum S
  SeriesReport absolute;                     // |1/(R^n)'(R(a))|
  std::optional<SeriesReport> log_weighted;  // |w||ln|w|| weights, unbounded orbits only
  SeriesReport conjugation_sensitivity;      // (R^n(R(a)))^2 / (R^n)'(R(a))
  bool orbit_unbounded = false;
  Verdict verdict = Verdict::inconclusive;  // absolute, AND log_weighted when unbounded
};

SummabilityReport summability_report(const RationalMap& map, cplx a,
                                     std::size_t n_terms);

struct ModifiedSeries {
  SeriesReport report;  // terms x^n K_{R^n(a)}(z) / (R^n)'(a)
  double weighted_tail = 0.0;  // M-weighted L1 tail heuristic for the dropped part
  std::vector<std::size_t> proximity_flags;  // orbit points within tol::orbit_prox of z
  cplx value() const { return report.sum(); }
};

ModifiedSeries modified_series_eval(const RationalMap& map, cplx a, cplx x,
                                    std::size_t n_terms, cplx z,
                                    KernelKind kind = KernelKind::gamma);

// the same sum kept symbolic: sum_n x^n/(R^n)'(a) * K_{R^n(a)}, repeated
// bases merged, degenerate gamma bases dropped
KernelCombination modified_series_combination(const RationalMap& map, cplx a,
                                              cplx x, std::size_t n_terms,
                                              KernelKind kind = KernelKind::gamma);

struct CriticalSeries {
  SeriesReport report;
  std::vector<std::size_t> proximity_flags;  // orbit approaches the critical point
  bool cap_exceeded = false;  // a flagged term broke the 1/(b (R^{n+1})') sanity cap
  cplx value() const { return report.sum(); }
};

// A(x, c_j, R, a): the modified series evaluated at a critical point.
// Orbit points within 1e-6 of c_j are evaluated directly but flagged, and
// each flagged term is checked against the cap 4 |x|^n / (|b_j| |(R^{n+1})'(a)|).
// gamma kind with c_j on {0, 1} is a genuine pole; use the tau kind there.
CriticalSeries modified_series_at_critical(const RationalMap& map,
                                           const CriticalData& cd,
                                           std::size_t j, cplx a, cplx x,
                                           std::size_t n_terms,
                                           KernelKind kind = KernelKind::gamma);

struct BackwardSeries {
  SeriesReport report;        // term i = x^i ((R*)^i K_a)(z), i = 0 .. max_order
  std::size_t span_size = 0;  // kernel terms held by the last iterate
  cplx value() const { return report.sum(); }
};

BackwardSeries backward_series_eval(const RationalMap& map,
                                    const CriticalData& cd, cplx a, cplx x,
                                    std::size_t max_order, cplx z,
                                    KernelKind kind = KernelKind::gamma);

// c_i = sum_{j<=i} a_j b_{i-j} for i = 0 .. n-1; both inputs must hold at
// least n coefficients
std::vector<cplx> cauchy_product(const std::vector<cplx>& a,
                                 const std::vector<cplx>& b, std::size_t n);

// residual per order n = 0 .. max_order of the column expansion
//   (R*)^n K_a = K_{R^n(a)}/(R^n)'(a)
//              + sum_i b_i sum_{k<n} [K_{R^k(a)}(c_i)/(R^k)'(a)] (R*)^{n-1-k} K_{d_i},
// both sides evaluated at the probe points; residual relative to max(1, |lhs|)
std::vector<double> column_relation_residuals(const RationalMap& map,
                                              const CriticalData& cd, cplx a,
                                              std::size_t max_order,
                                              const std::vector<cplx>& probes,
                                              KernelKind kind = KernelKind::gamma);

// |RS(x,z,a) - A(x,z,a) - x sum_i b_i RS(x,z,d_i) A(x,c_i,a)| with every
// series truncated at max_order; truncation-dominated, O(|x|^N/(1-|x|))
double functional_relation_residual(const RationalMap& map,
                                    const CriticalData& cd, cplx a, cplx x,
                                    cplx z, std::size_t max_order,
                                    KernelKind kind = KernelKind::gamma);

struct OrbitSums {
  SeriesReport a_series;  // sum R^n(d1) / (R^n)'(d1)
  SeriesReport b_series;  // sum 1 / (R^n)'(d1)
};

OrbitSums orbit_sums(const RationalMap& map, cplx d1, std::size_t n_terms);

struct MobiusIdentityResult {
  double residual = 0.0;
  cplx lhs = 0.0;  // f(g(z)) summed directly
  cplx rhs = 0.0;  // ((z+y-1)^2 psi(z) + (1-y-z) B) / (y(y-1))
  bool conditioning_warning = false;  // |y(y-1)| small
};

// the exact per-term algebra behind g_y(z) = yz/(z+y-1):
//   1/(g(z)-g(w)) = [ (z+y-1)^2/(z-w) + (1-y-z) ] / (y(y-1)),
// summed along the orbit of d1 with cocycle weights; holds for any map and
// any truncation up to rounding
MobiusIdentityResult mobius_transform_identity(const RationalMap& map,
                                               cplx d1, cplx y, cplx z,
                                               std::size_t n_terms);

}  // namespace ruelle
