#pragma once

// Structural-instability diagnostics for a map with summable critical
// orbits: the relation coefficients C_j = A(1, c_j, R, d_{i0}), the
// triviality test C_{i0} = 1/b_{i0} with all other C_j = 0, certificates
// with explicit margins, the fixed-point identity of the kernel series,
// the per-critical-point linear system with rank reporting, and line-field
// residual diagnostics.

#include <string>
#include <vector>

#include "ruelle/series.hpp"

namespace ruelle {

enum class Certificate { unstable_certified, trivial_relation, inconclusive };

std::string certificate_name(Certificate c);

struct RelationCoefficients {
  std::vector<cplx> c;         // C_j per finite critical point j
  std::vector<double> tails;   // series tail estimate per coefficient
  std::size_t i0 = 0;          // critical point whose relation is tested
  KernelKind kind = KernelKind::gamma;
};

// requires summable-evidence at c_{i0}; throws PreconditionError otherwise
RelationCoefficients relation_coefficients(const RationalMap& map,
                                           const CriticalData& cd,
                                           std::size_t i0,
                                           std::size_t n_terms,
                                           KernelKind kind = KernelKind::gamma);

struct TrivialityResult {
  bool trivial = false;
  double margin_c1 = 0.0;    // |C_{i0} - 1/b_{i0}|
  double margin_rest = 0.0;  // max over j != i0 of |C_j|
  bool margin_warning = false;  // a margin within a decade of the tolerance
  double tol_used = 0.0;
};

// verdict from precomputed coefficients (tests inject synthetic values here)
TrivialityResult triviality_from_coefficients(const std::vector<cplx>& c,
                                              std::size_t i0, cplx b_i0,
                                              double tol);

TrivialityResult triviality_test(const RationalMap& map,
                                 const CriticalData& cd, std::size_t i0,
                                 std::size_t n_terms, double tol,
                                 KernelKind kind = KernelKind::gamma);

struct StabilityReport {
  std::size_t i0 = 0;
  Verdict summability = Verdict::inconclusive;
  cplx s_value = 0.0;  // S = sum 1/(R^n)'(R(c_{i0}))
  double s_tail = 0.0;
  std::vector<cplx> coefficients;  // C_j
  std::vector<cplx> bc_products;   // b_j C_j
  std::vector<double> coefficient_tails;
  TrivialityResult triviality;
  cplx a_value = 0.0;  // sum R^n(d)/(R^n)'(d), zero when the relation is trivial
  cplx b_value = 0.0;  // sum 1/(R^n)'(d), likewise
  double a_tail = 0.0;
  double b_tail = 0.0;
  Certificate certificate = Certificate::inconclusive;
  std::string certificate_reason;
  bool internal_inconsistency = false;  // trivial verdict but A or B far from 0
  double tol_used = 0.0;
  KernelKind kind = KernelKind::gamma;
};

// certificate logic on raw numbers; instability_certificate feeds it the
// computed series and tests feed it synthetic parts
StabilityReport certificate_from_parts(cplx s_value, double s_tail,
                                       const std::vector<cplx>& coefficients,
                                       const std::vector<double>& tails,
                                       std::size_t i0,
                                       const std::vector<cplx>& residues,
                                       cplx a_value, double a_tail,
                                       cplx b_value, double b_tail,
                                       double tol);

// unstable-certified when |S| beats its tail bound by 10x, or the relation
// is non-trivial with margin >= 10x tol; trivial relations are cross-checked
// against A = B = 0
StabilityReport instability_certificate(const RationalMap& map,
                                        const CriticalData& cd,
                                        std::size_t i0, std::size_t n_terms,
                                        double tol = 1e-8,
                                        KernelKind kind = KernelKind::gamma);

// max over probes of |R*(phi_N)(z) - (phi_N(z) - K_{d}(z) + sum_i b_i C_i^{(N)} K_{d_i}(z))|
// with phi_N the order-N modified-series combination at d = cd.values[i0];
// tail-dominated, exact as N grows
double fixed_point_identity_residual(const RationalMap& map,
                                     const CriticalData& cd, std::size_t i0,
                                     std::size_t n_terms,
                                     const std::vector<cplx>& probes,
                                     KernelKind kind = KernelKind::gamma);

struct LinearRelationSystem {
  std::vector<std::vector<cplx>> matrix;  // rows per summable point, columns per critical point
  std::vector<std::size_t> row_points;
  int rank = 0;
  int dimension_bound = 0;  // (2 deg - 2) - rank
  std::vector<double> singular_values;
  // coefficients B with sum_r B_r row_r ~ 0, one per singular value under threshold
  std::vector<std::vector<cplx>> null_combinations;
  double rank_tol = 0.0;
};

// rank of a dense complex matrix by singular values above rank_tol * sigma_max
int matrix_rank(const std::vector<std::vector<cplx>>& m,
                double rank_tol = tol::rank_rel);

// row r (summable point i): entry_j = delta_{ij} - b_j A(1, c_j, R, d_i)
LinearRelationSystem build_linear_system(const RationalMap& map,
                                         const CriticalData& cd,
                                         const std::vector<std::size_t>& summable_indices,
                                         std::size_t n_terms,
                                         KernelKind kind = KernelKind::gamma,
                                         double rank_tol = tol::rank_rel);

struct LineFieldResidual {
  double modulus_residual = 0.0;   // max | |R*|(|phi|)(z) - |phi(z)| |
  double beltrami_residual = 0.0;  // max | B_R(mu)(z) - mu(z) |, mu = conj(phi)/|phi|
  std::size_t skipped_probes = 0;  // probes with |phi| <= 1e-10
};

// reported, not asserted: the residuals vanish only for a genuine fixed point
LineFieldResidual line_field_residual(const RationalMap& map,
                                      const KernelCombination& phi,
                                      const std::vector<cplx>& probes);

}  // namespace ruelle
