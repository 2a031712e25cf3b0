#include "ruelle/stability.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

#include "ruelle/ruelle_operator.hpp"

namespace ruelle {

std::string certificate_name(Certificate c) {
  switch (c) {
    case Certificate::unstable_certified: return "unstable-certified";
    case Certificate::trivial_relation: return "trivial-relation";
    default: return "inconclusive";
  }
}

namespace {

void require_summable(const RationalMap& map, cplx c, std::size_t n_terms) {
  SummabilityReport rep = summability_report(map, c, n_terms);
  if (rep.verdict != Verdict::summable_evidence)
    throw PreconditionError("critical point lacks summable-evidence (" +
                            verdict_name(rep.verdict) +
                            "); coefficients undefined");
}

}  // namespace

RelationCoefficients relation_coefficients(const RationalMap& map,
                                           const CriticalData& cd,
                                           std::size_t i0,
                                           std::size_t n_terms,
                                           KernelKind kind) {
  if (i0 >= cd.points.size()) throw InputError("critical index out of range");
  require_summable(map, cd.points[i0], n_terms);
  const cplx d = cd.values[i0];
  RelationCoefficients out;
  out.i0 = i0;
  out.kind = kind;
  for (std::size_t j = 0; j < cd.points.size(); ++j) {
    CriticalSeries s = modified_series_at_critical(map, cd, j, d, 1.0, n_terms, kind);
    out.c.push_back(s.value());
    out.tails.push_back(s.report.tail_estimate);
  }
  return out;
}

TrivialityResult triviality_from_coefficients(const std::vector<cplx>& c,
                                              std::size_t i0, cplx b_i0,
                                              double tol) {
  if (i0 >= c.size()) throw InputError("critical index out of range");
  TrivialityResult r;
  r.tol_used = tol;
  r.margin_c1 = std::abs(c[i0] - 1.0 / b_i0);
  for (std::size_t j = 0; j < c.size(); ++j)
    if (j != i0) r.margin_rest = std::max(r.margin_rest, std::abs(c[j]));
  r.trivial = r.margin_c1 < tol && r.margin_rest < tol;
  auto near_threshold = [&](double m) {
    return m > tol / 10.0 && m < tol * 10.0;
  };
  r.margin_warning = near_threshold(r.margin_c1) || near_threshold(r.margin_rest);
  return r;
}

TrivialityResult triviality_test(const RationalMap& map,
                                 const CriticalData& cd, std::size_t i0,
                                 std::size_t n_terms, double tol,
                                 KernelKind kind) {
  RelationCoefficients rc = relation_coefficients(map, cd, i0, n_terms, kind);
  return triviality_from_coefficients(rc.c, i0, cd.b[i0], tol);
}

StabilityReport certificate_from_parts(cplx s_value, double s_tail,
                                       const std::vector<cplx>& coefficients,
                                       const std::vector<double>& tails,
                                       std::size_t i0,
                                       const std::vector<cplx>& residues,
                                       cplx a_value, double a_tail,
                                       cplx b_value, double b_tail,
                                       double tol) {
  StabilityReport rep;
  rep.i0 = i0;
  rep.summability = Verdict::summable_evidence;
  rep.s_value = s_value;
  rep.s_tail = s_tail;
  rep.coefficients = coefficients;
  rep.coefficient_tails = tails;
  for (std::size_t j = 0; j < coefficients.size(); ++j)
    rep.bc_products.push_back(residues[j] * coefficients[j]);
  rep.triviality = triviality_from_coefficients(coefficients, i0, residues[i0], tol);
  rep.a_value = a_value;
  rep.a_tail = a_tail;
  rep.b_value = b_value;
  rep.b_tail = b_tail;
  rep.tol_used = tol;

  const bool s_route = std::abs(s_value) > 10.0 * s_tail + 1e-13;
  const bool relation_route =
      !rep.triviality.trivial &&
      std::max(rep.triviality.margin_c1, rep.triviality.margin_rest) >= 10.0 * tol;
  if (s_route || relation_route) {
    rep.certificate = Certificate::unstable_certified;
    if (s_route && relation_route)
      rep.certificate_reason = "forward sum away from zero; relation non-trivial";
    else if (s_route)
      rep.certificate_reason = "forward sum away from zero beyond 10x tail";
    else
      rep.certificate_reason = "relation non-trivial with margin beyond 10x tol";
  } else if (rep.triviality.trivial) {
    rep.certificate = Certificate::trivial_relation;
    rep.certificate_reason = "coefficients match the trivial relation";
    // a trivial relation forces both orbit sums to vanish
    if (std::abs(a_value) > 10.0 * a_tail + tol ||
        std::abs(b_value) > 10.0 * b_tail + tol) {
      rep.internal_inconsistency = true;
      rep.certificate_reason += "; orbit sums violate A = B = 0";
    }
  } else {
    rep.certificate = Certificate::inconclusive;
    rep.certificate_reason = "margins too small to certify either way";
  }
  return rep;
}

StabilityReport instability_certificate(const RationalMap& map,
                                        const CriticalData& cd,
                                        std::size_t i0, std::size_t n_terms,
                                        double tol, KernelKind kind) {
  if (i0 >= cd.points.size()) throw InputError("critical index out of range");
  SummabilityReport sum_rep = summability_report(map, cd.points[i0], n_terms);
  if (sum_rep.verdict != Verdict::summable_evidence) {
    StabilityReport rep;
    rep.i0 = i0;
    rep.summability = sum_rep.verdict;
    rep.s_value = sum_rep.forward.sum();
    rep.s_tail = sum_rep.forward.tail_estimate;
    rep.certificate = Certificate::inconclusive;
    rep.certificate_reason =
        "summability not established (" + verdict_name(sum_rep.verdict) + ")";
    rep.tol_used = tol;
    rep.kind = kind;
    return rep;
  }

  RelationCoefficients rc = relation_coefficients(map, cd, i0, n_terms, kind);
  OrbitSums os = orbit_sums(map, cd.values[i0], n_terms);
  StabilityReport rep = certificate_from_parts(
      sum_rep.forward.sum(), sum_rep.forward.tail_estimate, rc.c, rc.tails, i0,
      cd.b, os.a_series.sum(), os.a_series.tail_estimate, os.b_series.sum(),
      os.b_series.tail_estimate, tol);
  rep.kind = kind;
  return rep;
}

double fixed_point_identity_residual(const RationalMap& map,
                                     const CriticalData& cd, std::size_t i0,
                                     std::size_t n_terms,
                                     const std::vector<cplx>& probes,
                                     KernelKind kind) {
  if (i0 >= cd.points.size()) throw InputError("critical index out of range");
  const cplx d1 = cd.values[i0];
  KernelCombination phi = modified_series_combination(map, d1, 1.0, n_terms, kind);
  KernelCombination lhs = apply_to_combination(map, cd, phi);

  KernelCombination rhs = phi;
  rhs.add_term(-1.0, Kernel(kind, d1));
  for (std::size_t i = 0; i < cd.points.size(); ++i) {
    cplx ci = modified_series_at_critical(map, cd, i, d1, 1.0, n_terms, kind).value();
    rhs.add_term(cd.b[i] * ci, Kernel(kind, cd.values[i]));
  }

  double worst = 0.0;
  for (cplx z : probes)
    worst = std::max(worst, std::abs(lhs.eval(z) - rhs.eval(z)));
  return worst;
}

namespace {

Eigen::MatrixXcd to_eigen(const std::vector<std::vector<cplx>>& m) {
  std::size_t rows = m.size();
  std::size_t cols = rows ? m[0].size() : 0;
  Eigen::MatrixXcd mat(rows, cols);
  for (std::size_t i = 0; i < rows; ++i) {
    if (m[i].size() != cols)
      throw InputError("ragged matrix");
    for (std::size_t j = 0; j < cols; ++j) mat(i, j) = m[i][j];
  }
  return mat;
}

}  // namespace

int matrix_rank(const std::vector<std::vector<cplx>>& m, double rank_tol) {
  if (m.empty() || m[0].empty()) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(m));
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) > rank_tol * sv(0)) ++rank;
  return rank;
}

LinearRelationSystem build_linear_system(
    const RationalMap& map, const CriticalData& cd,
    const std::vector<std::size_t>& summable_indices, std::size_t n_terms,
    KernelKind kind, double rank_tol) {
  const std::size_t m = cd.points.size();
  LinearRelationSystem sys;
  sys.rank_tol = rank_tol;
  sys.row_points = summable_indices;
  for (std::size_t idx : summable_indices) {
    if (idx >= m) throw InputError("critical index out of range");
    require_summable(map, cd.points[idx], n_terms);
    const cplx d = cd.values[idx];
    std::vector<cplx> row(m);
    for (std::size_t j = 0; j < m; ++j) {
      cplx a_cj = modified_series_at_critical(map, cd, j, d, 1.0, n_terms, kind).value();
      row[j] = (j == idx ? 1.0 : 0.0) - cd.b[j] * a_cj;
    }
    sys.matrix.push_back(std::move(row));
  }

  if (!sys.matrix.empty()) {
    Eigen::MatrixXcd mat = to_eigen(sys.matrix);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeFullU);
    const auto& sv = svd.singularValues();
    for (Eigen::Index k = 0; k < sv.size(); ++k)
      sys.singular_values.push_back(sv(k));
    double smax = sys.singular_values.empty() ? 0.0 : sys.singular_values[0];
    for (double s : sys.singular_values)
      if (smax > 0.0 && s > rank_tol * smax) ++sys.rank;
    // rows of U^H beyond the rank give vanishing combinations of matrix rows
    const Eigen::MatrixXcd& u = svd.matrixU();
    for (Eigen::Index k = sys.rank; k < u.cols(); ++k) {
      std::vector<cplx> combo;
      for (Eigen::Index r = 0; r < u.rows(); ++r)
        combo.push_back(std::conj(u(r, k)));
      sys.null_combinations.push_back(std::move(combo));
    }
  }
  sys.dimension_bound = 2 * static_cast<int>(map.degree()) - 2 - sys.rank;
  return sys;
}

LineFieldResidual line_field_residual(const RationalMap& map,
                                      const KernelCombination& phi,
                                      const std::vector<cplx>& probes) {
  LineFieldResidual out;
  Evaluable phi_eval = phi.as_evaluable();
  Evaluable mu = [phi_eval](cplx w) -> cplx {
    cplx v = phi_eval(w);
    double m = std::abs(v);
    if (m < 1e-300) return 0.0;
    return std::conj(v) / m;
  };
  for (cplx z : probes) {
    cplx pz = phi.eval(z);
    if (std::abs(pz) <= 1e-10) {
      ++out.skipped_probes;
      continue;
    }
    double mod = modulus_apply_pointwise(map, phi_eval, z);
    out.modulus_residual =
        std::max(out.modulus_residual, std::abs(mod - std::abs(pz)));
    cplx bz = beltrami_apply(map, mu, z);
    out.beltrami_residual =
        std::max(out.beltrami_residual, std::abs(bz - mu(z)));
  }
  return out;
}

}  // namespace ruelle
