#pragma once

// Dense complex polynomial with ascending coefficients. Construction trims
// negligible leading coefficients so degree() is meaningful after arithmetic.

#include <vector>

#include "ruelle/common.hpp"

namespace ruelle {

class Polynomial {
 public:
  Polynomial() = default;
  // coefficients ascending: c[0] + c[1] z + ... ; trailing entries whose
  // magnitude is below 1e-14 * max|c| are trimmed
  explicit Polynomial(std::vector<cplx> coeffs);
  static Polynomial zero() { return Polynomial{}; }
  static Polynomial constant(cplx c) { return Polynomial({c}); }

  bool is_zero() const { return coeffs_.empty(); }
  // degree of the zero polynomial is reported as -1
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<cplx>& coeffs() const { return coeffs_; }
  cplx coeff(std::size_t k) const {
    return k < coeffs_.size() ? coeffs_[k] : cplx{0.0};
  }
  cplx leading() const { return coeffs_.empty() ? cplx{0.0} : coeffs_.back(); }

  cplx eval(cplx z) const;             // Horner
  cplx eval_derivative(cplx z) const;  // Horner on p'
  Polynomial derivative() const;

  Polynomial operator+(const Polynomial& rhs) const;
  Polynomial operator-(const Polynomial& rhs) const;
  Polynomial operator*(const Polynomial& rhs) const;
  Polynomial operator*(cplx scale) const;

  // largest coefficient magnitude; 0 for the zero polynomial
  double coeff_scale() const;

 private:
  std::vector<cplx> coeffs_;
};

// Aberth-Ehrlich simultaneous iteration with a Newton polish, capped at 200
// rounds with perturbation restarts on stagnation. Accepts roots once
// |p(root)| <= tol * coeff_scale * max(1,|root|)^deg; throws ConvergenceError
// (carrying the best residual) otherwise. Robust for degree <= ~50.
std::vector<cplx> poly_roots(const Polynomial& p,
                             double tol = tol::root_residual);

}  // namespace ruelle
