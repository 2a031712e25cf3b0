#pragma once

// Rational maps on the Riemann sphere: evaluation, derivatives, fixed points,
// preimage solving, orbit cocycles, critical-point data with the partial
// fraction decomposition of 1/R', and conjugation to the (0,1,inf) frame.

#include <optional>
#include <vector>

#include "ruelle/mobius.hpp"
#include "ruelle/polynomial.hpp"

namespace ruelle {

class RationalMap {
 public:
  // R = num/den. Requires degree >= 1, a nonzero denominator, and coprime
  // parts (no shared root within tolerance); throws InputError otherwise.
  RationalMap(Polynomial num, Polynomial den);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  // topological degree max(deg num, deg den)
  int degree() const { return degree_; }
  // numerator of R' over den^2
  const Polynomial& derivative_num() const { return deriv_num_; }
  // finite poles (roots of den), empty for polynomial maps
  const std::vector<cplx>& poles() const { return poles_; }

  // true when R(0)=0, R(1)=1 within 1e-12 and deg num > deg den
  bool standard_normalized() const { return standard_; }

  cplx eval(cplx z) const;               // throws PoleError at poles
  cplx derivative_at(cplx z) const;      // R'(z)
  cplx second_derivative_at(cplx z) const;

  // finite fixed points (roots of num - z*den); infinity is fixed iff
  // deg num > deg den
  std::vector<cplx> fixed_points() const;
  bool fixes_infinity() const { return num_.degree() > den_.degree(); }

 private:
  Polynomial num_, den_;
  Polynomial deriv_num_;   // P'Q - PQ'
  Polynomial second_num_;  // N'Q - 2NQ' with N = deriv_num_ (over den^3)
  std::vector<cplx> poles_;
  int degree_ = 0;
  bool standard_ = false;
};

// ---- preimages --------------------------------------------------------------

struct PreimageResult {
  std::vector<cplx> points;
  // per-point flag: |R'(y)| < tol, the preimage branch is ill-conditioned
  std::vector<bool> ill_conditioned;
  // set when some branch is ill-conditioned, i.e. z is (numerically) a
  // critical value and preimages collide
  bool multiplicity_warning = false;
};

// all degree() preimages of z, with conditioning flags
PreimageResult preimages(const RationalMap& map, cplx z,
                         double cond_tol = tol::preimage_cond);

// ---- orbits -----------------------------------------------------------------

struct OrbitCocycle {
  // points[k] = R^k(z0); cocycle[k] = (R^k)'(z0), cocycle[0] = 1
  std::vector<cplx> points;
  std::vector<cplx> cocycle;
  // orbit left the escape guard (or the cocycle overflowed); points/cocycle
  // are truncated at the last finite entry
  bool escaped = false;
};

// iterates z0 for up to n steps; escape guard min(1e150, 10^(290/deg))
OrbitCocycle orbit_cocycle(const RationalMap& map, cplx z0, int n);

// ---- critical data ----------------------------------------------------------

// Finite critical points with the decomposition
//   1/R'(z) = omega + sum_i b_i / (z - c_i),
// where b_i = 1/R''(c_i) and omega = lim 1/R'(z) at infinity. Requires all
// critical points simple and none at a pole; validated against 20 probe
// points on construction.
struct CriticalData {
  std::vector<cplx> points;  // c_i, sorted by (re, im)
  std::vector<cplx> values;  // d_i = R(c_i)
  std::vector<cplx> b;       // 1/R''(c_i)
  cplx omega{0.0};
  double max_decomposition_residual = 0.0;

  std::size_t size() const { return points.size(); }
  // 1/R'(z) rebuilt from the decomposition
  cplx inv_derivative(cplx z) const;
  // h_i(z) = 1/R'(z) - b_i/(z - c_i), finite at c_i
  cplx h(std::size_t i, cplx z) const;
};

// throws NonSimpleCriticalError / PreconditionError when the decomposition
// hypotheses fail; requires deg num >= deg den + 1
CriticalData critical_data(const RationalMap& map);

// ---- normalization ----------------------------------------------------------

struct NormalizationResult {
  RationalMap map;          // h . R . h^{-1}, standard-normalized
  MobiusTransform change;   // h
};

// Conjugates map by the Moebius transform sending the given fixed-point
// triple to (0, 1, inf). Each triple point must be fixed by the map within
// tolerance (infinity requires deg num > deg den); throws PreconditionError
// otherwise.
NormalizationResult normalize_to_standard(const RationalMap& map,
                                          SpherePoint p0, SpherePoint p1,
                                          SpherePoint p2);

}  // namespace ruelle
