#include "ruelle/rational_map.hpp"

#include <algorithm>
#include <cmath>

namespace ruelle {
namespace {

// deterministic probe points for decomposition validation
std::vector<cplx> decomposition_probes(const CriticalData& cd,
                                       const std::vector<cplx>& poles,
                                       int count) {
  std::vector<cplx> out;
  const std::uint64_t seed = 0x5eedc0de5eedc0deull;
  std::uint64_t idx = 0;
  while (static_cast<int>(out.size()) < count && idx < 4000) {
    const cplx z = sample_annulus(seed, 7, idx++, 0.5, 3.0);
    bool ok = true;
    for (const cplx& c : cd.points)
      if (std::abs(z - c) < 0.3) ok = false;
    for (const cplx& p : poles)
      if (std::abs(z - p) < 0.3) ok = false;
    if (ok) out.push_back(z);
  }
  return out;
}

}  // namespace

RationalMap::RationalMap(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw InputError("RationalMap: zero denominator");
  if (num_.is_zero()) throw InputError("RationalMap: zero numerator");
  degree_ = std::max(num_.degree(), den_.degree());
  if (degree_ < 1)
    throw InputError("RationalMap: constant map (degree 0)");

  // canonical scale: denominator leading coefficient 1
  const cplx dl = den_.leading();
  num_ = num_ * (1.0 / dl);
  den_ = den_ * (1.0 / dl);

  // coprimality: no denominator root may be a numerator root
  if (den_.degree() >= 1) {
    poles_ = poly_roots(den_);
    for (const cplx& p : poles_) {
      const double scale =
          num_.coeff_scale() *
          std::pow(std::max(1.0, std::abs(p)), num_.degree());
      if (std::abs(num_.eval(p)) <= 1e-10 * scale)
        throw InputError(
            "RationalMap: numerator and denominator share a root (not "
            "coprime)");
    }
    std::sort(poles_.begin(), poles_.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
  }

  deriv_num_ = num_.derivative() * den_ - num_ * den_.derivative();
  second_num_ =
      deriv_num_.derivative() * den_ - deriv_num_ * (den_.derivative() * 2.0);

  // standard-normalized: R(0) = 0, R(1) = 1, infinity fixed
  if (fixes_infinity()) {
    const double s0 = std::max(num_.coeff_scale(), den_.coeff_scale());
    const bool zero_fixed = std::abs(num_.coeff(0)) <= tol::standard_norm * s0;
    const bool one_fixed =
        std::abs(num_.eval(1.0) - den_.eval(1.0)) <= tol::standard_norm * s0;
    standard_ = zero_fixed && one_fixed;
  }
}

cplx RationalMap::eval(cplx z) const {
  const cplx q = den_.eval(z);
  const cplx p = num_.eval(z);
  const cplx r = p / q;
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw PoleError("RationalMap: evaluation at a pole", z);
  return r;
}

cplx RationalMap::derivative_at(cplx z) const {
  const cplx q = den_.eval(z);
  const cplx r = deriv_num_.eval(z) / (q * q);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw PoleError("RationalMap: derivative at a pole", z);
  return r;
}

cplx RationalMap::second_derivative_at(cplx z) const {
  const cplx q = den_.eval(z);
  const cplx r = second_num_.eval(z) / (q * q * q);
  if (!std::isfinite(r.real()) || !std::isfinite(r.imag()))
    throw PoleError("RationalMap: second derivative at a pole", z);
  return r;
}

std::vector<cplx> RationalMap::fixed_points() const {
  // roots of num(z) - z * den(z)
  std::vector<cplx> shifted(den_.coeffs().size() + 1, cplx{0.0});
  for (std::size_t k = 0; k < den_.coeffs().size(); ++k)
    shifted[k + 1] = den_.coeffs()[k];
  const Polynomial fixeq = num_ - Polynomial(std::move(shifted));
  if (fixeq.is_zero())
    throw PreconditionError("fixed_points: map is the identity");
  if (fixeq.degree() < 1) return {};
  return poly_roots(fixeq);
}

PreimageResult preimages(const RationalMap& map, cplx z, double cond_tol) {
  // roots of num(y) - z * den(y)
  const Polynomial eq = map.num() - map.den() * z;
  if (eq.degree() < map.degree())
    throw PreconditionError(
        "preimages: degree drop (z is the value at infinity)");
  PreimageResult out;
  out.points = poly_roots(eq);
  out.ill_conditioned.resize(out.points.size(), false);
  for (std::size_t i = 0; i < out.points.size(); ++i) {
    const cplx dp = map.derivative_at(out.points[i]);
    if (std::abs(dp) < cond_tol) {
      out.ill_conditioned[i] = true;
      out.multiplicity_warning = true;
    }
  }
  return out;
}

OrbitCocycle orbit_cocycle(const RationalMap& map, cplx z0, int n) {
  if (n < 0) throw InputError("orbit_cocycle: negative length");
  OrbitCocycle out;
  out.points.reserve(n + 1);
  out.cocycle.reserve(n + 1);
  out.points.push_back(z0);
  out.cocycle.push_back(cplx{1.0});

  const double guard =
      std::min(tol::escape_guard, std::pow(10.0, 290.0 / map.degree()));
  for (int k = 0; k < n; ++k) {
    const cplx prev = out.points.back();
    if (std::abs(prev) > guard) {
      out.escaped = true;
      break;
    }
    const cplx step_deriv = map.derivative_at(prev);
    const cplx next = map.eval(prev);
    const cplx next_cocycle = out.cocycle.back() * step_deriv;
    if (!std::isfinite(std::abs(next)) ||
        std::abs(next_cocycle) > 1e290) {
      out.escaped = true;
      break;
    }
    out.points.push_back(next);
    out.cocycle.push_back(next_cocycle);
  }
  return out;
}

cplx CriticalData::inv_derivative(cplx z) const {
  cplx acc = omega;
  for (std::size_t i = 0; i < points.size(); ++i)
    acc += b[i] / (z - points[i]);
  return acc;
}

cplx CriticalData::h(std::size_t i, cplx z) const {
  cplx acc = omega;
  for (std::size_t j = 0; j < points.size(); ++j) {
    if (j == i) continue;
    acc += b[j] / (z - points[j]);
  }
  return acc;
}

CriticalData critical_data(const RationalMap& map) {
  if (map.num().degree() < map.den().degree() + 1)
    throw PreconditionError(
        "critical_data: map must fix infinity (deg num > deg den)");

  CriticalData cd;
  const Polynomial& nd = map.derivative_num();

  // omega = lim 1/R'(z), z -> inf; nonzero only when deg num = deg den + 1
  if (map.num().degree() == map.den().degree() + 1) {
    const cplx q = map.den().leading();
    cd.omega = q * q / nd.leading();
  }

  if (nd.degree() >= 1) {
    std::vector<cplx> roots = poly_roots(nd);
    std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
      return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    for (const cplx& c : roots) {
      const double nd_scale =
          nd.coeff_scale() *
          std::pow(std::max(1.0, std::abs(c)), std::max(0, nd.degree() - 1));
      if (std::abs(nd.eval_derivative(c)) <= tol::simple_critical * nd_scale)
        throw NonSimpleCriticalError(
            "critical_data: critical point is not simple");
      const cplx q = map.den().eval(c);
      if (std::abs(q) <=
          1e-10 * std::max(1.0, map.den().coeff_scale()) *
              std::pow(std::max(1.0, std::abs(c)), map.den().degree()))
        throw PreconditionError(
            "critical_data: critical point sits at a pole of the map");
      const cplx second = map.second_derivative_at(c);
      if (std::abs(second) < 1e-200)
        throw NonSimpleCriticalError(
            "critical_data: vanishing second derivative at critical point");
      cd.points.push_back(c);
      cd.b.push_back(1.0 / second);
      cd.values.push_back(map.eval(c));
    }
  }

  // validate the decomposition pointwise
  for (const cplx& z : decomposition_probes(cd, map.poles(), 20)) {
    const cplx direct = 1.0 / map.derivative_at(z);
    const cplx rebuilt = cd.inv_derivative(z);
    const double res =
        std::abs(direct - rebuilt) / std::max(1.0, std::abs(direct));
    cd.max_decomposition_residual =
        std::max(cd.max_decomposition_residual, res);
  }
  if (cd.max_decomposition_residual > tol::decomposition)
    throw NonSimpleCriticalError(
        "critical_data: 1/R' decomposition residual above tolerance (" +
        std::to_string(cd.max_decomposition_residual) + ")");
  return cd;
}

NormalizationResult normalize_to_standard(const RationalMap& map,
                                          SpherePoint p0, SpherePoint p1,
                                          SpherePoint p2) {
  // every triple point must be fixed
  for (const SpherePoint& p : {p0, p1, p2}) {
    if (p.infinite) {
      if (!map.fixes_infinity())
        throw PreconditionError(
            "normalize_to_standard: infinity is not fixed by the map");
      continue;
    }
    const cplx image = map.eval(p.value);
    if (std::abs(image - p.value) >
        tol::fixed_point * std::max(1.0, std::abs(p.value)))
      throw PreconditionError(
          "normalize_to_standard: triple point is not fixed by the map");
  }

  const MobiusTransform h = MobiusTransform::three_point(p0, p1, p2);
  const MobiusTransform hinv = h.inverse();

  // compose S = h . R . h^{-1} symbolically; with h^{-1} = u/v (linear),
  // P(u/v) v^D = sum_k p_k u^k v^{D-k}
  const Polynomial u({hinv.b(), hinv.a()});
  const Polynomial v({hinv.d(), hinv.c()});
  const int D = std::max(map.num().degree(), map.den().degree());

  std::vector<Polynomial> upow(D + 1), vpow(D + 1);
  upow[0] = Polynomial::constant(1.0);
  vpow[0] = Polynomial::constant(1.0);
  for (int k = 1; k <= D; ++k) {
    upow[k] = upow[k - 1] * u;
    vpow[k] = vpow[k - 1] * v;
  }
  auto lift = [&](const Polynomial& p) {
    Polynomial acc;
    for (int k = 0; k <= p.degree(); ++k)
      acc = acc + upow[k] * vpow[D - k] * p.coeff(k);
    return acc;
  };
  const Polynomial pt = lift(map.num());
  const Polynomial qt = lift(map.den());

  Polynomial s_num = pt * h.a() + qt * h.b();
  Polynomial s_den = pt * h.c() + qt * h.d();

  // numerical cleanup: the conjugate fixes 0 and 1 exactly in exact
  // arithmetic; snap the rounding residue so the flag is honest
  const double s = std::max(s_num.coeff_scale(), s_den.coeff_scale());
  if (s <= 0.0)
    throw PreconditionError("normalize_to_standard: degenerate conjugate");
  {
    std::vector<cplx> c = s_num.coeffs();
    if (!c.empty() && std::abs(c[0]) <= 1e-10 * s) c[0] = cplx{0.0};
    s_num = Polynomial(std::move(c));
  }
  const cplx r1 = s_num.eval(1.0) / s_den.eval(1.0);
  if (std::abs(r1 - 1.0) <= 1e-10)
    s_den = s_den * r1;

  RationalMap result(std::move(s_num), std::move(s_den));
  if (!result.standard_normalized())
    throw PreconditionError(
        "normalize_to_standard: conjugate failed the standard-normalization "
        "check");
  return {std::move(result), h};
}

}  // namespace ruelle
