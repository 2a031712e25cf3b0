#include "ruelle/mobius.hpp"

#include <cmath>

namespace ruelle {

MobiusTransform::MobiusTransform(cplx a, cplx b, cplx c, cplx d)
    : a_(a), b_(b), c_(c), d_(d) {
  const cplx det = a_ * d_ - b_ * c_;
  if (std::abs(det) < 1e-200)
    throw InputError("MobiusTransform: determinant vanishes");
  const cplx s = std::sqrt(det);
  a_ /= s;
  b_ /= s;
  c_ /= s;
  d_ /= s;
}

cplx MobiusTransform::apply(cplx z) const {
  const cplx den = c_ * z + d_;
  if (std::abs(den) < tol::pole_eval * (1.0 + std::abs(z)))
    throw PoleError("MobiusTransform: evaluation at the pole", z);
  return (a_ * z + b_) / den;
}

SpherePoint MobiusTransform::apply(SpherePoint p) const {
  if (p.infinite) {
    if (std::abs(c_) == 0.0) return SpherePoint::infinity();
    return SpherePoint::at(a_ / c_);
  }
  const cplx den = c_ * p.value + d_;
  if (std::abs(den) < 1e-14 * (1.0 + std::abs(p.value)))
    return SpherePoint::infinity();
  return SpherePoint::at((a_ * p.value + b_) / den);
}

MobiusTransform MobiusTransform::inverse() const {
  return MobiusTransform(d_, -b_, -c_, a_);
}

MobiusTransform MobiusTransform::compose(const MobiusTransform& inner) const {
  return MobiusTransform(a_ * inner.a_ + b_ * inner.c_,
                         a_ * inner.b_ + b_ * inner.d_,
                         c_ * inner.a_ + d_ * inner.c_,
                         c_ * inner.b_ + d_ * inner.d_);
}

MobiusTransform MobiusTransform::three_point(SpherePoint p0, SpherePoint p1,
                                             SpherePoint p2) {
  auto same = [](const SpherePoint& x, const SpherePoint& y) {
    if (x.infinite || y.infinite) return x.infinite && y.infinite;
    return std::abs(x.value - y.value) <
           1e-12 * (1.0 + std::abs(x.value) + std::abs(y.value));
  };
  if (same(p0, p1) || same(p0, p2) || same(p1, p2))
    throw InputError("three_point: degenerate triple");

  if (p2.infinite) {
    // affine: (z - p0)/(p1 - p0); p0, p1 finite here
    return MobiusTransform(1.0, -p0.value, 0.0, p1.value - p0.value);
  }
  if (p1.infinite) {
    return MobiusTransform(1.0, -p0.value, 1.0, -p2.value);
  }
  if (p0.infinite) {
    return MobiusTransform(0.0, p1.value - p2.value, 1.0, -p2.value);
  }
  const cplx q12 = p1.value - p2.value;
  const cplx q10 = p1.value - p0.value;
  return MobiusTransform(q12, -p0.value * q12, q10, -p2.value * q10);
}

}  // namespace ruelle
