#pragma once

// Moebius transforms and points on the Riemann sphere. Used to conjugate a
// rational map so that a chosen fixed-point triple lands on (0, 1, inf).

#include "ruelle/common.hpp"

namespace ruelle {

// finite complex value or the point at infinity
struct SpherePoint {
  cplx value{0.0};
  bool infinite = false;

  static SpherePoint at(cplx z) { return {z, false}; }
  static SpherePoint infinity() { return {cplx{0.0}, true}; }
};

class MobiusTransform {
 public:
  // entries of (az+b)/(cz+d); normalized so ad - bc = 1
  MobiusTransform(cplx a, cplx b, cplx c, cplx d);

  cplx a() const { return a_; }
  cplx b() const { return b_; }
  cplx c() const { return c_; }
  cplx d() const { return d_; }

  // finite-to-finite application; throws PoleError at z = -d/c
  cplx apply(cplx z) const;
  SpherePoint apply(SpherePoint p) const;

  MobiusTransform inverse() const;
  MobiusTransform compose(const MobiusTransform& inner) const;  // this after inner

  // the unique transform sending (p0, p1, p2) to (0, 1, inf);
  // throws InputError when two triple points coincide
  static MobiusTransform three_point(SpherePoint p0, SpherePoint p1,
                                     SpherePoint p2);

 private:
  cplx a_, b_, c_, d_;
};

}  // namespace ruelle
