#pragma once

// Shared numeric utilities: complex alias, tolerance constants, compensated
// summation, deterministic per-index RNG, and a small thread-pool-free
// parallel_for. Everything here is header-light and dependency-free.

#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace ruelle {

using cplx = std::complex<double>;

namespace tol {
// residual bound for accepted polynomial roots, scaled by coefficient size
inline constexpr double root_residual = 1e-10;
// |R''(c)| below this (relative) means the critical point is not simple
inline constexpr double simple_critical = 1e-8;
// max pointwise residual of the 1/R' partial-fraction decomposition
inline constexpr double decomposition = 1e-8;
// kernel evaluation throws inside this distance of a pole
inline constexpr double pole_eval = 1e-13;
// gamma bases inside this distance of 0 or 1 denote the zero function
inline constexpr double degenerate_base = 1e-12;
// residual allowed for R(0)=0, R(1)=1 on standard-normalized maps
inline constexpr double standard_norm = 1e-12;
// |R(p)-p| allowed when a normalization triple point is claimed fixed
inline constexpr double fixed_point = 1e-10;
// preimage conditioning: |R'(y)| below this flags the branch
inline constexpr double preimage_cond = 1e-8;
// hard conditioning floor: pointwise operator application throws below this
inline constexpr double hard_cond = 1e-12;
// dispatch radius: kernel base closer than this to a critical point uses
// the critical-base closed form
inline constexpr double critical_dispatch = 1e-9;
// proximity guard for series evaluation near orbit points
inline constexpr double orbit_prox = 1e-10;
// relative singular-value cutoff for rank decisions
inline constexpr double rank_rel = 1e-8;
// orbit escape guard (degree-2 value; adjusted per degree for overflow)
inline constexpr double escape_guard = 1e150;
// trailing-window geometric ratio margin for summability verdicts
inline constexpr double ratio_margin = 0.05;
}  // namespace tol

// ---- errors ---------------------------------------------------------------

// base class for all library failures
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// malformed input data (bad JSON shape, empty polynomial, shared roots, ...)
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

// violated mathematical precondition (non-simple critical point, pole hit,
// divergent series where summability is required, ...)
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& what) : Error(what) {}
};

// evaluation requested within tol::pole_eval of a pole; names the pole
class PoleError : public PreconditionError {
 public:
  PoleError(const std::string& what, cplx pole_location)
      : PreconditionError(what), pole(pole_location) {}
  cplx pole;
};

// gamma-kernel machinery asked to evaluate at a degenerate placement (0/1)
class DegenerateKernelError : public PreconditionError {
 public:
  explicit DegenerateKernelError(const std::string& what)
      : PreconditionError(what) {}
};

// the derivative decomposition requires simple critical points
class NonSimpleCriticalError : public PreconditionError {
 public:
  explicit NonSimpleCriticalError(const std::string& what)
      : PreconditionError(what) {}
};

// iterative solver failed to converge; carries the best iterate seen
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual)
      : Error(what), best_residual(residual) {}
  double best_residual;
};

// ---- summation ------------------------------------------------------------

// Kahan compensated accumulator for complex terms. Used where long
// reductions must not lose low-order bits (Monte-Carlo sums). Series
// partial-sum sequences use the plain recurrence instead so that
// partial[n] == partial[n-1] + term[n] holds bitwise.
class KahanSum {
 public:
  void add(cplx term) {
    const cplx y = term - comp_;
    const cplx t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  cplx value() const { return sum_; }

 private:
  cplx sum_{0.0, 0.0};
  cplx comp_{0.0, 0.0};
};

class KahanSumReal {
 public:
  void add(double term) {
    const double y = term - comp_;
    const double t = sum_ + y;
    comp_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// ---- deterministic RNG ----------------------------------------------------

// splitmix64: the per-sample generator. Sample i of stream (seed, stream_id)
// derives its state independently, so results do not depend on how samples
// are split across threads.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// uniform double in [0, 1) from a 64-bit word
inline double u01(std::uint64_t word) {
  return static_cast<double>(word >> 11) * 0x1.0p-53;
}

// k-th uniform variate of sample `index` in stream (seed, stream)
inline double sample_u01(std::uint64_t seed, std::uint64_t stream,
                         std::uint64_t index, std::uint64_t k) {
  std::uint64_t s = splitmix64(seed ^ (0x517cc1b727220a95ull * (stream + 1)));
  s = splitmix64(s ^ (index * 0x2545f4914f6cdd1dull + k));
  return u01(s);
}

// uniform complex in the annulus r_lo <= |z| <= r_hi (area-uniform)
inline cplx sample_annulus(std::uint64_t seed, std::uint64_t stream,
                           std::uint64_t index, double r_lo, double r_hi) {
  const double u = sample_u01(seed, stream, index, 0);
  const double v = sample_u01(seed, stream, index, 1);
  const double r = std::sqrt(r_lo * r_lo + u * (r_hi * r_hi - r_lo * r_lo));
  const double th = 6.283185307179586476925286766559 * v;
  return {r * std::cos(th), r * std::sin(th)};
}

// ---- threading ------------------------------------------------------------

// thread budget: RUELLE_KIT_THREADS if set (>=1), else hardware concurrency
std::size_t thread_budget();

// Runs fn(block_begin, block_end) over [0, total) split into fixed-size
// blocks. Block boundaries do not depend on the thread count, so any
// per-block reduction combined in block order is deterministic.
void parallel_for_blocks(std::size_t total, std::size_t block_size,
                         const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace ruelle
