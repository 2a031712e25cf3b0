#include "ruelle/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <mutex>

namespace ruelle {

bool Kernel::degenerate() const {
  if (kind != KernelKind::gamma) return false;
  return std::abs(base) <= tol::degenerate_base ||
         std::abs(base - 1.0) <= tol::degenerate_base;
}

cplx Kernel::eval(cplx z) const {
  if (degenerate()) return cplx{0.0};
  const double guard = tol::pole_eval * (1.0 + std::abs(z));
  if (kind == KernelKind::tau) {
    if (std::abs(z - base) < guard)
      throw PoleError("tau kernel evaluated at its pole", base);
    return 1.0 / (z - base);
  }
  if (std::abs(z) < guard) throw PoleError("gamma kernel pole at 0", cplx{0.0});
  if (std::abs(z - 1.0) < guard)
    throw PoleError("gamma kernel pole at 1", cplx{1.0});
  if (std::abs(z - base) < guard)
    throw PoleError("gamma kernel pole at its base", base);
  // grouping base with (z - base) keeps huge bases (orbit points near the
  // escape guard) away from |base|^2 overflow
  return (base / (z - base)) * ((base - 1.0) / (z * (z - 1.0)));
}

cplx Kernel::eval_unchecked(cplx z) const {
  if (degenerate()) return cplx{0.0};
  if (kind == KernelKind::tau) return 1.0 / (z - base);
  return (base / (z - base)) * ((base - 1.0) / (z * (z - 1.0)));
}

std::vector<cplx> Kernel::pole_locations() const {
  if (degenerate()) return {};
  if (kind == KernelKind::tau) return {base};
  return {cplx{0.0}, cplx{1.0}, base};
}

GammaDecomposition gamma_decompose(cplx a) {
  return {a - 1.0, -a, cplx{1.0}};
}

KernelCombination KernelCombination::single(cplx coeff, Kernel k) {
  KernelCombination out;
  out.add_term(coeff, k);
  return out;
}

void KernelCombination::add_term(cplx coeff, Kernel k) {
  if (k.degenerate()) return;
  if (coeff == cplx{0.0}) return;
  for (KernelTerm& t : terms_) {
    if (t.kernel.kind == k.kind &&
        std::abs(t.kernel.base - k.base) <=
            1e-13 * (1.0 + std::abs(k.base))) {
      t.coeff += coeff;
      if (t.coeff == cplx{0.0})
        terms_.erase(terms_.begin() + (&t - terms_.data()));
      return;
    }
  }
  terms_.push_back({coeff, k});
}

void KernelCombination::add(const KernelCombination& other, cplx scale) {
  for (const KernelTerm& t : other.terms_)
    add_term(scale * t.coeff, t.kernel);
}

cplx KernelCombination::eval(cplx z) const {
  cplx acc{0.0};
  for (const KernelTerm& t : terms_) acc += t.coeff * t.kernel.eval(z);
  return acc;
}

std::function<cplx(cplx)> KernelCombination::as_evaluable() const {
  return [copy = *this](cplx z) { return copy.eval(z); };
}

KernelCombination KernelCombination::operator*(cplx scale) const {
  KernelCombination out;
  if (scale == cplx{0.0}) return out;
  out.terms_ = terms_;
  for (KernelTerm& t : out.terms_) t.coeff *= scale;
  return out;
}

KernelCombination KernelCombination::operator+(
    const KernelCombination& rhs) const {
  KernelCombination out = *this;
  out.add(rhs);
  return out;
}

std::vector<cplx> KernelCombination::pole_locations() const {
  std::vector<cplx> out;
  auto push_unique = [&out](cplx p) {
    for (const cplx& q : out)
      if (std::abs(p - q) <= 1e-12 * (1.0 + std::abs(p))) return;
    out.push_back(p);
  };
  for (const KernelTerm& t : terms_)
    for (const cplx& p : t.kernel.pole_locations()) push_unique(p);
  return out;
}

double KernelCombination::coeff_scale() const {
  double s = 0.0;
  for (const KernelTerm& t : terms_) s = std::max(s, std::abs(t.coeff));
  return s;
}

// ---- Monte-Carlo L1 ----------------------------------------------------------

namespace {

struct Stratum {
  // modes: 0 pole-polar, 1 bulk-uniform, 2 far-inverted-polar
  int mode = 0;
  cplx center{0.0};
  double radius = 0.0;
};

struct StratumResult {
  double integral = 0.0;
  double sigma_sq = 0.0;
};

StratumResult run_stratum(const std::function<cplx(cplx)>& f,
                          const Stratum& st,
                          const std::vector<Stratum>& pole_strata,
                          std::size_t n, std::uint64_t seed,
                          std::uint64_t stream) {
  if (n == 0) return {};
  constexpr std::size_t kBlock = 4096;
  const std::size_t n_blocks = (n + kBlock - 1) / kBlock;
  std::vector<double> block_sum(n_blocks, 0.0), block_sumsq(n_blocks, 0.0);

  parallel_for_blocks(n, kBlock, [&](std::size_t lo, std::size_t hi) {
    KahanSumReal s, s2;
    for (std::size_t i = lo; i < hi; ++i) {
      const double u = sample_u01(seed, stream, i, 0);
      const double v = sample_u01(seed, stream, i, 1);
      double est = 0.0;
      if (st.mode == 0) {
        // polar around a pole: sample (r, theta) uniformly
        const double r = std::max(u * st.radius, 1e-14);
        const double th = 6.283185307179586 * v;
        const cplx z = st.center + cplx{r * std::cos(th), r * std::sin(th)};
        est = std::abs(f(z)) * r * (st.radius * 6.283185307179586);
      } else if (st.mode == 1) {
        // uniform over the bulk disk, zero inside pole strata
        const double r = st.radius * std::sqrt(u);
        const double th = 6.283185307179586 * v;
        const cplx z = st.center + cplx{r * std::cos(th), r * std::sin(th)};
        bool inside_pole = false;
        for (const Stratum& ps : pole_strata)
          if (std::abs(z - ps.center) < ps.radius) inside_pole = true;
        if (!inside_pole)
          est = std::abs(f(z)) * (3.141592653589793 * st.radius * st.radius);
      } else {
        // far field via w = 1/z; radius holds 1/R_out
        const double r = std::max(u * st.radius, 1e-13);
        const double th = 6.283185307179586 * v;
        const cplx w{r * std::cos(th), r * std::sin(th)};
        const cplx z = 1.0 / w;
        est = std::abs(f(z)) / (r * r * r) *
              (st.radius * 6.283185307179586);
      }
      if (!std::isfinite(est)) est = 0.0;
      s.add(est);
      s2.add(est * est);
    }
    const std::size_t b = lo / kBlock;
    block_sum[b] = s.value();
    block_sumsq[b] = s2.value();
  });

  KahanSumReal total, total_sq;
  for (std::size_t b = 0; b < n_blocks; ++b) {
    total.add(block_sum[b]);
    total_sq.add(block_sumsq[b]);
  }
  const double mean = total.value() / static_cast<double>(n);
  const double var =
      std::max(0.0, total_sq.value() / static_cast<double>(n) - mean * mean);
  StratumResult out;
  out.integral = mean;
  out.sigma_sq = var / static_cast<double>(n);
  return out;
}

}  // namespace

NormEstimate l1_norm_estimate_fn(const std::function<cplx(cplx)>& f,
                                 const std::vector<cplx>& poles,
                                 std::size_t samples, std::uint64_t seed) {
  NormEstimate out;
  if (samples < 100) samples = 100;

  // pole disks: shrink so they never overlap each other
  double min_sep = 1e9;
  for (std::size_t i = 0; i < poles.size(); ++i)
    for (std::size_t j = i + 1; j < poles.size(); ++j)
      min_sep = std::min(min_sep, std::abs(poles[i] - poles[j]));
  const double pole_radius = std::min(0.3, 0.45 * min_sep);

  double reach = 2.0;
  for (const cplx& p : poles) reach = std::max(reach, std::abs(p));
  const double r_out = 2.0 * reach + 2.0;

  std::vector<Stratum> pole_strata;
  for (const cplx& p : poles) pole_strata.push_back({0, p, pole_radius});
  const Stratum bulk{1, cplx{0.0}, r_out};
  const Stratum far{2, cplx{0.0}, 1.0 / r_out};

  const std::size_t n_pole =
      poles.empty() ? 0
                    : static_cast<std::size_t>(0.4 * samples) / poles.size();
  const std::size_t n_far = static_cast<std::size_t>(0.2 * samples);
  const std::size_t n_bulk =
      samples - n_far - n_pole * poles.size();

  double total = 0.0, sig_sq = 0.0;
  std::uint64_t stream = 100;
  for (const Stratum& st : pole_strata) {
    const StratumResult r = run_stratum(f, st, pole_strata, n_pole, seed, stream++);
    total += r.integral;
    sig_sq += r.sigma_sq;
  }
  {
    const StratumResult r = run_stratum(f, bulk, pole_strata, n_bulk, seed, stream++);
    total += r.integral;
    sig_sq += r.sigma_sq;
  }
  {
    const StratumResult r = run_stratum(f, far, pole_strata, n_far, seed, stream++);
    total += r.integral;
    sig_sq += r.sigma_sq;
  }
  out.value = total;
  out.sigma = std::sqrt(sig_sq);
  return out;
}

NormEstimate l1_norm_estimate(const KernelCombination& f, std::size_t samples,
                              std::uint64_t seed) {
  if (f.empty()) return {};

  // far-field expansion: tau terms contribute c/z + c a/z^2 + ...; both
  // moments must cancel for an integrable tail
  cplx m1{0.0}, m2{0.0};
  for (const KernelTerm& t : f.terms()) {
    if (t.kernel.kind == KernelKind::tau) {
      m1 += t.coeff;
      m2 += t.coeff * t.kernel.base;
    }
  }
  const double scale = std::max(1.0, f.coeff_scale());
  if (std::abs(m1) > 1e-12 * scale || std::abs(m2) > 1e-12 * scale) {
    NormEstimate out;
    out.divergent = true;
    out.value = std::numeric_limits<double>::infinity();
    return out;
  }

  auto g = [&f](cplx z) {
    cplx acc{0.0};
    for (const KernelTerm& t : f.terms())
      acc += t.coeff * t.kernel.eval_unchecked(z);
    return acc;
  };
  return l1_norm_estimate_fn(g, f.pole_locations(), samples, seed);
}

double fitted_gamma_norm_constant() {
  static std::once_flag flag;
  static double fitted = 0.0;
  std::call_once(flag, [] {
    const cplx bases[] = {cplx{2.0},        cplx{3.0},  cplx{5.0, 2.0},
                          cplx{9.0},        cplx{-8.0, 3.0},
                          cplx{27.0},       cplx{50.0}};
    double m = 0.0;
    for (const cplx& a : bases) {
      const NormEstimate e = l1_norm_estimate(
          KernelCombination::single(1.0, Kernel::gamma(a)), 40000,
          0xfedcba9876543210ull);
      const double shape = std::abs(a) * std::log(std::abs(a));
      m = std::max(m, (e.value + 3.0 * e.sigma) / shape);
    }
    fitted = m;
  });
  return fitted;
}

}  // namespace ruelle
