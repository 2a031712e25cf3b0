#include <algorithm>
#include <cmath>

#include "ruelle/polynomial.hpp"

namespace ruelle {
namespace {

// residual scale for accepting a candidate root of p
double accept_scale(double coeff_scale, cplx root, int deg) {
  return coeff_scale * std::pow(std::max(1.0, std::abs(root)),
                                static_cast<double>(deg));
}

// Horner evaluation of p and p' on normalized coefficients
void eval_both(const std::vector<cplx>& c, cplx z, cplx& p, cplx& dp) {
  p = c.back();
  dp = cplx{0.0};
  for (std::size_t k = c.size() - 1; k-- > 0;) {
    dp = dp * z + p;
    p = p * z + c[k];
  }
}

}  // namespace

std::vector<cplx> poly_roots(const Polynomial& poly, double tol) {
  if (poly.is_zero())
    throw InputError("poly_roots: zero polynomial has no defined root set");
  if (poly.degree() == 0) return {};

  // factor out exact roots at the origin
  std::vector<cplx> c = poly.coeffs();
  std::vector<cplx> roots;
  while (c.size() > 1 && c.front() == cplx{0.0}) {
    roots.push_back(cplx{0.0});
    c.erase(c.begin());
  }
  const int n = static_cast<int>(c.size()) - 1;
  if (n == 0) return roots;

  const double scale_orig = poly.coeff_scale();

  // monic normalization
  const cplx lead = c.back();
  for (cplx& a : c) a /= lead;

  if (n == 1) {
    roots.push_back(-c[0]);
    return roots;
  }

  // initial guesses: staggered circle at the Cauchy bound radius
  double cauchy = 0.0;
  for (int k = 0; k < n; ++k) cauchy = std::max(cauchy, std::abs(c[k]));
  const double r0 = 1.0 + cauchy;
  std::vector<cplx> z(n);
  for (int i = 0; i < n; ++i) {
    const double th = 6.283185307179586 * i / n + 0.7;
    const double r = r0 * (0.6 + 0.5 * i / std::max(1, n - 1));
    z[i] = {r * std::cos(th), r * std::sin(th)};
  }

  const double lead_mag = std::abs(lead);
  auto residual_of = [&](cplx zi) {
    cplx p, dp;
    eval_both(c, zi, p, dp);
    return std::abs(p) * lead_mag /
           accept_scale(scale_orig, zi, poly.degree());
  };

  double best_max_res = 1e300;
  int stagnant = 0;
  std::uint64_t perturb_state = 0x9f1e2d3c4b5a6978ull;

  for (int iter = 0; iter < 200; ++iter) {
    double step_max = 0.0;
    for (int i = 0; i < n; ++i) {
      cplx p, dp;
      eval_both(c, z[i], p, dp);
      if (std::abs(p) == 0.0) continue;
      if (std::abs(dp) < 1e-300) {
        // rare p'=0 collision: nudge and retry next sweep
        perturb_state = splitmix64(perturb_state);
        z[i] += cplx{1e-6 * (u01(perturb_state) - 0.5),
                     1e-6 * (u01(splitmix64(perturb_state)) - 0.5)};
        step_max = 1.0;
        continue;
      }
      const cplx ratio = p / dp;
      cplx repel{0.0};
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cplx diff = z[i] - z[j];
        if (std::abs(diff) < 1e-14) diff = cplx{1e-14, 1e-14};
        repel += 1.0 / diff;
      }
      const cplx denom = 1.0 - ratio * repel;
      const cplx w = (std::abs(denom) < 1e-14) ? ratio : ratio / denom;
      z[i] -= w;
      step_max = std::max(step_max, std::abs(w));
    }

    double max_res = 0.0;
    for (int i = 0; i < n; ++i) max_res = std::max(max_res, residual_of(z[i]));
    if (max_res < best_max_res * 0.99) {
      best_max_res = max_res;
      stagnant = 0;
    } else {
      ++stagnant;
    }
    if (max_res <= tol || step_max <= 1e-16) break;
    if (stagnant >= 30) {
      // perturbation restart: scatter iterates slightly, deterministic
      for (int i = 0; i < n; ++i) {
        perturb_state = splitmix64(perturb_state);
        const double ang = 6.283185307179586 * u01(perturb_state);
        const double mag = 0.05 * (1.0 + std::abs(z[i]));
        z[i] += cplx{mag * std::cos(ang), mag * std::sin(ang)};
      }
      stagnant = 0;
    }
  }

  // Newton polish
  for (int i = 0; i < n; ++i) {
    for (int step = 0; step < 4; ++step) {
      cplx p, dp;
      eval_both(c, z[i], p, dp);
      if (std::abs(p) == 0.0 || std::abs(dp) < 1e-300) break;
      const cplx w = p / dp;
      if (!std::isfinite(std::abs(w))) break;
      // reject polish steps that jump: multiple roots make Newton bounce
      if (std::abs(w) > 0.5 * (1.0 + std::abs(z[i]))) break;
      z[i] -= w;
    }
  }

  double worst = 0.0;
  for (int i = 0; i < n; ++i) worst = std::max(worst, residual_of(z[i]));
  if (worst > tol)
    throw ConvergenceError(
        "poly_roots: residual " + std::to_string(worst) +
            " above tolerance after Aberth-Ehrlich + Newton polish",
        worst);

  roots.insert(roots.end(), z.begin(), z.end());
  return roots;
}

}  // namespace ruelle
