#include "ruelle/polynomial.hpp"

#include <algorithm>

namespace ruelle {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) {
  double scale = 0.0;
  for (const cplx& c : coeffs_) scale = std::max(scale, std::abs(c));
  const double cut = scale * 1e-14;
  while (!coeffs_.empty() && std::abs(coeffs_.back()) <= cut)
    coeffs_.pop_back();
}

cplx Polynomial::eval(cplx z) const {
  cplx acc{0.0};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it)
    acc = acc * z + *it;
  return acc;
}

cplx Polynomial::eval_derivative(cplx z) const {
  cplx acc{0.0};
  for (std::size_t k = coeffs_.size(); k-- > 1;)
    acc = acc * z + coeffs_[k] * static_cast<double>(k);
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return Polynomial{};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k)
    d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& rhs) const {
  std::vector<cplx> out(std::max(coeffs_.size(), rhs.coeffs_.size()), cplx{0.0});
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) out[k] += rhs.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& rhs) const {
  std::vector<cplx> out(std::max(coeffs_.size(), rhs.coeffs_.size()), cplx{0.0});
  for (std::size_t k = 0; k < coeffs_.size(); ++k) out[k] += coeffs_[k];
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) out[k] -= rhs.coeffs_[k];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(const Polynomial& rhs) const {
  if (is_zero() || rhs.is_zero()) return Polynomial{};
  std::vector<cplx> out(coeffs_.size() + rhs.coeffs_.size() - 1, cplx{0.0});
  for (std::size_t i = 0; i < coeffs_.size(); ++i)
    for (std::size_t j = 0; j < rhs.coeffs_.size(); ++j)
      out[i + j] += coeffs_[i] * rhs.coeffs_[j];
  return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(cplx scale) const {
  std::vector<cplx> out(coeffs_);
  for (cplx& c : out) c *= scale;
  return Polynomial(std::move(out));
}

double Polynomial::coeff_scale() const {
  double scale = 0.0;
  for (const cplx& c : coeffs_) scale = std::max(scale, std::abs(c));
  return scale;
}

}  // namespace ruelle
