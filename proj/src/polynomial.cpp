#include "lambscat/polynomial.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>

namespace lambscat {

RealPolynomial::RealPolynomial(Eigen::VectorXd coeffs) : coeffs_(std::move(coeffs)) {
  if (coeffs_.size() == 0) coeffs_ = Eigen::VectorXd::Zero(1);
  trim();
}

RealPolynomial::RealPolynomial(std::initializer_list<double> coeffs)
    : RealPolynomial(Eigen::Map<const Eigen::VectorXd>(coeffs.begin(),
                                                       static_cast<Eigen::Index>(coeffs.size()))) {}

void RealPolynomial::trim() {
  const double scale = coeffs_.lpNorm<Eigen::Infinity>();
  Eigen::Index top = coeffs_.size() - 1;
  while (top > 0 && std::abs(coeffs_(top)) <= 1e-14 * scale) --top;
  coeffs_.conservativeResize(top + 1);
}

RealPolynomial RealPolynomial::derivative() const {
  if (degree() == 0) return RealPolynomial{0.0};
  Eigen::VectorXd d(degree());
  for (int k = 1; k <= degree(); ++k) d(k - 1) = k * coeffs_(k);
  return RealPolynomial(d);
}

RealPolynomial RealPolynomial::monomial(int k, double coeff) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(k + 1);
  c(k) = coeff;
  return RealPolynomial(c);
}

RealPolynomial operator+(const RealPolynomial& a, const RealPolynomial& b) {
  const Eigen::Index n = std::max(a.coeffs_.size(), b.coeffs_.size());
  Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
  c.head(a.coeffs_.size()) += a.coeffs_;
  c.head(b.coeffs_.size()) += b.coeffs_;
  return RealPolynomial(c);
}

RealPolynomial operator-(const RealPolynomial& a, const RealPolynomial& b) {
  return a + (-1.0) * b;
}

RealPolynomial operator*(double s, const RealPolynomial& a) {
  return RealPolynomial(Eigen::VectorXd(s * a.coeffs_));
}

RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b) {
  Eigen::VectorXd c = Eigen::VectorXd::Zero(a.coeffs_.size() + b.coeffs_.size() - 1);
  for (Eigen::Index i = 0; i < a.coeffs_.size(); ++i)
    for (Eigen::Index j = 0; j < b.coeffs_.size(); ++j) c(i + j) += a.coeffs_(i) * b.coeffs_(j);
  return RealPolynomial(c);
}

double apply_differential(const RealPolynomial& p, const Eigen::VectorXd& derivs) {
  assert(derivs.size() > p.degree());
  double acc = 0.0;
  for (int k = 0; k <= p.degree(); ++k) acc += p[k] * derivs(k);
  return acc;
}

}  // namespace lambscat
