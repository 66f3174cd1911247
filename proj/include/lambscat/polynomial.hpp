#ifndef LAMBSCAT_POLYNOMIAL_HPP
#define LAMBSCAT_POLYNOMIAL_HPP

#include <Eigen/Dense>

#include <complex>
#include <initializer_list>
#include <vector>

namespace lambscat {

/// Horner evaluation of sum_k coeffs[k] x^k; works for any scalar that
/// real coefficients promote into.
template <typename Scalar, typename Coeffs>
Scalar horner(const Coeffs& coeffs, Scalar x) {
  Scalar acc = Scalar(0);
  for (auto i = static_cast<Eigen::Index>(coeffs.size()) - 1; i >= 0; --i) {
    acc = acc * x + Scalar(coeffs[i]);
  }
  return acc;
}

/// Value and first derivative in one Horner pass.
template <typename Scalar, typename Coeffs>
std::pair<Scalar, Scalar> horner_with_derivative(const Coeffs& coeffs, Scalar x) {
  Scalar p = Scalar(0), dp = Scalar(0);
  for (auto i = static_cast<Eigen::Index>(coeffs.size()) - 1; i >= 0; --i) {
    dp = dp * x + p;
    p = p * x + Scalar(coeffs[i]);
  }
  return {p, dp};
}

/// Real polynomial with coefficients in ascending degree order. Entries
/// below 1e-14 * max|coeff| at the top are trimmed on construction, so the
/// leading coefficient is nonzero unless the polynomial is identically 0.
class RealPolynomial {
 public:
  RealPolynomial() = default;
  explicit RealPolynomial(Eigen::VectorXd coeffs);
  RealPolynomial(std::initializer_list<double> coeffs);

  const Eigen::VectorXd& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  double leading() const { return coeffs_(coeffs_.size() - 1); }
  double operator[](int k) const { return k < coeffs_.size() ? coeffs_(k) : 0.0; }
  bool is_zero() const { return coeffs_.size() == 1 && coeffs_(0) == 0.0; }

  double operator()(double x) const { return horner(coeffs_, x); }
  std::complex<double> operator()(std::complex<double> z) const { return horner(coeffs_, z); }

  double norm1() const { return coeffs_.lpNorm<1>(); }
  double norm_inf() const { return coeffs_.lpNorm<Eigen::Infinity>(); }

  RealPolynomial derivative() const;

  friend RealPolynomial operator+(const RealPolynomial& a, const RealPolynomial& b);
  friend RealPolynomial operator-(const RealPolynomial& a, const RealPolynomial& b);
  friend RealPolynomial operator*(const RealPolynomial& a, const RealPolynomial& b);
  friend RealPolynomial operator*(double s, const RealPolynomial& a);
  friend bool operator==(const RealPolynomial& a, const RealPolynomial& b) {
    return a.coeffs_ == b.coeffs_;
  }

  /// z^k as a polynomial.
  static RealPolynomial monomial(int k, double coeff = 1.0);

 private:
  void trim();
  Eigen::VectorXd coeffs_ = Eigen::VectorXd::Zero(1);
};

/// Applies p(d/dx) to a function given by its derivatives at a point:
/// returns sum_k p_k * derivs[k].
double apply_differential(const RealPolynomial& p, const Eigen::VectorXd& derivs);

}  // namespace lambscat

#endif  // LAMBSCAT_POLYNOMIAL_HPP
