#ifndef LAMBSCAT_POTENTIAL_HPP
#define LAMBSCAT_POTENTIAL_HPP

#include <Eigen/Dense>

#include <map>
#include <string>
#include <vector>

namespace lambscat {

/// Oscillator potential V(y) replacing -<Ly, y>/2; y in eigen-coordinates.
class Potential {
 public:
  virtual ~Potential() = default;
  virtual int dimension() const = 0;
  virtual double value(const Eigen::VectorXd& y) const = 0;
  virtual Eigen::VectorXd gradient(const Eigen::VectorXd& y) const = 0;
};

/// Multivariate polynomial: exponent vector -> coefficient.
using Monomials = std::map<std::vector<int>, double>;

/// Result of the growth test V(y) >= c1 |y|^2 - c2 on the leading form.
struct GrowthReport {
  bool satisfied = false;
  int degree = 0;
  std::string method;
};

/// Polynomial potential parsed from an expression over y1..yn with
/// + - * ^, division by constants, parentheses and numeric literals,
/// e.g. "y1^4 + y1^2" or "0.5*(y1^2 + 2*y2^2) - y1*y2". The gradient is
/// differentiated symbolically.
class PolynomialPotential final : public Potential {
 public:
  PolynomialPotential(const std::string& expression, int n);
  explicit PolynomialPotential(Monomials terms, int n);

  /// -<L y, y>/2 for L = diag(lambda).
  static PolynomialPotential harmonic(const Eigen::VectorXd& lambda);

  int dimension() const override { return n_; }
  double value(const Eigen::VectorXd& y) const override;
  Eigen::VectorXd gradient(const Eigen::VectorXd& y) const override;

  const Monomials& terms() const { return terms_; }
  const std::string& expression() const { return expression_; }
  int degree() const;

  /// Checks that the top-degree form is positive definite: by eigenvalues
  /// for quadratics, by sign for n = 1, else by sampling the unit sphere.
  GrowthReport growth_check() const;

 private:
  static double eval(const Monomials& m, const Eigen::VectorXd& y);

  int n_;
  std::string expression_;
  Monomials terms_;
  std::vector<Monomials> grad_;
};

}  // namespace lambscat

#endif  // LAMBSCAT_POTENTIAL_HPP
