#ifndef LAMBSCAT_PROFILE_HPP
#define LAMBSCAT_PROFILE_HPP

#include "lambscat/polynomial.hpp"

#include <Eigen/Dense>

#include <utility>
#include <vector>

namespace lambscat {

/// A smooth rapidly decaying profile on [0, inf): a sum of Gaussian terms
/// A (x - x0)^q exp(-sigma (x - x0)^2) and compactly supported bumps
/// A exp(-1 / (1 - ((x - x0)/r)^2)). Derivatives are analytic up to kMaxOrder.
class FieldProfile {
 public:
  static constexpr int kMaxOrder = 24;

  struct Gaussian {
    double amplitude = 1.0;
    double center = 0.0;
    double sigma = 1.0;
    int power = 0;
    friend bool operator==(const Gaussian&, const Gaussian&) = default;
  };
  struct Bump {
    double amplitude = 1.0;
    double center = 0.0;
    double radius = 1.0;
    friend bool operator==(const Bump&, const Bump&) = default;
  };

  FieldProfile() = default;
  FieldProfile(std::vector<Gaussian> gaussians, std::vector<Bump> bumps);

  static FieldProfile gaussian(double amplitude, double center, double sigma, int power = 0);
  static FieldProfile bump(double amplitude, double center, double radius);

  const std::vector<Gaussian>& gaussians() const { return gaussians_; }
  const std::vector<Bump>& bumps() const { return bumps_; }
  bool is_zero() const { return gaussians_.empty() && bumps_.empty(); }

  double value(double x) const { return derivative(x, 0); }
  double derivative(double x, int order) const;
  /// f(x), f'(x), ..., f^{(order)}(x).
  Eigen::VectorXd derivatives(double x, int order) const;

  /// int_x^inf f. Gaussian terms in closed form (erfc recursion in the power),
  /// bumps by adaptive quadrature.
  double tail_integral(double x) const;

  /// Interval outside which every term and its derivatives are below
  /// roughly 1e-20 of their peak; empty profiles give (0, 0).
  std::pair<double, double> support() const;
  /// Term centers and support edges, for splitting quadratures.
  std::vector<double> breakpoints() const;

  FieldProfile scaled(double s) const;
  friend FieldProfile operator+(const FieldProfile& a, const FieldProfile& b);
  friend bool operator==(const FieldProfile& a, const FieldProfile& b) {
    return a.gaussians_ == b.gaussians_ && a.bumps_ == b.bumps_;
  }

 private:
  void build_tables();

  std::vector<Gaussian> gaussians_;
  std::vector<Bump> bumps_;
  // derivative numerators per term: P_k(u) exp(-sigma u^2) and Q_k(s) exp(-1/(1-s^2)) / (1-s^2)^{2k}
  // kept as raw coefficient vectors: trimming would drop small leading terms that matter far out
  std::vector<std::vector<Eigen::VectorXd>> gaussian_polys_;
  std::vector<std::vector<Eigen::VectorXd>> bump_polys_;
};

}  // namespace lambscat

#endif  // LAMBSCAT_PROFILE_HPP
