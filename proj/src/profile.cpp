#include "lambscat/profile.hpp"

#include "lambscat/errors.hpp"
#include "lambscat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace lambscat {

namespace {

using Eigen::VectorXd;

VectorXd poly_derivative(const VectorXd& p) {
  if (p.size() <= 1) return VectorXd::Zero(1);
  VectorXd d(p.size() - 1);
  for (Eigen::Index k = 1; k < p.size(); ++k) d(k - 1) = double(k) * p(k);
  return d;
}

// p * (c0 + c1 s + c2 s^2)
VectorXd poly_mul_quadratic(const VectorXd& p, double c0, double c1, double c2) {
  VectorXd out = VectorXd::Zero(p.size() + 2);
  out.head(p.size()) += c0 * p;
  out.segment(1, p.size()) += c1 * p;
  out.tail(p.size()) += c2 * p;
  return out;
}

VectorXd poly_add(const VectorXd& a, const VectorXd& b) {
  VectorXd out = VectorXd::Zero(std::max(a.size(), b.size()));
  out.head(a.size()) += a;
  out.head(b.size()) += b;
  return out;
}

// beyond this exponent every derivative term underflows
constexpr double kExpCutoff = 700.0;

double gaussian_reach(const FieldProfile::Gaussian& g) {
  const double u0 = std::sqrt(46.0 / g.sigma);
  const double extra = 2.0 * (g.power + 4) * std::log(2.0 + u0 * std::sqrt(g.sigma));
  return std::sqrt((50.0 + extra) / g.sigma);
}

// int_l^inf u^q exp(-sigma u^2) du
double gaussian_moment_tail(double l, double sigma, int q) {
  const double e = std::exp(-sigma * l * l);
  double i0 = 0.5 * std::sqrt(std::numbers::pi / sigma) * std::erfc(std::sqrt(sigma) * l);
  if (q == 0) return i0;
  double i1 = e / (2.0 * sigma);
  if (q == 1) return i1;
  // I_q = l^{q-1} e / (2 sigma) + (q-1)/(2 sigma) I_{q-2}
  double prev2 = i0, prev1 = i1;
  double cur = 0.0;
  for (int k = 2; k <= q; ++k) {
    cur = std::pow(l, k - 1) * e / (2.0 * sigma) + (k - 1) / (2.0 * sigma) * prev2;
    prev2 = prev1;
    prev1 = cur;
  }
  return cur;
}

}  // namespace

FieldProfile::FieldProfile(std::vector<Gaussian> gaussians, std::vector<Bump> bumps)
    : gaussians_(std::move(gaussians)), bumps_(std::move(bumps)) {
  for (const auto& g : gaussians_) {
    if (!(g.sigma > 0) || g.power < 0 || !std::isfinite(g.amplitude) || !std::isfinite(g.center))
      throw Error(ErrorCode::ConfigError, "gaussian term needs sigma > 0, power >= 0 and finite values");
  }
  for (const auto& b : bumps_) {
    if (!(b.radius > 0) || !std::isfinite(b.amplitude) || !std::isfinite(b.center))
      throw Error(ErrorCode::ConfigError, "bump term needs radius > 0 and finite values");
    if (b.center - b.radius < 0)
      throw Error(ErrorCode::ConfigError, "bump support must lie in [0, inf)");
  }
  build_tables();
}

FieldProfile FieldProfile::gaussian(double amplitude, double center, double sigma, int power) {
  return FieldProfile({Gaussian{amplitude, center, sigma, power}}, {});
}

FieldProfile FieldProfile::bump(double amplitude, double center, double radius) {
  return FieldProfile({}, {Bump{amplitude, center, radius}});
}

void FieldProfile::build_tables() {
  gaussian_polys_.clear();
  bump_polys_.clear();
  for (const auto& g : gaussians_) {
    std::vector<VectorXd> table;
    VectorXd p = VectorXd::Zero(g.power + 1);
    p(g.power) = g.amplitude;
    table.push_back(p);
    for (int k = 0; k < kMaxOrder; ++k) {
      // P_{k+1} = P_k' - 2 sigma u P_k
      p = poly_add(poly_derivative(p), poly_mul_quadratic(p, 0.0, -2.0 * g.sigma, 0.0));
      table.push_back(p);
    }
    gaussian_polys_.push_back(std::move(table));
  }
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    std::vector<VectorXd> table;
    VectorXd q = VectorXd::Ones(1);
    table.push_back(q);
    for (int k = 0; k < kMaxOrder; ++k) {
      // Q_{k+1} = (Q_k' (1 - s^2) + 4 k s Q_k)(1 - s^2) - 2 s Q_k
      const VectorXd inner =
          poly_add(poly_mul_quadratic(poly_derivative(q), 1.0, 0.0, -1.0), poly_mul_quadratic(q, 0.0, 4.0 * k, 0.0));
      q = poly_add(poly_mul_quadratic(inner, 1.0, 0.0, -1.0), poly_mul_quadratic(q, 0.0, -2.0, 0.0));
      table.push_back(q);
    }
    bump_polys_.push_back(std::move(table));
  }
}

double FieldProfile::derivative(double x, int order) const {
  if (order < 0 || order > kMaxOrder)
    throw Error(ErrorCode::OutOfRange, "derivative order " + std::to_string(order) + " not supported");
  double acc = 0.0;
  for (std::size_t i = 0; i < gaussians_.size(); ++i) {
    const auto& g = gaussians_[i];
    const double u = x - g.center;
    const double ex = g.sigma * u * u;
    if (ex > kExpCutoff) continue;
    acc += horner(gaussian_polys_[i][static_cast<std::size_t>(order)], u) * std::exp(-ex);
  }
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const auto& b = bumps_[i];
    const double s = (x - b.center) / b.radius;
    const double one_minus = 1.0 - s * s;
    if (one_minus <= 0.0) continue;
    const double logw = -1.0 / one_minus - 2.0 * order * std::log(one_minus);
    if (-logw > kExpCutoff) continue;
    acc += b.amplitude * horner(bump_polys_[i][static_cast<std::size_t>(order)], s) * std::exp(logw) /
           std::pow(b.radius, order);
  }
  return acc;
}

Eigen::VectorXd FieldProfile::derivatives(double x, int order) const {
  Eigen::VectorXd out(order + 1);
  for (int k = 0; k <= order; ++k) out(k) = derivative(x, k);
  return out;
}

double FieldProfile::tail_integral(double x) const {
  double acc = 0.0;
  for (const auto& g : gaussians_)
    acc += g.amplitude * gaussian_moment_tail(x - g.center, g.sigma, g.power);
  for (std::size_t i = 0; i < bumps_.size(); ++i) {
    const auto& b = bumps_[i];
    const double lo = std::max(x, b.center - b.radius), hi = b.center + b.radius;
    if (lo >= hi) continue;
    const FieldProfile single({}, {b});
    acc += integrate([&](double t) { return single.value(t); }, lo, hi, std::vector<double>{b.center}).value;
  }
  return acc;
}

std::pair<double, double> FieldProfile::support() const {
  if (is_zero()) return {0.0, 0.0};
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& g : gaussians_) {
    const double r = gaussian_reach(g);
    lo = std::min(lo, g.center - r);
    hi = std::max(hi, g.center + r);
  }
  for (const auto& b : bumps_) {
    lo = std::min(lo, b.center - b.radius);
    hi = std::max(hi, b.center + b.radius);
  }
  return {std::max(lo, 0.0), std::max(hi, 0.0)};
}

std::vector<double> FieldProfile::breakpoints() const {
  std::vector<double> out;
  for (const auto& g : gaussians_) {
    const double r = gaussian_reach(g);
    out.insert(out.end(), {g.center - r, g.center, g.center + r});
  }
  for (const auto& b : bumps_) out.insert(out.end(), {b.center - b.radius, b.center, b.center + b.radius});
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

FieldProfile FieldProfile::scaled(double s) const {
  auto g = gaussians_;
  auto b = bumps_;
  for (auto& t : g) t.amplitude *= s;
  for (auto& t : b) t.amplitude *= s;
  return FieldProfile(std::move(g), std::move(b));
}

FieldProfile operator+(const FieldProfile& a, const FieldProfile& b) {
  auto g = a.gaussians_;
  auto bs = a.bumps_;
  g.insert(g.end(), b.gaussians_.begin(), b.gaussians_.end());
  bs.insert(bs.end(), b.bumps_.begin(), b.bumps_.end());
  return FieldProfile(std::move(g), std::move(bs));
}

}  // namespace lambscat
