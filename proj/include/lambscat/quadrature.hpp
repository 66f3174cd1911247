#ifndef LAMBSCAT_QUADRATURE_HPP
#define LAMBSCAT_QUADRATURE_HPP

#include <array>
#include <functional>
#include <vector>

namespace lambscat {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_subdivisions = 4000;
};

/// Adaptive Gauss-Kronrod (7/15) on [a, b], bisecting the panel with the
/// largest error estimate. Throws QuadratureFailure when the requested
/// tolerance is not met within the subdivision budget.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& options = {});

/// Same, with the interval pre-split at the given interior breakpoints.
/// Breakpoints outside (a, b) are ignored.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::vector<double> breakpoints, const QuadratureOptions& options = {});

/// 4-point Gauss-Legendre nodes and weights on [-1, 1].
inline constexpr std::array<double, 4> kGauss4Nodes = {
    -0.861136311594052575224, -0.339981043584856264803, 0.339981043584856264803,
    0.861136311594052575224};
inline constexpr std::array<double, 4> kGauss4Weights = {
    0.347854845137453857373, 0.652145154862546142627, 0.652145154862546142627,
    0.347854845137453857373};

/// Fixed 4-point Gauss-Legendre rule on [a, b].
template <typename F>
double gauss4(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 4; ++i) acc += kGauss4Weights[i] * f(mid + half * kGauss4Nodes[i]);
  return half * acc;
}

}  // namespace lambscat

#endif  // LAMBSCAT_QUADRATURE_HPP
