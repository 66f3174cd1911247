#ifndef LAMBSCAT_SPECTRAL_HPP
#define LAMBSCAT_SPECTRAL_HPP

#include "lambscat/model.hpp"

#include <limits>
#include <vector>

namespace lambscat {

struct Interval {
  double lower;
  double upper;
};

/// Eigenfunction (e^{-x s}, y) for the eigenvalue lambda = x^2, where
/// x = sqrt(lambda) is the decay rate of the field part.
struct BoundState {
  double lambda = 0.0;
  double decay_rate = 0.0;
  Eigen::VectorXd y;
  double norm_sq = 0.0;  // 1/(2x) + |y|^2
};

struct SpectralData {
  Interval essential{-std::numeric_limits<double>::infinity(), 0.0};
  std::vector<double> eigenvalues;  // ascending
  std::vector<BoundState> bound_states;
  bool pp_empty = true;
};

/// True iff every eigenvalue of L is negative and theta <= 0.
bool pp_empty_check(const NormalizedModel& model);

/// f(x) = 1/x + sum_i c_i^2 / (x^2 - lambda_i) - theta; positive roots of f
/// are the square roots of the eigenvalues.
double eigen_equation(const NormalizedModel& model, double x);

/// Scans every pole-free piece of (0, X_max] for sign changes of f and
/// refines them by bisection. Throws ScanIncomplete when f still changes
/// sign on [X_max, 10 X_max].
SpectralData point_spectrum(const NormalizedModel& model);

/// Always (-inf, 0].
Interval essential_spectrum(const NormalizedModel& model);

/// y_lambda = -x (x^2 - lambda_i)^{-1} c_i, componentwise.
Eigen::VectorXd bound_state_vector(const NormalizedModel& model, double x);

}  // namespace lambscat

#endif  // LAMBSCAT_SPECTRAL_HPP
