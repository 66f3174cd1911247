#ifndef LAMBSCAT_SCATTERING_HPP
#define LAMBSCAT_SCATTERING_HPP

#include "lambscat/dynamics.hpp"
#include "lambscat/model.hpp"
#include "lambscat/polynomial.hpp"

#include <complex>
#include <vector>

namespace lambscat {

struct ScatterOptions {
  double X = 60.0;
  double h = 0.01;
  double dt = 0.0;  // integrator step; 0 means h / 10
  /// fail with InsufficientDecay when the estimated mass outside [-X, X]
  /// exceeds this fraction of the energy norm
  double truncation_tolerance = 1e-6;

  double step() const { return dt > 0.0 ? dt : h / 10.0; }
};

/// Incoming (f_minus = a') and outgoing (f_plus = b') profiles sampled on
/// the uniform grid x_j = -X + j h.
struct TranslationRep {
  double X = 0.0;
  double h = 0.0;
  std::vector<double> x;
  Eigen::VectorXd f_minus;
  Eigen::VectorXd f_plus;
  bool minus_complete = false;  // f_minus known on all of [-X, X]
  bool plus_complete = false;
  double truncation_mass = 0.0;
  /// 2E: the squared norm each complete profile should carry.
  double energy_norm_sq = 0.0;

  /// Trapezoid L2 norms over the grid.
  double norm_sq_minus() const;
  double norm_sq_plus() const;
};

/// Throws PointSpectrumPresent, listing the eigenvalues, unless the point
/// spectrum is empty.
void require_pp_empty(const NormalizedModel& model);

/// f_plus on [-X, X] (data for x <= 0, forward run for x > 0); f_minus on [0, X].
TranslationRep outgoing_rep(const NormalizedModel& model, const InitialData& data, const ScatterOptions& options);

/// f_minus on [-X, X], the negative half from the time-reversed run via
/// a'(-s) = -b~'(s); f_plus on [-X, 0].
TranslationRep incoming_rep(const NormalizedModel& model, const InitialData& data, const ScatterOptions& options);

/// Both profiles on all of [-X, X] (one forward and one reversed run).
TranslationRep translation_reps(const NormalizedModel& model, const InitialData& data, const ScatterOptions& options);

/// s(kappa) = -p(i kappa) / p(-i kappa), for the Fourier convention
/// f^(kappa) = int f(x) exp(-i kappa x) dx.
struct TransferFunction {
  RealPolynomial p;
  std::complex<double> operator()(double kappa) const;
};

TransferFunction make_transfer_function(const NormalizedModel& model);
std::vector<std::complex<double>> transfer_eval(const TransferFunction& tf, const std::vector<double>& kappas);

/// Trapezoid rule for int f(x) exp(-i kappa x) dx on a uniform grid.
std::vector<std::complex<double>> fourier_trapezoid(const std::vector<double>& x, const Eigen::VectorXd& f,
                                                    const std::vector<double>& kappas);

/// kappa_m = pi m / X for |m| <= X / (2h).
std::vector<double> dft_frequencies(double X, double h);

struct ParsevalCheck {
  double energy_norm_sq = 0.0;
  double norm_sq_minus = 0.0;
  double norm_sq_plus = 0.0;
  double sum_error = 0.0;    // |2E - (|f-|^2 + |f+|^2)| / 2E
  double minus_error = 0.0;  // |2E - 2|f-|^2| / 2E
};

ParsevalCheck parseval_check(const TranslationRep& rep);

/// |f+^ - s f-^|_2 / |f-^|_2 over the DFT frequencies; 0 for zero data.
double scattering_relation_error(const TranslationRep& rep, const TransferFunction& tf);
double verify_scattering_relation(const NormalizedModel& model, const InitialData& data, const ScatterOptions& options);

/// sup_x |f+^{(t)}(x) - f+(x + t)| where f+^{(t)} is the outgoing profile
/// of the state reached at time t (restarted from the trajectory).
double translation_covariance_check(const NormalizedModel& model, const InitialData& data, double t,
                                    const ScatterOptions& options);

}  // namespace lambscat

#endif  // LAMBSCAT_SCATTERING_HPP
