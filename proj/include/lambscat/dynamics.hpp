#ifndef LAMBSCAT_DYNAMICS_HPP
#define LAMBSCAT_DYNAMICS_HPP

#include "lambscat/characteristics.hpp"
#include "lambscat/model.hpp"
#include "lambscat/potential.hpp"
#include "lambscat/profile.hpp"

#include <memory>
#include <string>
#include <vector>

namespace lambscat {

enum class DataMode { ClassD, Compatible };

struct InitialData {
  FieldProfile phi0;
  FieldProfile phidot0;
  Eigen::VectorXd y0;
  Eigen::VectorXd ydot0;
  DataMode mode = DataMode::Compatible;
};

/// v(phi) with v_k = p_k(d/dx) phi(0+), k = 1..n, from derivatives
/// phi(0), phi'(0), ..., phi^{(2n-1)}(0) (shorter vectors are zero-padded).
Eigen::VectorXd boundary_vector(const NormalizedModel& model, const Eigen::VectorXd& derivs_at_zero);

/// M = V W with V_{ki} = lambda_i^{k-1} and W = diag(c).
Eigen::MatrixXd class_d_matrix(const NormalizedModel& model);

/// y = M^{-1} v(phi), solved with partial pivoting. Throws SingularM.
Eigen::VectorXd lift_class_D(const NormalizedModel& model, const FieldProfile& phi);
Eigen::VectorXd lift_class_D(const NormalizedModel& model, const Eigen::VectorXd& derivs_at_zero);

/// Oscillator state slaved to the field: y0 = M^{-1} v(phi0), ydot0 = M^{-1} v(phidot0).
InitialData make_class_d_data(const NormalizedModel& model, FieldProfile phi0, FieldProfile phidot0);

/// User-supplied oscillator state. With theta = 0 the form-domain constraint
/// phi0(0) = <c, y0> must hold to 1e-10 (ConstraintViolation otherwise).
InitialData make_compatible_data(const NormalizedModel& model, FieldProfile phi0, FieldProfile phidot0,
                                 Eigen::VectorXd y0, Eigen::VectorXd ydot0);

/// (phi0, -phidot0, y0, -ydot0).
InitialData time_reversed(const InitialData& data);

std::shared_ptr<const Characteristics> build_characteristics(const InitialData& data);

struct EvolveOptions {
  double final_time = 20.0;
  double dt = 1e-3;
  std::shared_ptr<const Potential> potential;  // null: linear force L y
};

/// Reduced-ODE solution sampled on a uniform time grid, with cubic Hermite
/// dense output for b and b'.
class Trajectory {
 public:
  const NormalizedModel& model() const { return model_; }
  const Characteristics& characteristics() const { return *chars_; }
  std::shared_ptr<const Characteristics> characteristics_ptr() const { return chars_; }
  const std::shared_ptr<const Potential>& potential() const { return potential_; }

  int steps() const { return static_cast<int>(t_.size()) - 1; }
  double dt() const { return dt_; }
  double final_time() const { return t_.back(); }
  /// Dimension of the integrated state: 2n+1, or 2n when theta = 0.
  int state_dimension() const { return state_dim_; }

  const std::vector<double>& times() const { return t_; }
  /// Column k holds y(t_k).
  const Eigen::MatrixXd& y() const { return y_; }
  const Eigen::MatrixXd& ydot() const { return ydot_; }
  const Eigen::VectorXd& b() const { return b_; }
  const Eigen::VectorXd& bp() const { return bp_; }
  const Eigen::VectorXd& bpp() const { return bpp_; }
  /// Total energy at each step, from the running field integrals.
  const Eigen::VectorXd& energy() const { return energy_; }
  double max_relative_drift() const;
  double max_boundary_residual() const { return boundary_residual_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// b^{(k)}(s), k = 0, 1, 2: from the data for s <= 0, from dense output on [0, T].
  double b_at(double s, int k = 0) const;
  double a_at(double u, int k = 0) const { return chars_->a(u, k); }

  /// int_{-inf}^t b'^2, with the dense part integrated exactly cell by cell.
  double outgoing_energy_until(double t) const;
  /// int_t^inf a'^2 by adaptive quadrature.
  double incoming_energy_from(double t) const;

  /// Index of the grid time equal to t (to 1e-9 relative); OutOfRange otherwise.
  int step_index(double t) const;

 private:
  friend Trajectory evolve(const NormalizedModel&, std::shared_ptr<const Characteristics>,
                           const Eigen::VectorXd&, const Eigen::VectorXd&, const EvolveOptions&);
  explicit Trajectory(NormalizedModel model) : model_(std::move(model)) {}

  NormalizedModel model_;
  std::shared_ptr<const Characteristics> chars_;
  std::shared_ptr<const Potential> potential_;
  double dt_ = 0.0;
  int state_dim_ = 0;
  std::vector<double> t_;
  Eigen::MatrixXd y_, ydot_;
  Eigen::VectorXd b_, bp_, bpp_, energy_;
  double boundary_residual_ = 0.0;
  std::vector<std::string> warnings_;
};

/// Classical RK4 on the boundary reduction of the coupled system:
///   theta != 0: state (b, y, y'), b' = a'(t) + (a + b - <c,y>)/theta,
///   theta == 0: state (y, y'), b = <c,y> - a(t),
/// with y'' = L y + c phi_x(t, 0+) (or -grad V(y) + c phi_x).
Trajectory evolve(const NormalizedModel& model, const InitialData& data, const EvolveOptions& options);

/// Same, starting from arbitrary characteristics and oscillator state.
Trajectory evolve(const NormalizedModel& model, std::shared_ptr<const Characteristics> chars,
                  const Eigen::VectorXd& y0, const Eigen::VectorXd& ydot0, const EvolveOptions& options);

struct EnergyBreakdown {
  double field_gradient = 0.0;      // |phi'|^2 / 2
  double field_kinetic = 0.0;       // |phidot|^2 / 2
  double oscillator_kinetic = 0.0;  // |y'|^2 / 2
  double oscillator_potential = 0.0;
  double boundary = 0.0;            // -(phi(0) - <c,y>)^2 / (2 theta)
  double total = 0.0;

  /// Q + |phidot|^2 + |y'|^2, the squared norm in which the translation
  /// representations are isometric; equals 2 * total.
  double energy_norm_sq() const { return 2.0 * total; }
};

/// Energy of the state at grid time t, with the field integrals evaluated
/// directly by quadrature of a'(x + t) and b'(t - x).
EnergyBreakdown energy(const Trajectory& traj, double t);

/// Energy of initial data from the profiles themselves (no evolution).
EnergyBreakdown initial_energy(const NormalizedModel& model, const InitialData& data,
                               const Potential* potential = nullptr);

struct FieldSample {
  double x;
  double phi;
  double phidot;
};

/// phi(t, x) = a(x + t) + b(t - x) and phidot(t, x) = a'(x + t) + b'(t - x).
std::vector<FieldSample> field_snapshot(const Trajectory& traj, double t, const std::vector<double>& xs);

/// Least-squares slope of log |(y, y')| over [t0, t1].
double fit_decay_rate(const Trajectory& traj, double t0, double t1);

}  // namespace lambscat

#endif  // LAMBSCAT_DYNAMICS_HPP
