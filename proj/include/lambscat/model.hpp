#ifndef LAMBSCAT_MODEL_HPP
#define LAMBSCAT_MODEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <vector>

namespace lambscat {

/// A generalized Lamb model given in the eigenbasis of L with a diagonal
/// metric <x,y> = sum_i g_i x_i y_i.
struct ModelSpec {
  Eigen::VectorXd eigenvalues;
  Eigen::VectorXd coupling;
  std::optional<Eigen::VectorXd> metric;  // all ones when absent
  double theta = 0.0;

  int n() const { return static_cast<int>(eigenvalues.size()); }
};

/// The model in orthonormal eigen-coordinates: L = diag(lambda),
/// w -> c with c_i = sqrt(g_i) w_i. Immutable once built.
class NormalizedModel {
 public:
  /// Validates distinctness and nonzero coupling; see normalize().
  NormalizedModel(Eigen::VectorXd lambda, Eigen::VectorXd c, double theta);

  int n() const { return static_cast<int>(lambda_.size()); }
  const Eigen::VectorXd& lambda() const { return lambda_; }
  const Eigen::VectorXd& c() const { return c_; }
  double theta() const { return theta_; }

  /// mu_k = sum_i c_i^2 lambda_i^k = <w, L^k w>, for 0 <= k <= 2n.
  double moment(int k) const { return moments_(k); }
  const Eigen::VectorXd& moments() const { return moments_; }

  /// Degree of the boundary polynomial: 2n+1, or 2n when theta == 0.
  int boundary_degree() const { return theta_ != 0.0 ? 2 * n() + 1 : 2 * n(); }

 private:
  Eigen::VectorXd lambda_;
  Eigen::VectorXd c_;
  double theta_;
  Eigen::VectorXd moments_;
};

/// Masses, springs and string tension of an oscillator chain whose first
/// mass is attached to the end of the string.
struct ChainSpec {
  Eigen::VectorXd masses;
  Eigen::VectorXd springs;
  double tension = 1.0;
};

NormalizedModel normalize(const ModelSpec& spec);

/// Undoes the metric scaling: w_i = c_i / sqrt(g_i).
Eigen::VectorXd denormalize_coupling(const NormalizedModel& model, const Eigen::VectorXd& metric);

/// Indices i with zero coupling, after applying the metric.
std::vector<int> zero_coupling_indices(const ModelSpec& spec);

/// Drops the oscillator modes that do not couple to the field; the dropped
/// modes evolve freely and decouple from the rest of the model.
ModelSpec project_out_zero_coupling(const ModelSpec& spec);

/// The chain's stiffness operator L, in the original coordinates (not symmetric).
Eigen::MatrixXd chain_matrix(const ChainSpec& chain);

/// D L D^{-1} with D = diag(sqrt(M_j / T)); symmetric tridiagonal.
Eigen::MatrixXd chain_symmetrized_matrix(const ChainSpec& chain);

NormalizedModel build_chain(const ChainSpec& chain);

/// Gamma(z) = -(1/sqrt z + sum_i c_i^2 / (z - lambda_i)), principal branch.
std::complex<double> gamma(const NormalizedModel& model, std::complex<double> z);

/// Closed-form pairing of the defect vectors G_u and G_z entering the
/// resolvent identity: 1/(sqrt u sqrt z (sqrt u + sqrt z)) + sum c_i^2/((u-l_i)(z-l_i)).
std::complex<double> defect_pairing(const NormalizedModel& model, std::complex<double> u,
                                    std::complex<double> z);

/// |Gamma(z) - Gamma(u) - (z - u) * pairing(u, z)|.
double krein_identity_residual(const NormalizedModel& model, std::complex<double> z,
                               std::complex<double> u);

}  // namespace lambscat

#endif  // LAMBSCAT_MODEL_HPP
