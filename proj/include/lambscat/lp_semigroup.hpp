#ifndef LAMBSCAT_LP_SEMIGROUP_HPP
#define LAMBSCAT_LP_SEMIGROUP_HPP

#include "lambscat/roots.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace lambscat {

using ComplexMatrix = Eigen::MatrixXcd;

/// Generator and Gram matrix of the translation semigroup restricted to
/// span{x^k e^{z_j x}, k < nu_j} on (-inf, 0].
struct LPSemigroup {
  std::vector<Root> roots;
  int dim = 0;
  ComplexMatrix B;
  /// gram(r, c) = int_{-inf}^0 conj(phi_r) phi_c.
  ComplexMatrix gram;
  /// (root index, power) of each basis function, in matrix order.
  std::vector<std::pair<int, int>> basis;
};

/// Uses the resonances of a classified set, otherwise all roots. Throws
/// RootInLeftHalfPlane if any root has Re z <= 0 and IllConditioned if the
/// Gram matrix fails its Cholesky factorization.
LPSemigroup build_lp_semigroup(const RootSet& roots);

/// exp(-t B) by scaling and squaring.
ComplexMatrix lp_propagator(const LPSemigroup& sg, double t);

/// Translation by t in coefficient space: binom(k, i) (-t)^{k-i} e^{-z t} per block.
ComplexMatrix lp_analytic_propagator(const LPSemigroup& sg, double t);

/// Operator norm of m in the Gram inner product.
double g_norm(const LPSemigroup& sg, const ComplexMatrix& m);

struct LPEvolveCheck {
  double deviation = 0.0;  // max |exp(-tB) - analytic| entrywise
  double g_norm = 0.0;     // |exp(-tB)|_G
};

LPEvolveCheck lp_evolve_check(const LPSemigroup& sg, double t);

/// Smallest eigenvalue of G B + B* G; >= 0 iff the semigroup contracts.
double dissipativity_margin(const LPSemigroup& sg);

}  // namespace lambscat

#endif  // LAMBSCAT_LP_SEMIGROUP_HPP
