#ifndef LAMBSCAT_ROOTS_HPP
#define LAMBSCAT_ROOTS_HPP

#include "lambscat/model.hpp"
#include "lambscat/polynomial.hpp"

#include <complex>
#include <vector>

namespace lambscat {

struct Root {
  std::complex<double> value;
  int multiplicity = 1;
};

struct RootSet {
  std::vector<Root> roots;        // distinct roots, sorted by (Re, Im)
  std::vector<Root> eigen_roots;  // Re z < 0, real; filled by classify_roots
  std::vector<Root> resonances;   // Re z > 0; filled by classify_roots
  double max_residual = 0.0;      // max |p(z)| / sum_k |p_k||z|^k over the roots
  int iterations = 0;

  int total_multiplicity() const;
  bool classified = false;
};

struct RootFinderOptions {
  int max_iterations = 500;
  double cluster_radius = 1e-7;
  double residual_tolerance = 1e-10;
};

/// All complex roots of p by Aberth-Ehrlich simultaneous iteration on the
/// monic normalization, started on a circle of radius 1 + max|a_k / a_N|,
/// then one Newton polish per root. Roots closer than the cluster radius are
/// merged into one root with multiplicity; non-real roots are paired with
/// their exact conjugates.
RootSet find_roots(const RealPolynomial& p, const RootFinderOptions& options = {});

/// Splits the roots into eigenvalue roots (Re z < 0, lambda = z^2) and
/// resonances (Re z > 0). ImaginaryAxisRoot when the sign of Re z is not
/// resolved: |Re z| within the inclusion radius deg |p/p'| of a simple root,
/// or below 1e-8 for a multiple one.
RootSet classify_roots(const NormalizedModel& model, RootSet roots);

/// lambda = z^2 for every eigen root (with multiplicity), ascending.
std::vector<double> eigenvalues_from_roots(const RootSet& roots);

/// min Re z over the resonances; +inf when there are none.
double min_resonance_decay(const RootSet& roots);

}  // namespace lambscat

#endif  // LAMBSCAT_ROOTS_HPP
