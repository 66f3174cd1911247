#include "lambscat/lp_semigroup.hpp"

#include "lambscat/errors.hpp"
#include "lambscat/jacobi_eigen.hpp"
#include "lambscat/matrix_exp.hpp"

#include <cmath>
#include <sstream>

namespace lambscat {

namespace {

using cd = std::complex<double>;

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

Eigen::MatrixXcd gram_cholesky_factor(const LPSemigroup& sg) {
  Eigen::LLT<Eigen::MatrixXcd> llt(sg.gram);
  if (llt.info() != Eigen::Success) throw Error(ErrorCode::IllConditioned, "gram matrix is not positive definite");
  return llt.matrixL();
}

}  // namespace

LPSemigroup build_lp_semigroup(const RootSet& roots) {
  LPSemigroup sg;
  if (roots.classified) {
    if (!roots.eigen_roots.empty())
      throw Error(ErrorCode::RootInLeftHalfPlane, "point spectrum present; the semigroup needs Re z > 0 for all roots");
    sg.roots = roots.resonances;
  } else {
    sg.roots = roots.roots;
  }
  for (const Root& r : sg.roots) {
    if (!(r.value.real() > 0.0)) {
      std::ostringstream os;
      os.precision(17);
      os << "root " << r.value.real() << (r.value.imag() < 0 ? " - " : " + ") << std::abs(r.value.imag())
         << "i has Re z <= 0";
      throw Error(ErrorCode::RootInLeftHalfPlane, os.str());
    }
  }

  for (int j = 0; j < static_cast<int>(sg.roots.size()); ++j)
    for (int k = 0; k < sg.roots[j].multiplicity; ++k) sg.basis.emplace_back(j, k);
  sg.dim = static_cast<int>(sg.basis.size());

  sg.B = ComplexMatrix::Zero(sg.dim, sg.dim);
  for (int r = 0; r < sg.dim; ++r) {
    const auto [j, k] = sg.basis[r];
    sg.B(r, r) = sg.roots[j].value;
    if (k > 0) sg.B(r - 1, r) = static_cast<double>(k);
  }

  // int_{-inf}^0 x^K e^{w x} dx = (-1)^K K! / w^{K+1}
  sg.gram.resize(sg.dim, sg.dim);
  for (int r = 0; r < sg.dim; ++r) {
    for (int c = 0; c < sg.dim; ++c) {
      const int K = sg.basis[r].second + sg.basis[c].second;
      const cd w = std::conj(sg.roots[sg.basis[r].first].value) + sg.roots[sg.basis[c].first].value;
      const double sign = K % 2 ? -1.0 : 1.0;
      sg.gram(r, c) = sign * std::tgamma(K + 1.0) / std::pow(w, K + 1);
    }
  }
  gram_cholesky_factor(sg);
  return sg;
}

ComplexMatrix lp_propagator(const LPSemigroup& sg, double t) {
  return matrix_exponential(ComplexMatrix(-t * sg.B));
}

ComplexMatrix lp_analytic_propagator(const LPSemigroup& sg, double t) {
  ComplexMatrix z = ComplexMatrix::Zero(sg.dim, sg.dim);
  for (int r = 0; r < sg.dim; ++r) {
    const auto [j, i] = sg.basis[r];
    const cd decay = std::exp(-sg.roots[j].value * t);
    for (int c = r; c < sg.dim && sg.basis[c].first == j; ++c) {
      const int k = sg.basis[c].second;
      z(r, c) = binomial(k, i) * std::pow(-t, k - i) * decay;
    }
  }
  return z;
}

double g_norm(const LPSemigroup& sg, const ComplexMatrix& m) {
  // G = L L*, |M|_G = |L* M L^{-*}|_2
  const ComplexMatrix L = gram_cholesky_factor(sg);
  const ComplexMatrix Lstar = L.adjoint();
  const ComplexMatrix y = Lstar.triangularView<Eigen::Upper>()
                              .solve<Eigen::OnTheRight>(Lstar * m);
  const ComplexMatrix yy = y.adjoint() * y;
  const auto eig = jacobi_eigen(yy);
  return std::sqrt(std::max(0.0, eig.eigenvalues.maxCoeff()));
}

LPEvolveCheck lp_evolve_check(const LPSemigroup& sg, double t) {
  LPEvolveCheck out;
  if (sg.dim == 0) return out;
  const ComplexMatrix num = lp_propagator(sg, t);
  out.deviation = (num - lp_analytic_propagator(sg, t)).cwiseAbs().maxCoeff();
  out.g_norm = g_norm(sg, num);
  return out;
}

double dissipativity_margin(const LPSemigroup& sg) {
  if (sg.dim == 0) return 0.0;
  const ComplexMatrix h = sg.gram * sg.B + sg.B.adjoint() * sg.gram;
  return jacobi_eigen(h).eigenvalues.minCoeff();
}

}  // namespace lambscat
