#ifndef LAMBSCAT_JACOBI_EIGEN_HPP
#define LAMBSCAT_JACOBI_EIGEN_HPP

// Cyclic Jacobi eigensolver for small dense self-adjoint matrices, real
// symmetric or complex Hermitian. Intended for n up to a few dozen.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <type_traits>
#include <vector>

namespace lambscat {

namespace detail {
template <typename T>
struct is_complex : std::false_type {};
template <typename T>
struct is_complex<std::complex<T>> : std::true_type {};
}  // namespace detail

template <typename Scalar>
struct SelfAdjointEigen {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Eigen::Matrix<Real, Eigen::Dynamic, 1> eigenvalues;                 // ascending
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> eigenvectors;  // columns
  int sweeps = 0;
  bool converged = false;
};

/// Diagonalizes the self-adjoint part of `a` by cyclic Jacobi rotations.
/// Only the upper triangle is trusted; the lower one is mirrored from it.
template <typename Derived>
SelfAdjointEigen<typename Derived::Scalar> jacobi_eigen(
    const Eigen::MatrixBase<Derived>& a, int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

  const Eigen::Index n = a.rows();
  Matrix m = a;
  for (Eigen::Index i = 0; i < n; ++i) {
    m(i, i) = Scalar(std::real(m(i, i)));
    for (Eigen::Index j = i + 1; j < n; ++j) {
      if constexpr (detail::is_complex<Scalar>::value) {
        m(j, i) = std::conj(m(i, j));
      } else {
        m(j, i) = m(i, j);
      }
    }
  }
  Matrix v = Matrix::Identity(n, n);

  SelfAdjointEigen<Scalar> out;
  const Real eps = std::numeric_limits<Real>::epsilon();
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    Real off = 0, diag = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
      diag += std::norm(m(i, i));
      for (Eigen::Index j = i + 1; j < n; ++j) off += std::norm(m(i, j));
    }
    out.sweeps = sweep;
    if (off <= eps * eps * diag || off == Real(0)) {
      out.converged = true;
      break;
    }
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Real apq = std::abs(m(p, q));
        if (apq == Real(0)) continue;
        const Real app = std::real(m(p, p));
        const Real aqq = std::real(m(q, q));
        // phase makes the (p,q) entry real and positive before rotating
        Scalar phase = Scalar(1);
        if constexpr (detail::is_complex<Scalar>::value) {
          phase = m(p, q) / apq;
        } else {
          phase = m(p, q) > 0 ? Scalar(1) : Scalar(-1);
        }
        const Real tau = (aqq - app) / (2 * apq);
        const Real t = (tau >= 0 ? Real(1) : Real(-1)) /
                       (std::abs(tau) + std::sqrt(Real(1) + tau * tau));
        const Real c = Real(1) / std::sqrt(Real(1) + t * t);
        const Real s = t * c;
        // U restricted to (p,q): [[c, s*phase], [-s*conj(phase)... ]] acting on columns
        const Scalar u_pp = c;
        const Scalar u_pq = s * phase;
        Scalar u_qp, u_qq = c;
        if constexpr (detail::is_complex<Scalar>::value) {
          u_qp = -s * std::conj(phase);
        } else {
          u_qp = -s * phase;
        }
        // columns: M <- M U
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar mkp = m(k, p), mkq = m(k, q);
          m(k, p) = mkp * u_pp + mkq * u_qp;
          m(k, q) = mkp * u_pq + mkq * u_qq;
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = vkp * u_pp + vkq * u_qp;
          v(k, q) = vkp * u_pq + vkq * u_qq;
        }
        // rows: M <- U^H M
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar mpk = m(p, k), mqk = m(q, k);
          if constexpr (detail::is_complex<Scalar>::value) {
            m(p, k) = std::conj(u_pp) * mpk + std::conj(u_qp) * mqk;
            m(q, k) = std::conj(u_pq) * mpk + std::conj(u_qq) * mqk;
          } else {
            m(p, k) = u_pp * mpk + u_qp * mqk;
            m(q, k) = u_pq * mpk + u_qq * mqk;
          }
        }
        m(p, q) = Scalar(0);
        m(q, p) = Scalar(0);
        m(p, p) = Scalar(std::real(m(p, p)));
        m(q, q) = Scalar(std::real(m(q, q)));
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::sort(order.begin(), order.end(), [&](Eigen::Index i, Eigen::Index j) {
    return std::real(m(i, i)) < std::real(m(j, j));
  });
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = std::real(m(order[k], order[k]));
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

}  // namespace lambscat

#endif  // LAMBSCAT_JACOBI_EIGEN_HPP
