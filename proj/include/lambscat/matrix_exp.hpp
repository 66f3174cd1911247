#ifndef LAMBSCAT_MATRIX_EXP_HPP
#define LAMBSCAT_MATRIX_EXP_HPP

#include <Eigen/Dense>

#include <cmath>

namespace lambscat {

/// exp(A) by scaling and squaring with a diagonal [6/6] Padé approximant.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>
matrix_exponential(const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  const Eigen::Index n = a.rows();
  if (n == 0) return Matrix(0, 0);

  // Padé [6/6] numerator coefficients c_k; denominator uses (-1)^k c_k.
  constexpr double c[7] = {1.0,
                           1.0 / 2.0,
                           5.0 / 44.0,
                           1.0 / 66.0,
                           1.0 / 792.0,
                           1.0 / 15840.0,
                           1.0 / 665280.0};

  const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / 0.25))));
  const Matrix x = a / Scalar(std::ldexp(1.0, squarings));

  const Matrix id = Matrix::Identity(n, n);
  const Matrix x2 = x * x;
  const Matrix x4 = x2 * x2;
  const Matrix x6 = x4 * x2;
  const Matrix even = Scalar(c[0]) * id + Scalar(c[2]) * x2 + Scalar(c[4]) * x4 + Scalar(c[6]) * x6;
  const Matrix odd = x * (Scalar(c[1]) * id + Scalar(c[3]) * x2 + Scalar(c[5]) * x4);
  Matrix result = (even - odd).partialPivLu().solve(even + odd);
  for (int k = 0; k < squarings; ++k) result = result * result;
  return result;
}

}  // namespace lambscat

#endif  // LAMBSCAT_MATRIX_EXP_HPP
