#include "lambscat/char_poly.hpp"

#include "lambscat/errors.hpp"

#include <cmath>

namespace lambscat {

std::vector<RealPolynomial> build_pk_sequence(const NormalizedModel& model, int k_max) {
  if (k_max < 1 || k_max > model.n() + 1)
    throw Error(ErrorCode::OutOfRange, "k_max must lie in [1, n+1]");
  std::vector<RealPolynomial> out;
  out.reserve(static_cast<std::size_t>(k_max));
  out.push_back(RealPolynomial{1.0, model.theta()});
  const RealPolynomial z2 = RealPolynomial::monomial(2);
  for (int k = 2; k <= k_max; ++k) {
    out.push_back(z2 * out.back() - RealPolynomial::monomial(1, model.moment(k - 2)));
  }
  return out;
}

Eigen::VectorXd elementary_symmetric_signed(const Eigen::VectorXd& lambda) {
  const Eigen::Index n = lambda.size();
  // a(j) multiplies x^{n-j}; multiply in one factor (x - lambda_i) at a time
  Eigen::VectorXd a = Eigen::VectorXd::Zero(n + 1);
  a(0) = 1.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j >= 1; --j) a(j) -= lambda(i) * a(j - 1);
  }
  return a;
}

Eigen::VectorXd vandermonde_interpolation_weights(const Eigen::VectorXd& lambda) {
  using MatrixXld = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using VectorXld = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const Eigen::Index n = lambda.size();
  // row i: (1, lambda_i, ..., lambda_i^{n-1}); rhs lambda_i^n
  MatrixXld a(n, n);
  VectorXld rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    long double pw = 1.0L;
    for (Eigen::Index j = 0; j < n; ++j) {
      a(i, j) = pw;
      pw *= lambda(i);
    }
    rhs(i) = pw;
  }
  const Eigen::PartialPivLU<MatrixXld> lu(a);
  const VectorXld diag = lu.matrixLU().diagonal().cwiseAbs();
  const double ratio = static_cast<double>(diag.maxCoeff() / diag.minCoeff());
  if (!(ratio <= 1e12))
    throw Error(ErrorCode::IllConditioned, "Vandermonde pivot ratio " + std::to_string(ratio));
  return VectorXld(lu.solve(rhs)).cast<double>();
}

RealPolynomial build_p_vandermonde(const NormalizedModel& model) {
  const int n = model.n();
  const Eigen::VectorXd d = vandermonde_interpolation_weights(model.lambda());
  const auto pk = build_pk_sequence(model, n + 1);
  RealPolynomial p = pk[static_cast<std::size_t>(n)];
  for (int j = 0; j < n; ++j) p = p - d(j) * pk[static_cast<std::size_t>(j)];
  return p;
}

RealPolynomial build_p_closed_form(const NormalizedModel& model) {
  const int n = model.n();
  const Eigen::VectorXd a = elementary_symmetric_signed(model.lambda());
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(2 * n + 2);
  // (theta z + 1) * sum_j a_j z^{2(n-j)}
  for (int j = 0; j <= n; ++j) {
    coeffs(2 * (n - j)) += a(j);
    coeffs(2 * (n - j) + 1) += model.theta() * a(j);
  }
  // - z * sum_j (sum_{k=1}^{j} a_{j-k} mu_{k-1}) z^{2(n-j)}
  for (int j = 1; j <= n; ++j) {
    double s = 0.0;
    for (int k = 1; k <= j; ++k) s += a(j - k) * model.moment(k - 1);
    coeffs(2 * (n - j) + 1) -= s;
  }
  return RealPolynomial(coeffs);
}

double relative_coefficient_gap(const RealPolynomial& p, const RealPolynomial& q) {
  const int deg = std::max(p.degree(), q.degree());
  double gap = 0.0;
  for (int k = 0; k <= deg; ++k) gap = std::max(gap, std::abs(p[k] - q[k]));
  return gap / q.norm_inf();
}

}  // namespace lambscat
