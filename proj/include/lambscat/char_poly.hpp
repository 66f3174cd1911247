#ifndef LAMBSCAT_CHAR_POLY_HPP
#define LAMBSCAT_CHAR_POLY_HPP

#include "lambscat/model.hpp"
#include "lambscat/polynomial.hpp"

#include <vector>

namespace lambscat {

/// p_1 = theta z + 1,  p_k = z^2 p_{k-1} - mu_{k-2} z  for k = 2..k_max.
/// Element k-1 of the result is p_k. Requires 1 <= k_max <= n + 1.
std::vector<RealPolynomial> build_pk_sequence(const NormalizedModel& model, int k_max);

/// Coefficients a_0..a_n of prod_i (x - lambda_i) = sum_j a_j x^{n-j}.
Eigen::VectorXd elementary_symmetric_signed(const Eigen::VectorXd& lambda);

/// d with sum_j d_j lambda_i^{j-1} = lambda_i^n, by partially pivoted
/// elimination on the transposed Vandermonde matrix. Throws IllConditioned
/// when the pivot ratio exceeds 1e12.
Eigen::VectorXd vandermonde_interpolation_weights(const Eigen::VectorXd& lambda);

/// Boundary polynomial p = p_{n+1} - sum_j d_j p_j (Vandermonde route).
RealPolynomial build_p_vandermonde(const NormalizedModel& model);

/// Boundary polynomial from the closed form
/// (theta z + 1) det(z^2 - L) - z sum_j (sum_{k<=j} a_{j-k} mu_{k-1}) z^{2(n-j)}.
RealPolynomial build_p_closed_form(const NormalizedModel& model);

/// max_k |p_k - q_k| / max_k |q_k|.
double relative_coefficient_gap(const RealPolynomial& p, const RealPolynomial& q);

}  // namespace lambscat

#endif  // LAMBSCAT_CHAR_POLY_HPP
