#include "lambscat/model.hpp"

#include "lambscat/errors.hpp"
#include "lambscat/jacobi_eigen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lambscat {

namespace {

constexpr double kDistinctTol = 1e-9;
constexpr double kPoleTol = 1e-12;

void check_finite(const Eigen::VectorXd& v, const char* what) {
  if (!v.allFinite()) throw Error(ErrorCode::InvalidModel, std::string(what) + " contains non-finite values");
}

void check_distinct(const Eigen::VectorXd& lambda) {
  const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
  std::vector<double> sorted(lambda.data(), lambda.data() + lambda.size());
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i] - sorted[i - 1] < kDistinctTol * scale) {
      std::ostringstream os;
      os.precision(17);
      os << "eigenvalues " << sorted[i - 1] << " and " << sorted[i] << " coincide within "
         << kDistinctTol << " relative";
      throw Error(ErrorCode::DuplicateEigenvalue, os.str());
    }
  }
}

std::vector<int> zero_indices(const Eigen::VectorXd& c) {
  std::vector<int> out;
  const double scale = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  for (Eigen::Index i = 0; i < c.size(); ++i) {
    if (std::abs(c(i)) <= 1e-14 * scale || c(i) == 0.0) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::string join(const std::vector<int>& idx) {
  std::ostringstream os;
  for (std::size_t k = 0; k < idx.size(); ++k) os << (k ? "," : "") << idx[k];
  return os.str();
}

}  // namespace

NormalizedModel::NormalizedModel(Eigen::VectorXd lambda, Eigen::VectorXd c, double theta)
    : lambda_(std::move(lambda)), c_(std::move(c)), theta_(theta) {
  if (lambda_.size() == 0) throw Error(ErrorCode::InvalidModel, "model dimension must be positive");
  if (c_.size() != lambda_.size())
    throw Error(ErrorCode::InvalidModel, "coupling and eigenvalue counts differ");
  check_finite(lambda_, "eigenvalues");
  check_finite(c_, "coupling");
  if (!std::isfinite(theta_)) throw Error(ErrorCode::InvalidModel, "theta is not finite");
  check_distinct(lambda_);
  if (auto zeros = zero_indices(c_); !zeros.empty())
    throw Error(ErrorCode::ZeroCoupling, "indices " + join(zeros));

  const int n = this->n();
  moments_.resize(2 * n + 1);
  Eigen::ArrayXd pw = c_.array().square();
  for (int k = 0; k <= 2 * n; ++k) {
    moments_(k) = pw.sum();
    pw *= lambda_.array();
  }
}

NormalizedModel normalize(const ModelSpec& spec) {
  const int n = spec.n();
  if (n <= 0) throw Error(ErrorCode::InvalidModel, "model dimension must be positive");
  if (spec.coupling.size() != n)
    throw Error(ErrorCode::InvalidModel, "coupling has " + std::to_string(spec.coupling.size()) +
                                             " entries, expected " + std::to_string(n));
  Eigen::VectorXd g = Eigen::VectorXd::Ones(n);
  if (spec.metric) {
    if (spec.metric->size() != n)
      throw Error(ErrorCode::InvalidModel, "metric has wrong length");
    check_finite(*spec.metric, "metric");
    if ((spec.metric->array() <= 0.0).any())
      throw Error(ErrorCode::InvalidModel, "metric weights must be strictly positive");
    g = *spec.metric;
  }
  Eigen::VectorXd c = g.array().sqrt() * spec.coupling.array();
  return NormalizedModel(spec.eigenvalues, c, spec.theta);
}

Eigen::VectorXd denormalize_coupling(const NormalizedModel& model, const Eigen::VectorXd& metric) {
  return model.c().array() / metric.array().sqrt();
}

std::vector<int> zero_coupling_indices(const ModelSpec& spec) {
  Eigen::VectorXd c = spec.coupling;
  if (spec.metric && spec.metric->size() == c.size()) c = spec.metric->array().sqrt() * c.array();
  return zero_indices(c);
}

ModelSpec project_out_zero_coupling(const ModelSpec& spec) {
  const auto zeros = zero_coupling_indices(spec);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < spec.eigenvalues.size(); ++i)
    if (std::find(zeros.begin(), zeros.end(), static_cast<int>(i)) == zeros.end()) keep.push_back(i);
  ModelSpec out;
  out.theta = spec.theta;
  out.eigenvalues = spec.eigenvalues(keep);
  out.coupling = spec.coupling(keep);
  if (spec.metric) out.metric = Eigen::VectorXd((*spec.metric)(keep));
  return out;
}

Eigen::MatrixXd chain_matrix(const ChainSpec& chain) {
  const Eigen::Index n = chain.masses.size();
  if (n == 0 || chain.springs.size() != n)
    throw Error(ErrorCode::InvalidModel, "chain needs equally many masses and springs (n >= 1)");
  if ((chain.masses.array() <= 0).any() || (chain.springs.array() <= 0).any() || !(chain.tension > 0))
    throw Error(ErrorCode::InvalidModel, "chain masses, springs and tension must be positive");
  const auto& m = chain.masses;
  const auto& k = chain.springs;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double left = j > 0 ? k(j - 1) : 0.0;
    // the last spring K_n anchors the chain; interior springs couple j and j+1
    l(j, j) = -(left + k(j)) / m(j);
    if (j + 1 < n) {
      l(j, j + 1) = k(j) / m(j);
      l(j + 1, j) = k(j) / m(j + 1);
    }
  }
  return l;
}

Eigen::MatrixXd chain_symmetrized_matrix(const ChainSpec& chain) {
  const Eigen::MatrixXd l = chain_matrix(chain);
  const Eigen::VectorXd d = (chain.masses / chain.tension).array().sqrt();
  Eigen::MatrixXd s = d.asDiagonal() * l * d.cwiseInverse().asDiagonal();
  return 0.5 * (s + s.transpose());
}

NormalizedModel build_chain(const ChainSpec& chain) {
  const Eigen::MatrixXd s = chain_symmetrized_matrix(chain);
  const auto eig = jacobi_eigen(s);
  if (!eig.converged) throw Error(ErrorCode::DegenerateChain, "Jacobi iteration did not converge");
  const Eigen::Index n = s.rows();
  const double scale = std::max(1.0, eig.eigenvalues.cwiseAbs().maxCoeff());
  for (Eigen::Index i = 1; i < n; ++i) {
    if (eig.eigenvalues(i) - eig.eigenvalues(i - 1) < kDistinctTol * scale)
      throw Error(ErrorCode::DegenerateChain, "two chain eigenvalues coincide");
  }
  // w = (T/M_1, 0, ..., 0) scaled by sqrt(g) gives (sqrt(T/M_1), 0, ..., 0)
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  w(0) = std::sqrt(chain.tension / chain.masses(0));
  Eigen::VectorXd c = eig.eigenvectors.transpose() * w;
  // fix the eigenvector sign convention so that c is positive
  c = c.cwiseAbs();
  return NormalizedModel(eig.eigenvalues, c, 0.0);
}

std::complex<double> gamma(const NormalizedModel& model, std::complex<double> z) {
  const double scale = 1.0 + std::abs(z);
  if (std::abs(z.imag()) <= kPoleTol * scale && z.real() <= kPoleTol * scale)
    throw Error(ErrorCode::PoleAtZ, "z lies on the branch cut (-inf, 0]");
  std::complex<double> acc = 1.0 / std::sqrt(z);
  for (int i = 0; i < model.n(); ++i) {
    const std::complex<double> d = z - model.lambda()(i);
    if (std::abs(d) <= kPoleTol * (1.0 + std::abs(model.lambda()(i))))
      throw Error(ErrorCode::PoleAtZ, "z coincides with an eigenvalue of L");
    acc += model.c()(i) * model.c()(i) / d;
  }
  return -acc;
}

std::complex<double> defect_pairing(const NormalizedModel& model, std::complex<double> u,
                                    std::complex<double> z) {
  const std::complex<double> su = std::sqrt(u), sz = std::sqrt(z);
  std::complex<double> acc = 1.0 / (su * sz * (su + sz));
  for (int i = 0; i < model.n(); ++i) {
    const double l = model.lambda()(i);
    acc += model.c()(i) * model.c()(i) / ((u - l) * (z - l));
  }
  return acc;
}

double krein_identity_residual(const NormalizedModel& model, std::complex<double> z,
                               std::complex<double> u) {
  const std::complex<double> gz = gamma(model, z);
  const std::complex<double> gu = gamma(model, u);
  if (z == u) return 0.0;
  return std::abs(gz - gu - (z - u) * defect_pairing(model, u, z));
}

}  // namespace lambscat
