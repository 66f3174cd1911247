#include <doctest.h>

#include "lambscat/errors.hpp"
#include "lambscat/jacobi_eigen.hpp"
#include "lambscat/matrix_exp.hpp"
#include "lambscat/model.hpp"
#include "lambscat/polynomial.hpp"
#include "lambscat/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <random>

using namespace lambscat;
using cd = std::complex<double>;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::ConfigError;
}

}  // namespace

TEST_CASE("normalize with unit metric keeps the coupling") {
  const auto m = normalize({vec({-1}), vec({1}), std::nullopt, 0.0});
  CHECK(m.c()(0) == 1.0);
  CHECK(m.moment(0) == doctest::Approx(1.0));
  CHECK(m.moment(1) == doctest::Approx(-1.0));
  CHECK(m.moment(2) == doctest::Approx(1.0));
  CHECK(m.boundary_degree() == 2);
}

TEST_CASE("normalize scales the coupling by sqrt of the metric") {
  // g = 2/3, w = 1  =>  c = sqrt(2/3), mu0 = 2/3
  const auto pf = normalize({vec({-1}), vec({1}), vec({2.0 / 3.0}), 2.0 / 3.0});
  CHECK(pf.c()(0) == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
  CHECK(pf.moment(0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(pf.boundary_degree() == 3);

  // g = 1/(4 pi), w = -2 pi  =>  c = -sqrt(pi), mu0 = pi
  const double pi = std::numbers::pi;
  const auto shell = normalize({vec({-0.5}), vec({-2 * pi}), vec({1 / (4 * pi)}), -0.5});
  CHECK(shell.c()(0) == doctest::Approx(-std::sqrt(pi)).epsilon(1e-15));
  CHECK(shell.moment(0) == doctest::Approx(pi).epsilon(1e-14));

  CHECK((denormalize_coupling(shell, vec({1 / (4 * pi)})) - vec({-2 * pi})).norm() < 1e-13);
}

TEST_CASE("moments match the weighted sums in the original metric") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3, 3), g(0.1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 6;
    Eigen::VectorXd l(n), w(n), gm(n);
    for (int i = 0; i < n; ++i) {
      l(i) = u(rng) + 7.0 * i;
      w(i) = u(rng) + (u(rng) > 0 ? 0.5 : -0.5);
      gm(i) = g(rng);
    }
    const auto m = normalize({l, w, gm, 0.3});
    for (int k = 0; k <= 2 * n; ++k) {
      double direct = 0.0;
      for (int i = 0; i < n; ++i) direct += gm(i) * w(i) * w(i) * std::pow(l(i), k);
      CHECK(std::abs(m.moment(k) - direct) <= 1e-12 * std::max(1.0, std::abs(direct)));
    }
  }
}

TEST_CASE("invalid models are rejected with the right code") {
  CHECK(code_of([] { normalize({vec({-1, -1}), vec({1, 1}), std::nullopt, 0}); }) == ErrorCode::DuplicateEigenvalue);
  CHECK(code_of([] { normalize({vec({-1, -2}), vec({1, 0}), std::nullopt, 0}); }) == ErrorCode::ZeroCoupling);
  CHECK(code_of([] { normalize({vec({-1}), vec({1}), vec({0.0}), 0}); }) == ErrorCode::InvalidModel);
  CHECK(code_of([] { normalize({vec({-1}), vec({1, 2}), std::nullopt, 0}); }) == ErrorCode::InvalidModel);

  const ModelSpec spec{vec({-1, -2, -3}), vec({1, 0, 2}), std::nullopt, 0};
  CHECK(zero_coupling_indices(spec) == std::vector<int>{1});
  const auto reduced = project_out_zero_coupling(spec);
  CHECK(reduced.n() == 2);
  CHECK(reduced.eigenvalues(1) == -3.0);
}

TEST_CASE("single-mass chain") {
  const auto a = build_chain({vec({1}), vec({1}), 1.0});
  CHECK(a.lambda()(0) == doctest::Approx(-1.0));
  CHECK(a.c()(0) == doctest::Approx(1.0));
  CHECK(a.theta() == 0.0);

  const auto b = build_chain({vec({2}), vec({2}), 1.0});
  CHECK(b.lambda()(0) == doctest::Approx(-1.0));
  CHECK(b.c()(0) == doctest::Approx(std::sqrt(0.5)));
}

TEST_CASE("longer chains: negative spectrum, nonzero coupling, moments of w") {
  const ChainSpec chain{vec({1, 2, 0.5, 1.5}), vec({1, 3, 2, 0.7}), 1.3};
  const auto m = build_chain(chain);
  CHECK((m.lambda().array() < 0).all());
  CHECK((m.c().array().abs() > 1e-8).all());

  // oracle: symmetric eigenproblem from Eigen
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(chain_symmetrized_matrix(chain));
  CHECK((es.eigenvalues() - m.lambda()).norm() < 1e-12);

  // <w, L^k w> in the metric g_j = M_j / T with w = (T/M_1, 0, ...)
  const Eigen::MatrixXd l = chain_matrix(chain);
  Eigen::VectorXd w = Eigen::VectorXd::Zero(4);
  w(0) = chain.tension / chain.masses(0);
  const Eigen::VectorXd g = chain.masses / chain.tension;
  Eigen::VectorXd lk = w;
  for (int k = 0; k <= 8; ++k) {
    const double direct = (g.array() * w.array() * lk.array()).sum();
    CHECK(m.moment(k) == doctest::Approx(direct).epsilon(1e-12));
    lk = l * lk;
  }
}

TEST_CASE("gamma closed form") {
  const NormalizedModel lamb(vec({-1}), vec({1}), 0.0);
  CHECK(gamma(lamb, 1.0).real() == doctest::Approx(-1.5));
  CHECK(gamma(lamb, 4.0).real() == doctest::Approx(-0.7));
  CHECK(std::abs(gamma(lamb, 4.0).imag()) == 0.0);
  CHECK(code_of([&] { gamma(lamb, -2.0); }) == ErrorCode::PoleAtZ);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-10, 10);
  const NormalizedModel m(vec({-1, 2, 5}), vec({0.5, -1, 2}), 0.7);
  for (int i = 0; i < 100; ++i) {
    const cd z(u(rng), u(rng));
    if (std::abs(z.imag()) < 0.1) continue;
    CHECK(std::abs(gamma(m, std::conj(z)) - std::conj(gamma(m, z))) <= 1e-13 * (1 + std::abs(gamma(m, z))));
  }
}

TEST_CASE("resolvent identity residual") {
  const NormalizedModel lamb(vec({-1}), vec({1}), 0.0);
  CHECK(krein_identity_residual(lamb, 1.0, 4.0) <= 1e-14);
  CHECK(krein_identity_residual(lamb, cd(1, 2), cd(1, 2)) == 0.0);

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-10, 10);
  const NormalizedModel m(vec({-3, -0.5, 1.5, 4}), vec({1, -2, 0.3, 1.1}), -1.2);
  int checked = 0;
  while (checked < 100) {
    const cd z(u(rng), u(rng)), w(u(rng), u(rng));
    bool near_pole = std::abs(z.imag()) < 0.1 || std::abs(w.imag()) < 0.1;
    for (int i = 0; i < 4; ++i) near_pole = near_pole || std::abs(z - m.lambda()(i)) < 0.1 || std::abs(w - m.lambda()(i)) < 0.1;
    if (near_pole) continue;
    CHECK(krein_identity_residual(m, z, w) <= 1e-10);
    ++checked;
  }
}

TEST_CASE("Jacobi eigensolver agrees with Eigen") {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (int n : {1, 2, 5, 12}) {
    Eigen::MatrixXd a(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a(i, j) = nd(rng);
    a = (a + a.transpose()).eval();
    const auto mine = jacobi_eigen(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ref(a);
    CHECK(mine.converged);
    CHECK((mine.eigenvalues - ref.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12 * (1 + a.norm()));
    CHECK((a * mine.eigenvectors - mine.eigenvectors * mine.eigenvalues.asDiagonal()).norm() < 1e-11 * (1 + a.norm()));

    Eigen::MatrixXcd h(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) h(i, j) = cd(nd(rng), nd(rng));
    h = (h + h.adjoint()).eval();
    const auto hc = jacobi_eigen(h);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> href(h);
    CHECK((hc.eigenvalues - href.eigenvalues()).cwiseAbs().maxCoeff() < 1e-12 * (1 + h.norm()));
  }
}

TEST_CASE("matrix exponential") {
  // rotation generator
  Eigen::Matrix2d a;
  a << 0, 1, -1, 0;
  const double t = 2.5;
  const Eigen::MatrixXd e = matrix_exponential(Eigen::MatrixXd(t * a));
  CHECK(e(0, 0) == doctest::Approx(std::cos(t)).epsilon(1e-14));
  CHECK(e(0, 1) == doctest::Approx(std::sin(t)).epsilon(1e-14));

  // Jordan block: exp([[z,1],[0,z]]) = e^z [[1,1],[0,1]]
  Eigen::Matrix2cd j;
  j << cd(0.3, 2), 1, 0, cd(0.3, 2);
  const Eigen::MatrixXcd ej = matrix_exponential(Eigen::MatrixXcd(j));
  CHECK(std::abs(ej(0, 1) - std::exp(cd(0.3, 2))) < 1e-13);
  CHECK(std::abs(ej(1, 0)) < 1e-15);

  // large norm goes through the squaring phase
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2, 2);
  d(0, 0) = -30;
  d(1, 1) = 5;
  const Eigen::MatrixXd ed = matrix_exponential(d);
  CHECK(ed(0, 0) == doctest::Approx(std::exp(-30.0)).epsilon(1e-12));
  CHECK(ed(1, 1) == doctest::Approx(std::exp(5.0)).epsilon(1e-13));
}

TEST_CASE("polynomial arithmetic") {
  const RealPolynomial p{1, -1, 1};
  CHECK(p.degree() == 2);
  CHECK(p(2.0) == 3.0);
  const auto pi = p(cd(0, 1));
  CHECK(std::abs(pi - cd(0, -1)) < 1e-15);  // p(i) = -i
  const RealPolynomial q = p * RealPolynomial{1, 1};
  CHECK(q == RealPolynomial{1, 0, 0, 1});
  CHECK((q - q).is_zero());
  CHECK(p.derivative() == RealPolynomial{-1, 2});
  CHECK(RealPolynomial({1, 2, 1e-20}).degree() == 1);
  CHECK(apply_differential(RealPolynomial{1, 2}, vec({3, 4})) == 11.0);
}

TEST_CASE("adaptive quadrature") {
  CHECK(integrate([](double x) { return std::sin(x); }, 0, std::numbers::pi).value == doctest::Approx(2.0).epsilon(1e-13));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -10, 10).value ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-13));
  // reversed limits flip the sign
  CHECK(integrate([](double x) { return x; }, 1, 0).value == doctest::Approx(-0.5));
  // kink handled through a breakpoint
  CHECK(integrate([](double x) { return std::abs(x - 0.3); }, 0, 1, std::vector<double>{0.3}).value ==
        doctest::Approx(0.045 + 0.245).epsilon(1e-14));
  CHECK(gauss4([](double x) { return std::pow(x, 7); }, 0, 1) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(code_of([] {
          integrate([](double x) { return 1.0 / std::sqrt(std::abs(x)); }, -1, 1, QuadratureOptions{1e-15, 0, 20});
        }) == ErrorCode::QuadratureFailure);
}
