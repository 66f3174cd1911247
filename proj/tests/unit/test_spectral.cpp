#include <doctest.h>

#include "lambscat/errors.hpp"
#include "lambscat/roots.hpp"
#include "lambscat/char_poly.hpp"
#include "lambscat/spectral.hpp"

#include <cmath>
#include <limits>

using namespace lambscat;

namespace {

NormalizedModel one(double l, double c, double theta) {
  return NormalizedModel(Eigen::VectorXd::Constant(1, l), Eigen::VectorXd::Constant(1, c), theta);
}

// plain bisection on 1/x + c^2/(x^2 - l) - theta over (lo, hi)
double bisect(double l, double c, double theta, double lo, double hi) {
  auto f = [&](double x) { return 1 / x + c * c / (x * x - l) - theta; };
  double flo = f(lo);
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("sign criterion for an empty point spectrum") {
  CHECK(pp_empty_check(one(-1, 1, 0)));
  CHECK(pp_empty_check(one(-1, 1, -0.5)));
  CHECK_FALSE(pp_empty_check(one(-1, 1, 2)));
  CHECK_FALSE(pp_empty_check(one(1, 1, 0)));
  CHECK(point_spectrum(one(-1, 1, 0)).pp_empty);
  CHECK(point_spectrum(one(-1, 1, -0.5)).eigenvalues.empty());
}

TEST_CASE("positive theta creates one eigenvalue") {
  const auto m = one(-1, 1, 2);
  const double x = bisect(-1, 1, 2, 0.1, 10);
  CHECK(x * x == doctest::Approx(0.5460967929).epsilon(1e-9));

  const auto s = point_spectrum(m);
  CHECK_FALSE(s.pp_empty);
  REQUIRE(s.eigenvalues.size() == 1);
  CHECK(s.eigenvalues[0] == doctest::Approx(x * x).epsilon(1e-12));
  REQUIRE(s.bound_states.size() == 1);
  const auto& bs = s.bound_states[0];
  CHECK(bs.decay_rate == doctest::Approx(x).epsilon(1e-12));
  CHECK(bs.y(0) == doctest::Approx(-0.4779672430).epsilon(1e-9));
  CHECK(bs.norm_sq == doctest::Approx(1 / (2 * x) + bs.y(0) * bs.y(0)));

  // boundary condition theta phi'(0) + phi(0) = <c, y> for phi = e^{-xs}
  CHECK(std::abs(-2.0 * x + 1.0 - bs.y(0)) < 1e-12);
  // oscillator equation lambda y = L y + c phi'(0)
  CHECK(std::abs(x * x * bs.y(0) - (-bs.y(0) - x)) < 1e-12);
  CHECK(std::abs(eigen_equation(m, x)) < 1e-12);
}

TEST_CASE("positive eigenvalue of L") {
  const auto s = point_spectrum(one(1, 1, 0));
  REQUIRE(s.eigenvalues.size() == 1);
  const double x = (std::sqrt(5.0) - 1) / 2;
  CHECK(s.eigenvalues[0] == doctest::Approx(x * x).epsilon(1e-12));
  CHECK(bound_state_vector(one(1, 1, 0), x)(0) == doctest::Approx(-x / (x * x - 1)));
}

TEST_CASE("scan agrees with the eigen roots of p") {
  Eigen::VectorXd l(3), c(3);
  l << 0.5, -1, 3;
  c << 1, 0.7, 0.4;
  for (double theta : {0.0, 0.8, -0.4}) {
    const NormalizedModel m(l, c, theta);
    const auto s = point_spectrum(m);
    const auto from_roots = eigenvalues_from_roots(classify_roots(m, find_roots(build_p_closed_form(m))));
    REQUIRE(s.eigenvalues.size() == from_roots.size());
    for (std::size_t i = 0; i < from_roots.size(); ++i)
      CHECK(s.eigenvalues[i] == doctest::Approx(from_roots[i]).epsilon(1e-9));
  }
}

TEST_CASE("essential spectrum is the negative half-line") {
  const auto e = essential_spectrum(one(-1, 1, 0));
  CHECK(e.lower == -std::numeric_limits<double>::infinity());
  CHECK(e.upper == 0.0);
}
