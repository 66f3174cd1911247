#include "lambscat/spectral.hpp"

#include "lambscat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lambscat {

namespace {

constexpr int kProbes = 4096;
constexpr double kBisectionTol = 1e-12;

double scan_limit(const NormalizedModel& model) {
  const double max_root = model.lambda().cwiseAbs().cwiseSqrt().maxCoeff();
  return 2.0 * (1.0 + max_root) * (1.0 + model.moment(0) + std::abs(model.theta()));
}

// probe points in the open interval (lo, hi), packed geometrically towards both ends
std::vector<double> probes(double lo, double hi) {
  const int half = kProbes / 2;
  const double w = hi - lo;
  const double smin = 1e-12, smax = 0.5;
  std::vector<double> xs;
  xs.reserve(kProbes);
  for (int k = 0; k < half; ++k) {
    const double s = smin * std::pow(smax / smin, double(k) / (half - 1));
    xs.push_back(lo + w * s);
  }
  for (int k = half - 1; k >= 0; --k) {
    const double s = smin * std::pow(smax / smin, double(k) / (half - 1));
    xs.push_back(hi - w * s);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  return xs;
}

double bisect(const NormalizedModel& model, double lo, double hi, double flo) {
  while (hi - lo > kBisectionTol * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    const double fm = eigen_equation(model, mid);
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

void scan_piece(const NormalizedModel& model, double lo, double hi, std::vector<double>& roots) {
  const auto xs = probes(lo, hi);
  double xprev = 0.0, fprev = 0.0;
  bool have_prev = false;
  for (double x : xs) {
    if (x <= lo || x >= hi) continue;
    const double f = eigen_equation(model, x);
    if (!std::isfinite(f)) continue;
    if (f == 0.0) {
      roots.push_back(x);
      have_prev = false;
      continue;
    }
    if (have_prev && (f > 0) != (fprev > 0)) roots.push_back(bisect(model, xprev, x, fprev));
    xprev = x;
    fprev = f;
    have_prev = true;
  }
}

}  // namespace

bool pp_empty_check(const NormalizedModel& model) {
  return (model.lambda().array() < 0.0).all() && model.theta() <= 0.0;
}

double eigen_equation(const NormalizedModel& model, double x) {
  const double x2 = x * x;
  double acc = 1.0 / x - model.theta();
  for (int i = 0; i < model.n(); ++i) acc += model.c()(i) * model.c()(i) / (x2 - model.lambda()(i));
  return acc;
}

Eigen::VectorXd bound_state_vector(const NormalizedModel& model, double x) {
  const double x2 = x * x;
  return (-x * model.c().array() / (x2 - model.lambda().array())).matrix();
}

SpectralData point_spectrum(const NormalizedModel& model) {
  const double xmax = scan_limit(model);
  std::vector<double> poles;
  for (int i = 0; i < model.n(); ++i)
    if (model.lambda()(i) > 0) poles.push_back(std::sqrt(model.lambda()(i)));
  std::sort(poles.begin(), poles.end());

  std::vector<double> roots;
  double lo = 0.0;
  for (double p : poles) {
    scan_piece(model, lo, p, roots);
    lo = p;
  }
  scan_piece(model, lo, xmax, roots);
  // f is finite at xmax itself, so the open-interval scan may miss a root sitting there
  if (eigen_equation(model, xmax) == 0.0) roots.push_back(xmax);

  // post-hoc check of the heuristic bound
  {
    double fprev = eigen_equation(model, xmax);
    for (int k = 1; k <= 1024; ++k) {
      const double x = xmax * std::pow(10.0, k / 1024.0);
      const double f = eigen_equation(model, x);
      if ((f > 0) != (fprev > 0) || f == 0.0) {
        std::ostringstream os;
        os << "eigen equation changes sign beyond the scan limit " << xmax << " near x = " << x;
        throw Error(ErrorCode::ScanIncomplete, os.str());
      }
      fprev = f;
    }
  }

  std::sort(roots.begin(), roots.end());
  SpectralData out;
  for (double x : roots) {
    BoundState bs;
    bs.decay_rate = x;
    bs.lambda = x * x;
    bs.y = bound_state_vector(model, x);
    bs.norm_sq = 1.0 / (2.0 * x) + bs.y.squaredNorm();
    out.eigenvalues.push_back(bs.lambda);
    out.bound_states.push_back(std::move(bs));
  }
  out.pp_empty = out.eigenvalues.empty();
  return out;
}

Interval essential_spectrum(const NormalizedModel&) {
  return {-std::numeric_limits<double>::infinity(), 0.0};
}

}  // namespace lambscat
