#include "lambscat/roots.hpp"

#include "lambscat/char_poly.hpp"
#include "lambscat/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace lambscat {

using cd = std::complex<double>;

int RootSet::total_multiplicity() const {
  int total = 0;
  for (const auto& r : roots) total += r.multiplicity;
  return total;
}

namespace {

// |p(z)| / sum_k |p_k| |z|^k: the relative backward error of z. Inside the
// unit disc this is at least |p(z)| / ||p||_1; outside it stays meaningful
// where |z|^N would swamp the plain 1-norm.
double backward_error(const Eigen::VectorXd& coeffs, cd z) {
  const Eigen::VectorXd mags = coeffs.cwiseAbs();
  const double scale = horner(mags, std::abs(z));
  return scale > 0 ? std::abs(horner(coeffs, z)) / scale : 0.0;
}

struct Cluster {
  cd center;
  int count = 0;
};

std::vector<Cluster> cluster(const std::vector<cd>& z, double radius) {
  std::vector<Cluster> out;
  std::vector<bool> used(z.size(), false);
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (used[i]) continue;
    used[i] = true;
    cd sum = z[i];
    int count = 1;
    // grow transitively so that a multiple root split into a small ring stays together
    for (bool grew = true; grew;) {
      grew = false;
      for (std::size_t j = 0; j < z.size(); ++j) {
        if (used[j]) continue;
        const cd center = sum / double(count);
        if (std::abs(z[j] - center) <= radius * std::max(1.0, std::abs(center))) {
          used[j] = true;
          sum += z[j];
          ++count;
          grew = true;
        }
      }
    }
    out.push_back({sum / double(count), count});
  }
  return out;
}

}  // namespace

RootSet find_roots(const RealPolynomial& p, const RootFinderOptions& options) {
  const int deg = p.degree();
  if (deg < 1) throw Error(ErrorCode::OutOfRange, "find_roots needs degree >= 1");

  const Eigen::VectorXd monic = p.coeffs() / p.leading();
  double bound = 0.0;
  for (int k = 0; k < deg; ++k) bound = std::max(bound, std::abs(monic(k)));
  const double radius = 1.0 + bound;

  std::vector<cd> z(static_cast<std::size_t>(deg));
  for (int k = 0; k < deg; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / deg + 0.4;
    z[static_cast<std::size_t>(k)] = std::polar(radius, angle);
  }

  RootSet out;
  // a root is frozen once its backward error reaches a few ulps
  constexpr double kFreeze = 8.0 * std::numeric_limits<double>::epsilon();
  std::vector<bool> done(static_cast<std::size_t>(deg), false);
  int it = 0;
  for (; it < options.max_iterations; ++it) {
    if (std::all_of(done.begin(), done.end(), [](bool d) { return d; })) break;
    for (int k = 0; k < deg; ++k) {
      if (done[static_cast<std::size_t>(k)]) continue;
      auto& zk = z[static_cast<std::size_t>(k)];
      const auto [pv, dpv] = horner_with_derivative(monic, zk);
      if (backward_error(monic, zk) <= kFreeze) {
        done[static_cast<std::size_t>(k)] = true;
        continue;
      }
      const cd ratio = pv / dpv;
      cd sum = 0.0;
      for (int j = 0; j < deg; ++j) {
        if (j != k) sum += 1.0 / (zk - z[static_cast<std::size_t>(j)]);
      }
      const cd step = ratio / (1.0 - ratio * sum);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) continue;
      zk -= step;
      if (std::abs(step) <= kFreeze * std::max(1.0, std::abs(zk))) done[static_cast<std::size_t>(k)] = true;
    }
  }
  out.iterations = it;

  // one Newton polish, kept only when it lowers the residual
  for (auto& zk : z) {
    const auto [pv, dpv] = horner_with_derivative(monic, zk);
    if (dpv == cd(0)) continue;
    const cd cand = zk - pv / dpv;
    if (std::abs(horner(monic, cand)) < std::abs(pv)) zk = cand;
  }

  auto clusters = cluster(z, options.cluster_radius);

  // snap near-real clusters onto the axis and pair the rest with conjugates
  for (auto& c : clusters) {
    if (std::abs(c.center.imag()) <= 0.5 * options.cluster_radius * std::max(1.0, std::abs(c.center)))
      c.center = cd(c.center.real(), 0.0);
  }
  std::vector<bool> paired(clusters.size(), false);
  for (std::size_t i = 0; i < clusters.size(); ++i) {
    if (paired[i] || clusters[i].center.imag() == 0.0) continue;
    std::size_t best = clusters.size();
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < clusters.size(); ++j) {
      if (j == i || paired[j] || clusters[j].center.imag() == 0.0) continue;
      const double d = std::abs(clusters[j].center - std::conj(clusters[i].center));
      if (d < best_dist) {
        best_dist = d;
        best = j;
      }
    }
    if (best == clusters.size() || clusters[best].count != clusters[i].count) {
      throw Error(ErrorCode::NoConvergence, "root without a conjugate partner");
    }
    const cd upper = 0.5 * (clusters[i].center + std::conj(clusters[best].center));
    clusters[i].center = upper;
    clusters[best].center = std::conj(upper);
    paired[i] = paired[best] = true;
  }

  for (const auto& c : clusters) {
    out.roots.push_back({c.center, c.count});
    out.max_residual = std::max(out.max_residual, backward_error(p.coeffs(), c.center));
  }
  std::sort(out.roots.begin(), out.roots.end(), [](const Root& a, const Root& b) {
    if (a.value.real() != b.value.real()) return a.value.real() < b.value.real();
    return a.value.imag() < b.value.imag();
  });

  if (out.max_residual > options.residual_tolerance) {
    std::ostringstream os;
    os << "after " << it << " iterations the worst backward error is " << out.max_residual;
    throw Error(ErrorCode::NoConvergence, os.str());
  }
  return out;
}

RootSet classify_roots(const NormalizedModel& model, RootSet roots) {
  const double scale = std::max(1.0, model.lambda().cwiseAbs().maxCoeff());
  if ((model.lambda().array().abs() < 1e-12 * scale).any())
    throw Error(ErrorCode::InvalidModel, "classification requires det L != 0");
  roots.eigen_roots.clear();
  roots.resonances.clear();
  const RealPolynomial p = build_p_closed_form(model);
  const RealPolynomial dp = p.derivative();
  for (const auto& r : roots.roots) {
    const double re = r.value.real();
    // A disc of radius deg * |p/p'| around z holds a root of p, so the sign of
    // Re z is settled once |Re z| exceeds it. Narrow resonances (nearly
    // degenerate or weakly coupled modes) can sit well below 1e-8 and still be
    // resolved; merged clusters keep the fixed threshold.
    double axis_tol = 1e-8;
    if (r.multiplicity == 1) {
      const std::complex<double> d = dp(r.value);
      const double radius = std::abs(d) > 0.0 ? p.degree() * std::abs(p(r.value) / d)
                                              : std::numeric_limits<double>::infinity();
      axis_tol = std::max(radius, 64 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(r.value)));
    }
    if (std::abs(re) <= axis_tol) {
      std::ostringstream os;
      os.precision(17);
      os << "root " << r.value.real() << (r.value.imag() < 0 ? "" : "+") << r.value.imag()
         << "i on the imaginary axis";
      throw Error(ErrorCode::ImaginaryAxisRoot, os.str());
    }
    if (re < 0) {
      if (std::abs(r.value.imag()) > 1e-8)
        throw Error(ErrorCode::NoConvergence, "non-real root in the left half plane");
      roots.eigen_roots.push_back({cd(re, 0.0), r.multiplicity});
    } else {
      roots.resonances.push_back(r);
    }
  }
  roots.classified = true;
  return roots;
}

std::vector<double> eigenvalues_from_roots(const RootSet& roots) {
  std::vector<double> out;
  for (const auto& r : roots.eigen_roots)
    for (int k = 0; k < r.multiplicity; ++k) out.push_back(r.value.real() * r.value.real());
  std::sort(out.begin(), out.end());
  return out;
}

double min_resonance_decay(const RootSet& roots) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& r : roots.resonances) m = std::min(m, r.value.real());
  return m;
}

}  // namespace lambscat
