#include "lambscat/dynamics.hpp"

#include "lambscat/char_poly.hpp"
#include "lambscat/errors.hpp"
#include "lambscat/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace lambscat {

namespace {

using Eigen::VectorXd;

constexpr double kConstraintTol = 1e-10;
const QuadratureOptions kFieldQuad{1e-14, 1e-13, 20000};

std::vector<double> unit_breaks(double lo, double hi) {
  std::vector<double> out;
  for (double x = std::ceil(lo); x < hi; x += 1.0) out.push_back(x);
  return out;
}

// cubic Hermite on one cell, value (k = 0) or derivative in s (k = 1)
double hermite(double tau, double h, double f0, double f1, double d0, double d1, int k) {
  const double t2 = tau * tau, t3 = t2 * tau;
  if (k == 0) {
    return (2 * t3 - 3 * t2 + 1) * f0 + (t3 - 2 * t2 + tau) * h * d0 + (-2 * t3 + 3 * t2) * f1 +
           (t3 - t2) * h * d1;
  }
  return ((6 * t2 - 6 * tau) * f0 + (3 * t2 - 4 * tau + 1) * h * d0 + (-6 * t2 + 6 * tau) * f1 +
          (3 * t2 - 2 * tau) * h * d1) /
         h;
}

void check_sizes(const NormalizedModel& model, const VectorXd& y0, const VectorXd& ydot0) {
  if (y0.size() != model.n() || ydot0.size() != model.n())
    throw Error(ErrorCode::InvalidModel, "oscillator state must have " + std::to_string(model.n()) + " components");
}

}  // namespace

// ---------------------------------------------------------------- class D

Eigen::VectorXd boundary_vector(const NormalizedModel& model, const Eigen::VectorXd& derivs_at_zero) {
  const int n = model.n();
  const auto pk = build_pk_sequence(model, n);
  VectorXd padded = VectorXd::Zero(2 * n + 1);
  const Eigen::Index m = std::min<Eigen::Index>(derivs_at_zero.size(), padded.size());
  padded.head(m) = derivs_at_zero.head(m);
  VectorXd v(n);
  for (int k = 0; k < n; ++k) {
    const auto& p = pk[static_cast<std::size_t>(k)];
    if (p.degree() >= derivs_at_zero.size())
      throw Error(ErrorCode::OutOfRange, "need derivatives up to order " + std::to_string(p.degree()));
    v(k) = apply_differential(p, padded);
  }
  return v;
}

Eigen::MatrixXd class_d_matrix(const NormalizedModel& model) {
  const int n = model.n();
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    double pw = 1.0;
    for (int k = 0; k < n; ++k) {
      m(k, i) = pw * model.c()(i);
      pw *= model.lambda()(i);
    }
  }
  return m;
}

Eigen::VectorXd lift_class_D(const NormalizedModel& model, const Eigen::VectorXd& derivs_at_zero) {
  const Eigen::MatrixXd m = class_d_matrix(model);
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  const VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-14 * diag.maxCoeff()))
    throw Error(ErrorCode::SingularM, "M = V diag(c) is numerically singular");
  return lu.solve(boundary_vector(model, derivs_at_zero));
}

Eigen::VectorXd lift_class_D(const NormalizedModel& model, const FieldProfile& phi) {
  return lift_class_D(model, phi.derivatives(0.0, 2 * model.n() - 1));
}

InitialData make_class_d_data(const NormalizedModel& model, FieldProfile phi0, FieldProfile phidot0) {
  InitialData d;
  d.y0 = lift_class_D(model, phi0);
  d.ydot0 = lift_class_D(model, phidot0);
  d.phi0 = std::move(phi0);
  d.phidot0 = std::move(phidot0);
  d.mode = DataMode::ClassD;
  return d;
}

InitialData make_compatible_data(const NormalizedModel& model, FieldProfile phi0, FieldProfile phidot0,
                                 Eigen::VectorXd y0, Eigen::VectorXd ydot0) {
  check_sizes(model, y0, ydot0);
  if (model.theta() == 0.0) {
    const double gap = phi0.value(0.0) - model.c().dot(y0);
    if (std::abs(gap) > kConstraintTol) {
      std::ostringstream os;
      os << "theta = 0 requires phi0(0) = <c, y0>; the difference is " << gap;
      throw Error(ErrorCode::ConstraintViolation, os.str());
    }
  }
  return {std::move(phi0), std::move(phidot0), std::move(y0), std::move(ydot0), DataMode::Compatible};
}

InitialData time_reversed(const InitialData& data) {
  return {data.phi0, data.phidot0.scaled(-1.0), data.y0, -data.ydot0, data.mode};
}

std::shared_ptr<const Characteristics> build_characteristics(const InitialData& data) {
  return std::make_shared<ProfileCharacteristics>(data.phi0, data.phidot0);
}

// ---------------------------------------------------------------- trajectory

double Trajectory::max_relative_drift() const {
  const double e0 = energy_(0);
  double worst = 0.0;
  for (Eigen::Index k = 0; k < energy_.size(); ++k) worst = std::max(worst, std::abs(energy_(k) - e0));
  return e0 != 0.0 ? worst / std::abs(e0) : worst;
}

double Trajectory::b_at(double s, int k) const {
  if (k < 0 || k > 2) throw Error(ErrorCode::OutOfRange, "b derivatives are available up to order 2");
  if (s <= 0.0) return chars_->b(s, k);
  const double T = final_time();
  if (s > T * (1 + 1e-12)) {
    std::ostringstream os;
    os << "b(" << s << ") requested beyond the final time " << T;
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  const int idx = std::clamp(static_cast<int>(std::floor(s / dt_)), 0, steps() - 1);
  const double tau = (s - t_[static_cast<std::size_t>(idx)]) / dt_;
  const Eigen::Index i = idx, j = idx + 1;
  if (k == 0) return hermite(tau, dt_, b_(i), b_(j), bp_(i), bp_(j), 0);
  return hermite(tau, dt_, bp_(i), bp_(j), bpp_(i), bpp_(j), k - 1);
}

double Trajectory::outgoing_energy_until(double t) const {
  double acc = chars_->outgoing_energy();
  if (t <= 0.0) return acc;
  const int last = step_index(t);
  for (int k = 0; k < last; ++k) {
    const Eigen::Index i = k, j = k + 1;
    acc += gauss4(
        [&](double s) {
          const double v = hermite((s - t_[static_cast<std::size_t>(k)]) / dt_, dt_, bp_(i), bp_(j), bpp_(i), bpp_(j), 0);
          return v * v;
        },
        t_[static_cast<std::size_t>(k)], t_[static_cast<std::size_t>(k + 1)]);
  }
  return acc;
}

double Trajectory::incoming_energy_from(double t) const {
  const double hi = chars_->incoming_reach();
  if (t >= hi) return 0.0;
  auto f = [&](double u) {
    const double v = chars_->a(u, 1);
    return v * v;
  };
  return integrate(f, t, hi, unit_breaks(t, hi), kFieldQuad).value;
}

int Trajectory::step_index(double t) const {
  const double k = std::round(t / dt_);
  if (k < 0 || k > steps() || std::abs(k * dt_ - t) > 1e-9 * std::max(1.0, std::abs(t))) {
    std::ostringstream os;
    os << "time " << t << " is not on the trajectory grid (dt = " << dt_ << ", T = " << final_time() << ")";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  return static_cast<int>(k);
}

// ---------------------------------------------------------------- evolve

Trajectory evolve(const NormalizedModel& model, const InitialData& data, const EvolveOptions& options) {
  check_sizes(model, data.y0, data.ydot0);
  if (model.theta() == 0.0) {
    const double gap = data.phi0.value(0.0) - model.c().dot(data.y0);
    if (std::abs(gap) > kConstraintTol) {
      std::ostringstream os;
      os << "theta = 0 requires phi0(0) = <c, y0>; the difference is " << gap;
      throw Error(ErrorCode::ConstraintViolation, os.str());
    }
  }
  return evolve(model, build_characteristics(data), data.y0, data.ydot0, options);
}

Trajectory evolve(const NormalizedModel& model, std::shared_ptr<const Characteristics> chars,
                  const Eigen::VectorXd& y0, const Eigen::VectorXd& ydot0, const EvolveOptions& options) {
  check_sizes(model, y0, ydot0);
  if (!(options.dt > 0) || !(options.final_time > 0))
    throw Error(ErrorCode::OutOfRange, "final time and dt must be positive");
  if (options.potential && options.potential->dimension() != model.n())
    throw Error(ErrorCode::ConfigError, "potential dimension does not match the model");

  const int n = model.n();
  const double theta = model.theta();
  const bool relax = theta != 0.0;
  const int steps = std::max(1, static_cast<int>(std::ceil(options.final_time / options.dt - 1e-9)));
  const double dt = options.final_time / steps;
  const VectorXd& lam = model.lambda();
  const VectorXd& c = model.c();
  const Potential* pot = options.potential.get();

  Trajectory tr(model);
  tr.chars_ = chars;
  tr.potential_ = options.potential;
  tr.dt_ = dt;
  tr.state_dim_ = relax ? 2 * n + 1 : 2 * n;
  if (tr.state_dim_ != model.boundary_degree())
    throw Error(ErrorCode::InvalidModel, "reduced state dimension differs from deg p");
  if (relax && dt > std::abs(theta) / 5.0) {
    std::ostringstream os;
    os << "StiffWarning: dt = " << dt << " exceeds |theta|/5 = " << std::abs(theta) / 5.0
       << "; the boundary relaxation is under-resolved";
    tr.warnings_.push_back(os.str());
  }

  auto force = [&](const VectorXd& y) -> VectorXd {
    if (pot) return -pot->gradient(y);
    return lam.cwiseProduct(y);
  };
  auto potential_energy = [&](const VectorXd& y) {
    if (pot) return pot->value(y);
    return -0.5 * y.dot(lam.cwiseProduct(y));
  };

  // state layout: [b,] y, ydot
  const int off = relax ? 1 : 0;
  auto rhs = [&](double t, const VectorXd& s) -> VectorXd {
    VectorXd d(s.size());
    const auto y = s.segment(off, n);
    const auto yd = s.segment(off + n, n);
    double phi_x;
    if (relax) {
      const double g = chars->a(t, 0) + s(0) - c.dot(y);
      phi_x = -g / theta;
      d(0) = chars->a(t, 1) + g / theta;
    } else {
      phi_x = 2.0 * chars->a(t, 1) - c.dot(yd);
    }
    d.segment(off, n) = yd;
    d.segment(off + n, n) = force(y) + c * phi_x;
    return d;
  };

  VectorXd state(tr.state_dim_);
  if (relax) state(0) = chars->b(0.0, 0);
  state.segment(off, n) = y0;
  state.segment(off + n, n) = ydot0;

  tr.t_.resize(static_cast<std::size_t>(steps + 1));
  tr.y_.resize(n, steps + 1);
  tr.ydot_.resize(n, steps + 1);
  tr.b_.resize(steps + 1);
  tr.bp_.resize(steps + 1);
  tr.bpp_.resize(steps + 1);
  tr.energy_.resize(steps + 1);

  double field_in = chars->incoming_energy();
  double field_out = chars->outgoing_energy();

  auto record = [&](int k, double t) {
    const VectorXd y = state.segment(off, n);
    const VectorXd yd = state.segment(off + n, n);
    const double a0 = chars->a(t, 0), a1 = chars->a(t, 1), a2 = chars->a(t, 2);
    double b, bp, bpp;
    if (relax) {
      b = state(0);
      const double g = a0 + b - c.dot(y);
      bp = a1 + g / theta;
      bpp = a2 + (a1 + bp - c.dot(yd)) / theta;
    } else {
      b = c.dot(y) - a0;
      bp = c.dot(yd) - a1;
      const double phi_x = 2.0 * a1 - c.dot(yd);
      bpp = c.dot(force(y) + c * phi_x) - a2;
    }
    tr.t_[static_cast<std::size_t>(k)] = t;
    tr.y_.col(k) = y;
    tr.ydot_.col(k) = yd;
    tr.b_(k) = b;
    tr.bp_(k) = bp;
    tr.bpp_(k) = bpp;

    const double phi0 = a0 + b, phi_x = a1 - bp;
    const double gap = phi0 - c.dot(y);
    tr.boundary_residual_ = std::max(tr.boundary_residual_, std::abs(theta * phi_x + gap));

    // field_in / field_out must already cover [t, inf) and (-inf, t]
    double e = field_in + field_out + 0.5 * yd.squaredNorm() + potential_energy(y);
    if (relax) e -= gap * gap / (2.0 * theta);
    tr.energy_(k) = e;
  };

  record(0, 0.0);
  for (int k = 0; k < steps; ++k) {
    const double t = k * dt;
    const VectorXd k1 = rhs(t, state);
    const VectorXd k2 = rhs(t + 0.5 * dt, state + 0.5 * dt * k1);
    const VectorXd k3 = rhs(t + 0.5 * dt, state + 0.5 * dt * k2);
    const VectorXd k4 = rhs(t + dt, state + dt * k3);
    state += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!state.allFinite()) {
      std::ostringstream os;
      os << "state overflowed at t = " << t + dt;
      throw Error(ErrorCode::NonFiniteState, os.str());
    }
    const double tn = (k + 1) * dt;
    field_in -= gauss4(
        [&](double u) {
          const double v = chars->a(u, 1);
          return v * v;
        },
        t, tn);
    // b' on the new cell needs the end-of-step b' and b'', so the outgoing
    // integral is added after recording and the energy corrected with it
    const double bp0 = tr.bp_(k), bpp0 = tr.bpp_(k);
    record(k + 1, tn);
    const double bp1 = tr.bp_(k + 1), bpp1 = tr.bpp_(k + 1);
    const double added = gauss4(
        [&](double s) {
          const double v = hermite((s - t) / dt, dt, bp0, bp1, bpp0, bpp1, 0);
          return v * v;
        },
        t, tn);
    field_out += added;
    tr.energy_(k + 1) += added;
  }
  return tr;
}

// ---------------------------------------------------------------- energy

EnergyBreakdown energy(const Trajectory& traj, double t) {
  const int k = traj.step_index(t);
  t = traj.times()[static_cast<std::size_t>(k)];
  const auto& model = traj.model();
  const auto& chars = traj.characteristics();
  const VectorXd y = traj.y().col(k);
  const VectorXd yd = traj.ydot().col(k);

  const double A = traj.incoming_energy_from(t);
  const double B = traj.outgoing_energy_until(t);

  // C = int_0^inf a'(x + t) b'(t - x) dx, split at x = t where b' switches to the data
  double C = 0.0;
  const double dt = traj.dt();
  for (int j = 0; j < k; ++j) {
    const double s0 = j * dt, s1 = (j + 1) * dt;
    C += gauss4([&](double s) { return chars.a(2.0 * t - s, 1) * traj.b_at(s, 1); }, s0, s1);
  }
  const double x_hi = std::min(chars.incoming_reach() - t, chars.outgoing_reach() + t);
  if (x_hi > t) {
    auto f = [&](double x) { return chars.a(x + t, 1) * chars.b(t - x, 1); };
    C += integrate(f, t, x_hi, unit_breaks(t, x_hi), kFieldQuad).value;
  }

  EnergyBreakdown e;
  e.field_gradient = 0.5 * (A + B) - C;
  e.field_kinetic = 0.5 * (A + B) + C;
  e.oscillator_kinetic = 0.5 * yd.squaredNorm();
  e.oscillator_potential = traj.potential() ? traj.potential()->value(y)
                                            : -0.5 * y.dot(model.lambda().cwiseProduct(y));
  if (model.theta() != 0.0) {
    const double gap = traj.a_at(t, 0) + traj.b_at(t, 0) - model.c().dot(y);
    e.boundary = -gap * gap / (2.0 * model.theta());
  }
  e.total = e.field_gradient + e.field_kinetic + e.oscillator_kinetic + e.oscillator_potential + e.boundary;
  return e;
}

EnergyBreakdown initial_energy(const NormalizedModel& model, const InitialData& data, const Potential* potential) {
  EnergyBreakdown e;
  const double hi = std::max(data.phi0.support().second, data.phidot0.support().second);
  std::vector<double> breaks = data.phi0.breakpoints();
  const auto more = data.phidot0.breakpoints();
  breaks.insert(breaks.end(), more.begin(), more.end());
  if (hi > 0.0) {
    e.field_gradient = 0.5 * integrate(
                                 [&](double x) {
                                   const double v = data.phi0.derivative(x, 1);
                                   return v * v;
                                 },
                                 0.0, hi, breaks, kFieldQuad)
                                 .value;
    e.field_kinetic = 0.5 * integrate(
                                [&](double x) {
                                  const double v = data.phidot0.value(x);
                                  return v * v;
                                },
                                0.0, hi, breaks, kFieldQuad)
                                .value;
  }
  e.oscillator_kinetic = 0.5 * data.ydot0.squaredNorm();
  e.oscillator_potential =
      potential ? potential->value(data.y0) : -0.5 * data.y0.dot(model.lambda().cwiseProduct(data.y0));
  if (model.theta() != 0.0) {
    const double gap = data.phi0.value(0.0) - model.c().dot(data.y0);
    e.boundary = -gap * gap / (2.0 * model.theta());
  }
  e.total = e.field_gradient + e.field_kinetic + e.oscillator_kinetic + e.oscillator_potential + e.boundary;
  return e;
}

// ---------------------------------------------------------------- snapshots

std::vector<FieldSample> field_snapshot(const Trajectory& traj, double t, const std::vector<double>& xs) {
  if (!(t >= 0.0) || t > traj.final_time() * (1 + 1e-12)) {
    std::ostringstream os;
    os << "snapshot time " << t << " outside [0, " << traj.final_time() << "]";
    throw Error(ErrorCode::OutOfRange, os.str());
  }
  std::vector<FieldSample> out;
  out.reserve(xs.size());
  for (double x : xs) {
    if (x < 0.0) throw Error(ErrorCode::OutOfRange, "snapshot points must be >= 0");
    out.push_back({x, traj.a_at(x + t, 0) + traj.b_at(t - x, 0), traj.a_at(x + t, 1) + traj.b_at(t - x, 1)});
  }
  return out;
}

double fit_decay_rate(const Trajectory& traj, double t0, double t1) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (int k = 0; k <= traj.steps(); ++k) {
    const double t = traj.times()[static_cast<std::size_t>(k)];
    if (t < t0 || t > t1) continue;
    const double norm = std::sqrt(traj.y().col(k).squaredNorm() + traj.ydot().col(k).squaredNorm());
    if (!(norm > 0.0)) continue;
    const double l = std::log(norm);
    sx += t;
    sy += l;
    sxx += t * t;
    sxy += t * l;
    ++m;
  }
  if (m < 2) throw Error(ErrorCode::OutOfRange, "not enough nonzero samples for a decay fit");
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace lambscat
