#include "lambscat/characteristics.hpp"

#include "lambscat/dynamics.hpp"
#include "lambscat/errors.hpp"
#include "lambscat/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace lambscat {

namespace {

void check_order(int k) {
  if (k < 0 || k > 2) throw Error(ErrorCode::OutOfRange, "characteristic derivatives are available up to order 2");
}

// unit panels keep the adaptive rule from skipping narrow pulses
std::vector<double> unit_breaks(double lo, double hi) {
  std::vector<double> out;
  for (double x = std::ceil(lo); x < hi; x += 1.0) out.push_back(x);
  return out;
}

const QuadratureOptions kEnergyQuad{1e-14, 1e-13, 20000};

}  // namespace

double Characteristics::incoming_energy() const {
  const double hi = incoming_reach();
  if (hi <= 0.0) return 0.0;
  auto f = [&](double u) {
    const double v = a(u, 1);
    return v * v;
  };
  return integrate(f, 0.0, hi, unit_breaks(0.0, hi), kEnergyQuad).value;
}

double Characteristics::outgoing_energy() const {
  const double lo = -outgoing_reach();
  if (lo >= 0.0) return 0.0;
  auto f = [&](double s) {
    const double v = b(s, 1);
    return v * v;
  };
  return integrate(f, lo, 0.0, unit_breaks(lo, 0.0), kEnergyQuad).value;
}

ProfileCharacteristics::ProfileCharacteristics(FieldProfile phi0, FieldProfile phidot0)
    : phi0_(std::move(phi0)), phidot0_(std::move(phidot0)) {
  reach_ = std::max(phi0_.support().second, phidot0_.support().second);
}

double ProfileCharacteristics::a(double u, int k) const {
  check_order(k);
  if (u < -1e-12) throw Error(ErrorCode::OutOfRange, "a is known from the data only on [0, inf)");
  u = std::max(u, 0.0);
  switch (k) {
    case 0: return 0.5 * phi0_.value(u) - 0.5 * phidot0_.tail_integral(u);
    case 1: return 0.5 * (phidot0_.value(u) + phi0_.derivative(u, 1));
    default: return 0.5 * (phidot0_.derivative(u, 1) + phi0_.derivative(u, 2));
  }
}

double ProfileCharacteristics::b(double s, int k) const {
  check_order(k);
  if (s > 1e-12) throw Error(ErrorCode::OutOfRange, "b is known from the data only on (-inf, 0]");
  const double x = std::max(-s, 0.0);
  switch (k) {
    case 0: return 0.5 * phi0_.value(x) + 0.5 * phidot0_.tail_integral(x);
    case 1: return 0.5 * (phidot0_.value(x) - phi0_.derivative(x, 1));
    default: return -0.5 * (phidot0_.derivative(x, 1) - phi0_.derivative(x, 2));
  }
}

ShiftedCharacteristics::ShiftedCharacteristics(std::shared_ptr<const Trajectory> trajectory, double t0)
    : traj_(std::move(trajectory)), t0_(t0) {
  if (!(t0_ >= 0.0) || t0_ > traj_->final_time() * (1 + 1e-14))
    throw Error(ErrorCode::OutOfRange, "restart time outside the trajectory");
}

double ShiftedCharacteristics::a(double u, int k) const {
  return traj_->characteristics().a(u + t0_, k);
}

double ShiftedCharacteristics::b(double s, int k) const {
  if (s > 1e-12) throw Error(ErrorCode::OutOfRange, "b is known from the data only on (-inf, 0]");
  return traj_->b_at(std::min(s, 0.0) + t0_, k);
}

double ShiftedCharacteristics::outgoing_energy() const { return traj_->outgoing_energy_until(t0_); }

double ShiftedCharacteristics::incoming_reach() const {
  return std::max(traj_->characteristics().incoming_reach() - t0_, 0.0);
}

double ShiftedCharacteristics::outgoing_reach() const {
  return traj_->characteristics().outgoing_reach() + t0_;
}

}  // namespace lambscat
