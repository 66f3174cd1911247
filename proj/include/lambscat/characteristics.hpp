#ifndef LAMBSCAT_CHARACTERISTICS_HPP
#define LAMBSCAT_CHARACTERISTICS_HPP

#include "lambscat/profile.hpp"

#include <memory>
#include <utility>

namespace lambscat {

class Trajectory;

/// The d'Alembert pieces phi(t, x) = a(x + t) + b(t - x) that are known
/// before the boundary acts: the incoming part a on [0, inf) and the
/// outgoing part b on (-inf, 0]. The additive constant is fixed so that
/// a(x) = phi0(x)/2 - (1/2) int_x^inf phidot0.
class Characteristics {
 public:
  virtual ~Characteristics() = default;

  /// a^{(k)}(u) for u >= 0, k = 0, 1, 2.
  virtual double a(double u, int k = 0) const = 0;
  /// b^{(k)}(s) for s <= 0, k = 0, 1, 2.
  virtual double b(double s, int k = 0) const = 0;

  /// a' vanishes to working precision beyond this point.
  virtual double incoming_reach() const = 0;
  /// b' vanishes to working precision below -outgoing_reach().
  virtual double outgoing_reach() const = 0;

  /// int_0^inf a'^2, by adaptive quadrature.
  virtual double incoming_energy() const;
  /// int_{-inf}^0 b'^2, by adaptive quadrature.
  virtual double outgoing_energy() const;
};

/// Characteristics of initial profiles (phi0, phidot0) on the half-line.
class ProfileCharacteristics final : public Characteristics {
 public:
  ProfileCharacteristics(FieldProfile phi0, FieldProfile phidot0);

  double a(double u, int k = 0) const override;
  double b(double s, int k = 0) const override;
  double incoming_reach() const override { return reach_; }
  double outgoing_reach() const override { return reach_; }

  const FieldProfile& phi0() const { return phi0_; }
  const FieldProfile& phidot0() const { return phidot0_; }

 private:
  FieldProfile phi0_;
  FieldProfile phidot0_;
  double reach_;
};

/// The characteristics of the state reached at time t0 along a trajectory:
/// a_t(u) = a(u + t0) and b_t(s) = b(s + t0), where b on (0, t0] comes from
/// the trajectory's dense output.
class ShiftedCharacteristics final : public Characteristics {
 public:
  ShiftedCharacteristics(std::shared_ptr<const Trajectory> trajectory, double t0);

  double a(double u, int k = 0) const override;
  double b(double s, int k = 0) const override;
  double incoming_reach() const override;
  double outgoing_reach() const override;
  /// int_{-inf}^{t0} b'^2 of the underlying trajectory.
  double outgoing_energy() const override;

 private:
  std::shared_ptr<const Trajectory> traj_;
  double t0_;
};

}  // namespace lambscat

#endif  // LAMBSCAT_CHARACTERISTICS_HPP
