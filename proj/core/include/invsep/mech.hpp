#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "invsep/numerics.hpp"

namespace invsep::mech {

Eigen::Matrix3d hat(const Eigen::Vector3d& w);
Eigen::Vector3d vee(const Eigen::Matrix3d& m);
/// Rodrigues formula.
Eigen::Matrix3d so3_exp(const Eigen::Vector3d& w);
/// Nearest rotation in the Frobenius sense (polar factor via SVD).
Eigen::Matrix3d project_to_so3(const Eigen::Matrix3d& m);

/// Body torque F(attitude, body velocity).
using ForceModel = std::function<Eigen::Vector3d(const Eigen::Matrix3d&, const Eigen::Vector3d&)>;

ForceModel no_force();
/// F = -D xi with D = diag(damping).
ForceModel linear_damping(const Eigen::Vector3d& damping);
/// Torque of gravity acting on a point mass fixed at offset (body frame):
/// F = offset x (mass * R^T gravity). Depends on the attitude.
ForceModel offset_mass_gravity(double mass, const Eigen::Vector3d& offset,
                               const Eigen::Vector3d& gravity);

/// Rigid body on SO(3) in Euler-Poincare form:
///   R' = R hat(xi),   xi' = A(xi) + I^{-1} (F(R, xi) + u),
/// with A(xi) = I^{-1} (I xi x xi).
struct EpSystem {
  Eigen::Matrix3d attitude = Eigen::Matrix3d::Identity();
  Eigen::Vector3d velocity = Eigen::Vector3d::Zero();
  Eigen::Matrix3d inertia = Eigen::Matrix3d::Identity();
  ForceModel force = no_force();

  /// Attitude orthonormal with det +1 (1e-9), inertia symmetric positive definite.
  void validate() const;
};

Eigen::Vector3d bilinear_term(const Eigen::Matrix3d& inertia, const Eigen::Vector3d& xi);

struct EpDerivative {
  Eigen::Matrix3d attitude_dot;
  Eigen::Vector3d velocity_dot;
};

EpDerivative ep_dynamics(const EpSystem& s, const Eigen::Vector3d& torque);

double kinetic_energy(const Eigen::Matrix3d& inertia, const Eigen::Vector3d& xi);

struct RigidBodySample {
  double t;
  Eigen::Matrix3d attitude;
  Eigen::Vector3d velocity;
};

/// Unforced-input RK4 run (u = 0) with the attitude projected back onto
/// SO(3) after each step.
std::vector<RigidBodySample> integrate_rigid_body(const EpSystem& s, double t_end, double dt);

/// Finite-difference linearizations of the tracking error (x_r^{-1} x, xi - xi_r)
/// around the reference x_r(t) = R0 exp(t hat(xi_r)) driven by the feedforward
/// torque that keeps xi_r constant. R0 is s.attitude.
std::vector<Matrix> lemma1_linearizations(const EpSystem& s, const Eigen::Vector3d& xi_r,
                                          std::span<const double> times);

/// Largest pairwise deviation of lemma1_linearizations. Below round-off when
/// the force Jacobians do not depend on the attitude.
double lemma1_probe(const EpSystem& s, const Eigen::Vector3d& xi_r,
                    std::span<const double> times);

}  // namespace invsep::mech
