#pragma once

#include <Eigen/Core>

#include "invsep/lie.hpp"
#include "invsep/numerics.hpp"
#include "invsep/robot.hpp"

namespace invsep {

/// Tracking gains; all strictly positive.
struct ControllerGains {
  double k1 = 1.0;
  double k2 = 1.0;
  double k3 = 1.0;

  /// Throws ConfigError naming the first non-positive gain.
  void validate() const;
};

/// Invariant tracking error g_r^{-1} g, expressed in the reference body frame.
struct TrackingError {
  double eta_x = 0.0;
  double eta_y = 0.0;
  double eta_theta = 0.0;

  Eigen::Vector3d vector() const { return {eta_x, eta_y, eta_theta}; }
  static TrackingError from_vector(const Eigen::Vector3d& v) { return {v.x(), v.y(), v.z()}; }
};

TrackingError tracking_error(const GroupElement& reference, const GroupElement& g);

/// Invariant tracking law around the reference input (u_r, v_r):
///   u = u_r - u_r v_r eta_y - |u_r| k1 eta_x
///   v = v_r + v_r sign(u_r) k1 eta_x + v_r^2 eta_y - k2 eta_y - sign(u_r) k3 eta_theta
/// Throws DegenerateReferenceError for u_r = 0.
RobotInput feedback(const TrackingError& eta_hat, double u_r, double v_r,
                    const ControllerGains& gains);

/// Closed-loop linearization of the tracking error under feedback().
Matrix ctrl_loop_matrix(double u_r, double v_r, const ControllerGains& gains);

/// Nonlinear rate of the tracking error coordinates when the reference is
/// driven by reference_input and the robot by input.
Eigen::Vector3d tracking_error_rate(const GroupElement& reference,
                                    const RobotInput& reference_input,
                                    const GroupElement& g, const RobotInput& input);

}  // namespace invsep
