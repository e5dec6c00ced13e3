#pragma once

#include <vector>

#include <Eigen/Core>

#include "invsep/lie.hpp"
#include "invsep/numerics.hpp"
#include "invsep/robot.hpp"
#include "invsep/trajectory.hpp"

namespace invsep {

/// Cartesian extended observer state: estimate and its 3x3 covariance.
struct EkfState {
  GroupElement x_hat;
  Eigen::Matrix3d P = Eigen::Matrix3d::Identity();

  /// Throws Error if P is not symmetric (1e-10) or has an eigenvalue below -1e-10.
  void validate() const;
};

struct EkfJacobians {
  Eigen::Matrix3d F;   // d f / d(x, y, theta)
  Eigen::MatrixX3d H;  // d h / d(x, y, theta), p x 3
};

EkfJacobians ekf_jacobians(const GroupElement& x_hat, const RobotInput& input,
                           const LandmarkSet& landmarks);

struct EkfNoise {
  Eigen::Matrix3d Q;
  Eigen::MatrixXd R;

  /// Q = 1e-3 I, R = 1e-2 I (p x p).
  static EkfNoise defaults(std::size_t landmark_count);
};

/// L = P H^T R^{-1}. Throws Error if R is singular.
Eigen::MatrixXd ekf_gain(const Eigen::MatrixXd& P, const Eigen::MatrixXd& H,
                         const Eigen::MatrixXd& R);

/// Continuous Riccati right-hand side F P + P F^T + Q - P H^T R^{-1} H P,
/// symmetrized. Any consistent dimensions.
Eigen::MatrixXd riccati_rate(const Eigen::MatrixXd& P, const Eigen::MatrixXd& F,
                             const Eigen::MatrixXd& H, const Eigen::MatrixXd& Q,
                             const Eigen::MatrixXd& R);

struct EkfDerivative {
  Eigen::Vector3d x_hat_dot;
  Eigen::Matrix3d P_dot;
};

/// x_hat' = f(x_hat) - L (h(x_hat) - y),  P' = riccati_rate(...)
EkfDerivative ekf_field(const EkfState& state, const RobotInput& input,
                        const LandmarkSet& landmarks, const Measurement& y,
                        const EkfNoise& noise);

/// F - L H at x_hat.
Matrix ekf_error_matrix(const GroupElement& x_hat, const RobotInput& input,
                        const LandmarkSet& landmarks, const Eigen::MatrixXd& L);

/// Runs the EKF alongside a robot that follows ref exactly, starting from a
/// perfect estimate and covariance P0, and returns the filter state at each
/// requested time (ascending, >= 0). P is re-symmetrized after every step.
std::vector<EkfState> ekf_states_along(const Reference& ref, const LandmarkSet& landmarks,
                                       const EkfNoise& noise, const Eigen::Matrix3d& P0,
                                       const std::vector<double>& times, double dt);

/// Packs (x_hat, P) into a 12-vector for the integrator and back.
Vector pack(const EkfState& state);
EkfState unpack_ekf(const Vector& v);

}  // namespace invsep
