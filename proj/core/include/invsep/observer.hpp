#pragma once

#include <Eigen/Core>

#include "invsep/lie.hpp"
#include "invsep/numerics.hpp"
#include "invsep/robot.hpp"

namespace invsep {

struct ObserverGains {
  double l1 = 1.0;
  double l2 = 1.0;
  double l3 = 1.0;

  /// Throws ConfigError naming the first non-positive gain.
  void validate() const;
};

inline constexpr double kDefaultConditionBound = 1e8;

/// Landmark coordinates seen from the estimate: column i is
/// R(-theta_hat) (p_i - p_hat). Invariant under a simultaneous rigid motion of
/// estimate and landmarks.
class BodyFrameLandmarks {
 public:
  /// Throws GeometryError if I I^T is singular or its condition number
  /// exceeds condition_bound.
  BodyFrameLandmarks(const GroupElement& x_hat, const LandmarkSet& landmarks,
                     double condition_bound = kDefaultConditionBound);

  /// 2 x p
  const Eigen::Matrix2Xd& matrix() const noexcept { return matrix_; }
  /// Condition number of I I^T.
  double condition_number() const noexcept { return condition_; }

 private:
  Eigen::Matrix2Xd matrix_;
  double condition_ = 0.0;
};

BodyFrameLandmarks body_frame_landmarks(const GroupElement& x_hat, const LandmarkSet& landmarks);

/// eps_i = |p_hat - p_i|^2 - lambda_i
Eigen::VectorXd output_error(const GroupElement& x_hat, const LandmarkSet& landmarks,
                             const Measurement& y);

/// Invariant state error x^{-1} x_hat (diagnostic only, needs the truth).
inline GroupElement state_error(const GroupElement& x, const GroupElement& x_hat) {
  return compose(inverse(x), x_hat);
}

/// 3x2 shaping matrix
///   [ |u| l1    u v   ]
///   [ -u v     |u| l2 ]
///   [ 0        u l3   ]
/// The last entry carries +u l3: with the true geometry the (e_y, e_theta)
/// block of the error dynamics is then [[-|u| l2, u], [-u l3, 0]], which is
/// Hurwitz for every u != 0.
Eigen::Matrix<double, 3, 2> observer_shaping(double u, double v, const ObserverGains& gains);

/// L = -1/2 * shaping * (I I^T)^{-1} * I, a 3 x p matrix. Satisfies
/// L * (-2 I^T) = shaping exactly, which removes every landmark dependence
/// from the linearized error.
Eigen::Matrix3Xd gain_matrix(const BodyFrameLandmarks& body, double u, double v,
                             const ObserverGains& gains);

/// Invariant observer vector field:
///   x_hat' = f(x_hat, u) - T(x_hat) L eps
Eigen::Vector3d observer_field(const GroupElement& x_hat, const RobotInput& input,
                               const LandmarkSet& landmarks, const Measurement& y,
                               const ObserverGains& gains,
                               double condition_bound = kDefaultConditionBound);

/// Linearized invariant estimation error; depends on (u, gains) only.
Matrix obs_error_matrix(double u, double v, const ObserverGains& gains);

}  // namespace invsep
