#include "invsep/observer.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/LU>

#include "invsep/errors.hpp"

namespace invsep {

void ObserverGains::validate() const {
  if (!(l1 > 0.0)) throw ConfigError("gains.l1: must satisfy l1 > 0");
  if (!(l2 > 0.0)) throw ConfigError("gains.l2: must satisfy l2 > 0");
  if (!(l3 > 0.0)) throw ConfigError("gains.l3: must satisfy l3 > 0");
}

BodyFrameLandmarks::BodyFrameLandmarks(const GroupElement& x_hat, const LandmarkSet& landmarks,
                                       double condition_bound)
    : matrix_(2, static_cast<Eigen::Index>(landmarks.size())) {
  const double c = std::cos(x_hat.theta());
  const double s = std::sin(x_hat.theta());
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    const Eigen::Vector2d d = landmarks[i] - x_hat.position();
    matrix_.col(static_cast<Eigen::Index>(i)) << c * d.x() + s * d.y(), -s * d.x() + c * d.y();
  }

  // Eigenvalues of the symmetric 2x2 Gram matrix in closed form.
  const Eigen::Matrix2d gram = matrix_ * matrix_.transpose();
  const double mean = 0.5 * gram.trace();
  const double radius = std::hypot(0.5 * (gram(0, 0) - gram(1, 1)), gram(0, 1));
  const double lo = mean - radius;
  const double hi = mean + radius;
  condition_ = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (!(condition_ <= condition_bound)) {
    std::ostringstream msg;
    msg << "observer: landmark Gram matrix ill-conditioned (condition number " << condition_
        << " > " << condition_bound << ")";
    throw GeometryError(msg.str(), condition_);
  }
}

BodyFrameLandmarks body_frame_landmarks(const GroupElement& x_hat, const LandmarkSet& landmarks) {
  return BodyFrameLandmarks(x_hat, landmarks);
}

Eigen::VectorXd output_error(const GroupElement& x_hat, const LandmarkSet& landmarks,
                             const Measurement& y) {
  if (static_cast<std::size_t>(y.size()) != landmarks.size()) {
    throw std::invalid_argument("output_error: measurement size does not match landmarks");
  }
  return measure(x_hat, landmarks) - y;
}

Eigen::Matrix<double, 3, 2> observer_shaping(double u, double v, const ObserverGains& gains) {
  const double au = std::abs(u);
  Eigen::Matrix<double, 3, 2> shaping;
  shaping << au * gains.l1, u * v,
             -u * v,        au * gains.l2,
             0.0,           u * gains.l3;
  return shaping;
}

Eigen::Matrix3Xd gain_matrix(const BodyFrameLandmarks& body, double u, double v,
                             const ObserverGains& gains) {
  const Eigen::Matrix2Xd& im = body.matrix();
  const Eigen::Matrix2d gram = im * im.transpose();
  return -0.5 * observer_shaping(u, v, gains) * gram.inverse() * im;
}

Eigen::Vector3d observer_field(const GroupElement& x_hat, const RobotInput& input,
                               const LandmarkSet& landmarks, const Measurement& y,
                               const ObserverGains& gains, double condition_bound) {
  const BodyFrameLandmarks body(x_hat, landmarks, condition_bound);
  const Eigen::Vector3d correction =
      gain_matrix(body, input.u, input.v, gains) * output_error(x_hat, landmarks, y);
  return dynamics(x_hat, input) - transport_tangent(x_hat, correction);
}

Matrix obs_error_matrix(double u, double /*v*/, const ObserverGains& gains) {
  const double au = std::abs(u);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = -au * gains.l1;
  a(1, 1) = -au * gains.l2;
  a(1, 2) = u;
  a(2, 1) = -u * gains.l3;
  return a;
}

}  // namespace invsep
