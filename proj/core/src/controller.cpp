#include "invsep/controller.hpp"

#include <cmath>

#include "invsep/errors.hpp"

namespace invsep {

void ControllerGains::validate() const {
  if (!(k1 > 0.0)) throw ConfigError("gains.k1: must satisfy k1 > 0");
  if (!(k2 > 0.0)) throw ConfigError("gains.k2: must satisfy k2 > 0");
  if (!(k3 > 0.0)) throw ConfigError("gains.k3: must satisfy k3 > 0");
}

TrackingError tracking_error(const GroupElement& reference, const GroupElement& g) {
  return TrackingError::from_vector(compose(inverse(reference), g).vector());
}

RobotInput feedback(const TrackingError& eta_hat, double u_r, double v_r,
                    const ControllerGains& gains) {
  if (u_r == 0.0) {
    throw DegenerateReferenceError("feedback: reference speed u_r = 0, controller undefined");
  }
  const double sgn = u_r > 0.0 ? 1.0 : -1.0;
  const double u = u_r - u_r * v_r * eta_hat.eta_y - std::abs(u_r) * gains.k1 * eta_hat.eta_x;
  const double v = v_r + v_r * sgn * gains.k1 * eta_hat.eta_x + v_r * v_r * eta_hat.eta_y -
                   gains.k2 * eta_hat.eta_y - sgn * gains.k3 * eta_hat.eta_theta;
  return {u, v};
}

Matrix ctrl_loop_matrix(double u_r, double v_r, const ControllerGains& gains) {
  const double au = std::abs(u_r);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 0) = -au * gains.k1;
  a(1, 0) = -u_r * v_r;
  a(1, 2) = u_r;
  a(2, 1) = -u_r * gains.k2;
  a(2, 2) = -au * gains.k3;
  return a;
}

Eigen::Vector3d tracking_error_rate(const GroupElement& reference,
                                    const RobotInput& reference_input,
                                    const GroupElement& g, const RobotInput& input) {
  return relative_rate(reference, dynamics(reference, reference_input), g, dynamics(g, input));
}

}  // namespace invsep
