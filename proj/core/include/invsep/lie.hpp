#pragma once

#include <Eigen/Core>

namespace invsep {

/// Wraps an angle into (-pi, pi].
double wrap_angle(double angle);

/// Planar pose (x, y, theta), an element of SE(2).
///
/// theta is kept in (-pi, pi] by every constructor and group operation.
class GroupElement {
 public:
  constexpr GroupElement() = default;
  GroupElement(double x, double y, double theta);

  static GroupElement identity() { return {}; }
  static GroupElement from_vector(const Eigen::Vector3d& v) {
    return {v.x(), v.y(), v.z()};
  }

  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }
  double theta() const noexcept { return theta_; }
  Eigen::Vector2d position() const { return {x_, y_}; }
  Eigen::Vector3d vector() const { return {x_, y_, theta_}; }

 private:
  double x_ = 0.0;
  double y_ = 0.0;
  double theta_ = 0.0;
};

/// Element of se(2) identified with R^3: (vx, vy, omega).
struct TangentVector {
  double vx = 0.0;
  double vy = 0.0;
  double omega = 0.0;

  constexpr TangentVector() = default;
  /// Throws std::invalid_argument on non-finite components.
  TangentVector(double vx, double vy, double omega);

  static TangentVector from_vector(const Eigen::Vector3d& v) {
    return {v.x(), v.y(), v.z()};
  }
  Eigen::Vector3d vector() const { return {vx, vy, omega}; }
};

GroupElement compose(const GroupElement& a, const GroupElement& b);
GroupElement inverse(const GroupElement& g);

inline GroupElement operator*(const GroupElement& a, const GroupElement& b) {
  return compose(a, b);
}

/// Closed-form SE(2) exponential.
GroupElement exp(const TangentVector& xi);

/// Principal-branch logarithm. Throws BranchError when theta == pi.
TangentVector log(const GroupElement& g);

/// Pushes a tangent vector through left multiplication by g: rotates the
/// translational block by g.theta and leaves omega alone.
TangentVector transport_tangent(const GroupElement& g, const TangentVector& xi);
Eigen::Vector3d transport_tangent(const GroupElement& g, const Eigen::Vector3d& xi);

/// Time derivative of the coordinates of a^{-1} b, given the coordinate
/// derivatives of a and b.
Eigen::Vector3d relative_rate(const GroupElement& a, const Eigen::Vector3d& a_dot,
                              const GroupElement& b, const Eigen::Vector3d& b_dot);

/// Componentwise max |a - b| with the angle difference wrapped.
double distance(const GroupElement& a, const GroupElement& b);

}  // namespace invsep
