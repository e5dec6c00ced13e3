#include "invsep/lie.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "invsep/errors.hpp"

namespace invsep {
namespace {

constexpr double kSmallAngle = 1e-7;

// sin(w)/w and (1 - cos(w))/w with series fallbacks near zero.
void exp_coefficients(double w, double& a, double& b) {
  if (std::abs(w) < kSmallAngle) {
    const double w2 = w * w;
    a = 1.0 - w2 / 6.0;
    b = w / 2.0 - w * w2 / 24.0;
  } else {
    a = std::sin(w) / w;
    const double half = std::sin(0.5 * w);
    b = 2.0 * half * half / w;  // 1 - cos(w) without cancellation
  }
}

}  // namespace

double wrap_angle(double angle) {
  constexpr double kPi = std::numbers::pi;
  double r = std::remainder(angle, 2.0 * kPi);
  if (r <= -kPi) r += 2.0 * kPi;
  return r;
}

GroupElement::GroupElement(double x, double y, double theta)
    : x_(x), y_(y), theta_(wrap_angle(theta)) {}

TangentVector::TangentVector(double vx_, double vy_, double omega_)
    : vx(vx_), vy(vy_), omega(omega_) {
  if (!std::isfinite(vx) || !std::isfinite(vy) || !std::isfinite(omega)) {
    throw std::invalid_argument("TangentVector: non-finite component");
  }
}

GroupElement compose(const GroupElement& a, const GroupElement& b) {
  const double c = std::cos(a.theta());
  const double s = std::sin(a.theta());
  return {b.x() * c - b.y() * s + a.x(), b.x() * s + b.y() * c + a.y(),
          a.theta() + b.theta()};
}

GroupElement inverse(const GroupElement& g) {
  const double c = std::cos(g.theta());
  const double s = std::sin(g.theta());
  return {-g.x() * c - g.y() * s, g.x() * s - g.y() * c, -g.theta()};
}

GroupElement exp(const TangentVector& xi) {
  double a = 0.0;
  double b = 0.0;
  exp_coefficients(xi.omega, a, b);
  return {a * xi.vx - b * xi.vy, b * xi.vx + a * xi.vy, xi.omega};
}

TangentVector log(const GroupElement& g) {
  const double w = g.theta();
  if (w == std::numbers::pi) {
    throw BranchError("log: theta = pi lies on the branch cut");
  }
  double a = 0.0;
  double b = 0.0;
  exp_coefficients(w, a, b);
  // Inverse of [[a, -b], [b, a]].
  const double det = a * a + b * b;
  return {(a * g.x() + b * g.y()) / det, (-b * g.x() + a * g.y()) / det, w};
}

Eigen::Vector3d transport_tangent(const GroupElement& g, const Eigen::Vector3d& xi) {
  const double c = std::cos(g.theta());
  const double s = std::sin(g.theta());
  return {c * xi.x() - s * xi.y(), s * xi.x() + c * xi.y(), xi.z()};
}

TangentVector transport_tangent(const GroupElement& g, const TangentVector& xi) {
  return TangentVector::from_vector(transport_tangent(g, xi.vector()));
}

Eigen::Vector3d relative_rate(const GroupElement& a, const Eigen::Vector3d& a_dot,
                              const GroupElement& b, const Eigen::Vector3d& b_dot) {
  const double c = std::cos(a.theta());
  const double s = std::sin(a.theta());
  const double dx = b.x() - a.x();
  const double dy = b.y() - a.y();
  const double vx = b_dot.x() - a_dot.x();
  const double vy = b_dot.y() - a_dot.y();
  const double w = a_dot.z();
  // d/dt [R(-theta_a) (p_b - p_a)]
  return {c * vx + s * vy + w * (-s * dx + c * dy),
          -s * vx + c * vy + w * (-c * dx - s * dy),
          b_dot.z() - a_dot.z()};
}

double distance(const GroupElement& a, const GroupElement& b) {
  return std::max({std::abs(a.x() - b.x()), std::abs(a.y() - b.y()),
                   std::abs(wrap_angle(a.theta() - b.theta()))});
}

}  // namespace invsep
