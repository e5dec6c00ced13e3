#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "invsep/lie.hpp"

namespace invsep {

/// Unicycle inputs: forward speed u [m/s] and steering tangent v [1/m],
/// so that the heading rate is u * v.
struct RobotInput {
  double u = 0.0;
  double v = 0.0;
};

/// Known planar landmark positions. At least three, not all collinear.
class LandmarkSet {
 public:
  /// Throws ConfigError if fewer than three points, any point is
  /// non-finite, or the points are (numerically) collinear.
  explicit LandmarkSet(std::vector<Eigen::Vector2d> points);

  std::size_t size() const noexcept { return points_.size(); }
  const Eigen::Vector2d& operator[](std::size_t i) const { return points_[i]; }
  const std::vector<Eigen::Vector2d>& points() const noexcept { return points_; }

 private:
  std::vector<Eigen::Vector2d> points_;
};

/// Squared ranges lambda_i to each landmark, in landmark order [m^2].
using Measurement = Eigen::VectorXd;

/// Ratio of the smallest to the largest singular value of the centered
/// landmark coordinates; zero for collinear sets.
double collinearity_ratio(const std::vector<Eigen::Vector2d>& points);

inline constexpr double kCollinearityThreshold = 1e-8;

/// (u cos theta, u sin theta, u v)
Eigen::Vector3d dynamics(const GroupElement& g, const RobotInput& input);

Measurement measure(const GroupElement& g, const LandmarkSet& landmarks);

/// Everything the transformation group acts on.
struct RobotFrame {
  GroupElement pose;
  RobotInput input;
  LandmarkSet landmarks;
  Measurement output;
};

/// Moves landmarks rigidly by g0.
LandmarkSet act(const GroupElement& g0, const LandmarkSet& landmarks);

/// Left-multiplies the pose and landmarks by g0; inputs and ranges are
/// invariant and come back unchanged.
RobotFrame act(const GroupElement& g0, const RobotFrame& frame);

/// Largest violation of the invariance identities
///   f(g0 g, u) = g0 f(g, u)   and   h(g0 g, g0 lm) = h(g, lm).
double invariance_residual(const GroupElement& g0, const GroupElement& g,
                           const RobotInput& input, const LandmarkSet& landmarks);

}  // namespace invsep
