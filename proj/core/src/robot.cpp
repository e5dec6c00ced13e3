#include "invsep/robot.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/SVD>

#include "invsep/errors.hpp"

namespace invsep {

double collinearity_ratio(const std::vector<Eigen::Vector2d>& points) {
  if (points.empty()) return 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& p : points) centroid += p;
  centroid /= static_cast<double>(points.size());

  Eigen::MatrixXd centered(points.size(), 2);
  for (std::size_t i = 0; i < points.size(); ++i) {
    centered.row(static_cast<Eigen::Index>(i)) = (points[i] - centroid).transpose();
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(centered);
  const auto& sv = svd.singularValues();
  if (sv[0] == 0.0) return 0.0;
  return sv[1] / sv[0];
}

LandmarkSet::LandmarkSet(std::vector<Eigen::Vector2d> points) : points_(std::move(points)) {
  if (points_.size() < 3) {
    std::ostringstream msg;
    msg << "landmarks: need at least 3 landmarks, got " << points_.size();
    throw ConfigError(msg.str());
  }
  for (const auto& p : points_) {
    if (!p.allFinite()) throw ConfigError("landmarks: non-finite coordinate");
  }
  const double ratio = collinearity_ratio(points_);
  if (ratio < kCollinearityThreshold) {
    std::ostringstream msg;
    msg << "landmarks: collinear (singular value ratio " << ratio << " < "
        << kCollinearityThreshold << ")";
    throw ConfigError(msg.str());
  }
}

Eigen::Vector3d dynamics(const GroupElement& g, const RobotInput& input) {
  return {input.u * std::cos(g.theta()), input.u * std::sin(g.theta()), input.u * input.v};
}

Measurement measure(const GroupElement& g, const LandmarkSet& landmarks) {
  Measurement out(static_cast<Eigen::Index>(landmarks.size()));
  const Eigen::Vector2d p = g.position();
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = (p - landmarks[i]).squaredNorm();
  }
  return out;
}

LandmarkSet act(const GroupElement& g0, const LandmarkSet& landmarks) {
  std::vector<Eigen::Vector2d> moved;
  moved.reserve(landmarks.size());
  for (const auto& p : landmarks.points()) {
    moved.push_back(compose(g0, GroupElement(p.x(), p.y(), 0.0)).position());
  }
  return LandmarkSet(std::move(moved));
}

RobotFrame act(const GroupElement& g0, const RobotFrame& frame) {
  return {compose(g0, frame.pose), frame.input, act(g0, frame.landmarks), frame.output};
}

double invariance_residual(const GroupElement& g0, const GroupElement& g,
                           const RobotInput& input, const LandmarkSet& landmarks) {
  const RobotFrame moved = act(g0, RobotFrame{g, input, landmarks, measure(g, landmarks)});
  const Eigen::Vector3d lhs = dynamics(moved.pose, moved.input);
  const Eigen::Vector3d rhs = transport_tangent(g0, dynamics(g, input));
  const double state_residual = (lhs - rhs).cwiseAbs().maxCoeff();
  const double output_residual =
      (measure(moved.pose, moved.landmarks) - moved.output).cwiseAbs().maxCoeff();
  return std::max(state_residual, output_residual);
}

}  // namespace invsep
