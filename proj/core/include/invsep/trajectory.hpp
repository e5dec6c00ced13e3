#pragma once

#include <span>
#include <variant>
#include <vector>

#include "invsep/lie.hpp"
#include "invsep/robot.hpp"

namespace invsep {

/// Reference driven by a constant invariant input (u_bar, v_bar): a circle of
/// radius 1/|v_bar| or, for v_bar = 0, a straight line.
class PermanentTrajectory {
 public:
  PermanentTrajectory(double u_bar, double v_bar, GroupElement origin = {});

  /// origin * exp(t * (u_bar, 0, u_bar * v_bar))
  GroupElement pose(double t) const;
  RobotInput reference_input() const { return {u_bar_, v_bar_}; }
  /// Constant body velocity (u_bar, 0, u_bar v_bar).
  TangentVector body_velocity() const { return {u_bar_, 0.0, u_bar_ * v_bar_}; }
  /// Time to close the circle, +inf for lines and rest.
  double period() const;

  double u_bar() const noexcept { return u_bar_; }
  double v_bar() const noexcept { return v_bar_; }
  const GroupElement& origin() const noexcept { return origin_; }

 private:
  double u_bar_;
  double v_bar_;
  GroupElement origin_;
};

/// Permanent arcs chained end to end. The last segment continues
/// indefinitely past its nominal duration.
class PiecewiseTrajectory {
 public:
  struct Segment {
    double u;
    double v;
    double duration;
  };

  PiecewiseTrajectory(std::vector<Segment> segments, GroupElement origin = {});

  GroupElement pose(double t) const;
  RobotInput input(double t) const;
  /// Start time of every segment after the first.
  std::vector<double> switch_times() const;

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  const GroupElement& origin() const noexcept { return origin_; }

 private:
  std::size_t segment_index(double t) const;

  std::vector<Segment> segments_;
  std::vector<double> start_times_;
  std::vector<GroupElement> start_poses_;
  GroupElement origin_;
};

/// Constant speed with sinusoidal steering v(t) = v0 + amplitude sin(frequency t).
/// Not permanent unless amplitude = 0; pose is obtained by RK4 quadrature.
class SteeringSinusoid {
 public:
  SteeringSinusoid(double u, double v0, double amplitude, double frequency,
                   GroupElement origin = {});

  GroupElement pose(double t) const;
  RobotInput input(double t) const;

  double u() const noexcept { return u_; }
  double v0() const noexcept { return v0_; }
  double amplitude() const noexcept { return amplitude_; }
  double frequency() const noexcept { return frequency_; }
  const GroupElement& origin() const noexcept { return origin_; }

 private:
  double u_;
  double v0_;
  double amplitude_;
  double frequency_;
  GroupElement origin_;
};

using Reference = std::variant<PermanentTrajectory, PiecewiseTrajectory, SteeringSinusoid>;

GroupElement reference_pose(const Reference& ref, double t);
RobotInput reference_input(const Reference& ref, double t);
/// Same reference, rigidly moved by g0.
Reference left_translate(const GroupElement& g0, const Reference& ref);
/// Smallest |u| over the reference's inputs (segments or constant speed).
double min_abs_speed(const Reference& ref);

/// max_t ||I(t) - I(0)|| for the invariant input I = (u, v). Zero iff the
/// sampled run is permanent. poses and inputs must be time aligned.
double permanence_probe(std::span<const GroupElement> poses,
                        std::span<const RobotInput> inputs);

}  // namespace invsep
