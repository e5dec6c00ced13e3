#include "invsep/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "invsep/numerics.hpp"

namespace invsep {

PermanentTrajectory::PermanentTrajectory(double u_bar, double v_bar, GroupElement origin)
    : u_bar_(u_bar), v_bar_(v_bar), origin_(origin) {
  if (!std::isfinite(u_bar) || !std::isfinite(v_bar)) {
    throw std::invalid_argument("PermanentTrajectory: non-finite input");
  }
}

GroupElement PermanentTrajectory::pose(double t) const {
  return compose(origin_, exp(TangentVector(t * u_bar_, 0.0, t * u_bar_ * v_bar_)));
}

double PermanentTrajectory::period() const {
  const double rate = std::abs(u_bar_ * v_bar_);
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return 2.0 * std::numbers::pi / rate;
}

PiecewiseTrajectory::PiecewiseTrajectory(std::vector<Segment> segments, GroupElement origin)
    : segments_(std::move(segments)), origin_(origin) {
  if (segments_.empty()) throw std::invalid_argument("PiecewiseTrajectory: no segments");
  double t = 0.0;
  GroupElement start = origin_;
  for (const auto& seg : segments_) {
    if (!(seg.duration > 0.0)) {
      throw std::invalid_argument("PiecewiseTrajectory: segment duration must be > 0");
    }
    start_times_.push_back(t);
    start_poses_.push_back(start);
    start = PermanentTrajectory(seg.u, seg.v, start).pose(seg.duration);
    t += seg.duration;
  }
}

std::size_t PiecewiseTrajectory::segment_index(double t) const {
  const auto it = std::upper_bound(start_times_.begin(), start_times_.end(), t);
  if (it == start_times_.begin()) return 0;
  return static_cast<std::size_t>(it - start_times_.begin()) - 1;
}

GroupElement PiecewiseTrajectory::pose(double t) const {
  const std::size_t i = segment_index(t);
  const auto& seg = segments_[i];
  return PermanentTrajectory(seg.u, seg.v, start_poses_[i]).pose(t - start_times_[i]);
}

RobotInput PiecewiseTrajectory::input(double t) const {
  const auto& seg = segments_[segment_index(t)];
  return {seg.u, seg.v};
}

std::vector<double> PiecewiseTrajectory::switch_times() const {
  return {start_times_.begin() + 1, start_times_.end()};
}

SteeringSinusoid::SteeringSinusoid(double u, double v0, double amplitude, double frequency,
                                   GroupElement origin)
    : u_(u), v0_(v0), amplitude_(amplitude), frequency_(frequency), origin_(origin) {}

RobotInput SteeringSinusoid::input(double t) const {
  return {u_, v0_ + amplitude_ * std::sin(frequency_ * t)};
}

GroupElement SteeringSinusoid::pose(double t) const {
  if (t == 0.0) return origin_;
  constexpr double kMaxStep = 1e-3;
  const auto steps = static_cast<int>(std::ceil(std::abs(t) / kMaxStep));
  const double h = t / steps;
  const VectorField field = [this](double s, const Vector& x) -> Vector {
    return dynamics(GroupElement(x[0], x[1], x[2]), input(s));
  };
  Vector x = origin_.vector();
  for (int k = 0; k < steps; ++k) x = rk4_step(field, k * h, x, h);
  return GroupElement::from_vector(x);
}

GroupElement reference_pose(const Reference& ref, double t) {
  return std::visit([t](const auto& r) { return r.pose(t); }, ref);
}

RobotInput reference_input(const Reference& ref, double t) {
  struct Visitor {
    double t;
    RobotInput operator()(const PermanentTrajectory& r) const { return r.reference_input(); }
    RobotInput operator()(const PiecewiseTrajectory& r) const { return r.input(t); }
    RobotInput operator()(const SteeringSinusoid& r) const { return r.input(t); }
  };
  return std::visit(Visitor{t}, ref);
}

Reference left_translate(const GroupElement& g0, const Reference& ref) {
  struct Visitor {
    const GroupElement& g0;
    Reference operator()(const PermanentTrajectory& r) const {
      return PermanentTrajectory(r.u_bar(), r.v_bar(), compose(g0, r.origin()));
    }
    Reference operator()(const PiecewiseTrajectory& r) const {
      return PiecewiseTrajectory(r.segments(), compose(g0, r.origin()));
    }
    Reference operator()(const SteeringSinusoid& r) const {
      return SteeringSinusoid(r.u(), r.v0(), r.amplitude(), r.frequency(),
                              compose(g0, r.origin()));
    }
  };
  return std::visit(Visitor{g0}, ref);
}

double min_abs_speed(const Reference& ref) {
  struct Visitor {
    double operator()(const PermanentTrajectory& r) const { return std::abs(r.u_bar()); }
    double operator()(const PiecewiseTrajectory& r) const {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& seg : r.segments()) best = std::min(best, std::abs(seg.u));
      return best;
    }
    double operator()(const SteeringSinusoid& r) const { return std::abs(r.u()); }
  };
  return std::visit(Visitor{}, ref);
}

double permanence_probe(std::span<const GroupElement> poses,
                        std::span<const RobotInput> inputs) {
  if (poses.size() != inputs.size()) {
    throw std::invalid_argument("permanence_probe: poses and inputs are not time aligned");
  }
  if (inputs.empty()) return 0.0;
  // u and v are invariant under the group, so the invariant input is (u, v)
  // itself and the poses are not needed beyond alignment.
  const RobotInput first = inputs.front();
  double worst = 0.0;
  for (const auto& in : inputs) {
    worst = std::max(worst, std::hypot(in.u - first.u, in.v - first.v));
  }
  return worst;
}

}  // namespace invsep
