#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "invsep/controller.hpp"
#include "invsep/ekf.hpp"
#include "invsep/lie.hpp"
#include "invsep/numerics.hpp"
#include "invsep/observer.hpp"
#include "invsep/robot.hpp"
#include "invsep/trajectory.hpp"

namespace invsep {

/// Plant + invariant observer + invariant controller run.
struct Scenario {
  Reference reference;
  LandmarkSet landmarks;
  ControllerGains controller;
  ObserverGains observer;
  GroupElement initial_pose;
  GroupElement initial_estimate;
  double t_end = 30.0;
  double dt = 1e-3;

  /// dt > 0, t_end > 0, positive gains, nonzero reference speed.
  void validate() const;
};

/// Landmarks (10, 0), (0, 10), (-10, -10).
LandmarkSet standard_landmarks();

/// Circle u = 1, v = 0.5 from the identity, standard landmarks, unit gains,
/// dt = 1e-3, t_end = 30 s, perfect initial pose and estimate.
Scenario standard_scenario();

/// Same scenario with every pose, the reference and the landmarks moved by g0.
Scenario left_translate(const GroupElement& g0, const Scenario& sc);

struct SimulationResult {
  std::vector<double> time;
  std::vector<GroupElement> pose;
  std::vector<GroupElement> estimate;
  std::vector<GroupElement> reference;
  /// g_r^{-1} x
  std::vector<TrackingError> eta;
  /// x^{-1} x_hat
  std::vector<GroupElement> eps;
  std::vector<RobotInput> input;
};

/// Single RK4 loop over (reference, plant, observer). The controller sees
/// only the estimate. Throws DivergenceError if the state norm exceeds 1e6
/// and GeometryError (with the time in the message) if the observer gain
/// becomes ill-conditioned.
SimulationResult simulate(const Scenario& sc);

/// 6x6 linearization in (xi, e): [[A - BK, -BK], [0, A_obs]]. The coupling
/// block is built from finite-difference linearizations of the error
/// dynamics in the input and of the feedback law.
Matrix separation_matrix(double u_r, double v_r, const ControllerGains& controller,
                         const ObserverGains& observer);

/// Error dynamics along a reference: d/dt error = field(t, error), with the
/// origin an equilibrium for all t.
struct ErrorDynamics {
  std::size_t dim;
  std::function<Vector(double, const Vector&)> field;
};

/// Finite-difference linearizations of the error dynamics at the origin.
std::vector<Matrix> linearize_along(const ErrorDynamics& dynamics, std::span<const double> times,
                                    double step = kDefaultFdStep);

/// Largest Frobenius distance between the linearizations at the given times.
double time_invariance_probe(const ErrorDynamics& dynamics, std::span<const double> times);

/// Tracking error under full-state feedback (no observer), 3-dimensional.
ErrorDynamics tracking_error_dynamics(const Reference& ref, const ControllerGains& gains);

/// Invariant estimation error x^{-1} x_hat while the robot follows ref
/// exactly, 3-dimensional.
ErrorDynamics observer_error_dynamics(const Reference& ref, const LandmarkSet& landmarks,
                                      const ObserverGains& gains);

/// (tracking error, estimation error) of the full output-feedback loop,
/// 6-dimensional.
ErrorDynamics closed_loop_error_dynamics(const Reference& ref, const LandmarkSet& landmarks,
                                         const ControllerGains& controller,
                                         const ObserverGains& observer);

/// Cartesian error x_hat - x of the extended observer with a time-varying
/// gain schedule, while the robot follows ref exactly.
ErrorDynamics ekf_error_dynamics(const Reference& ref, const LandmarkSet& landmarks,
                                 std::function<Eigen::MatrixXd(double)> gain_schedule);

}  // namespace invsep
