#include "invsep/closed_loop.hpp"

#include <cmath>
#include <sstream>

#include "invsep/errors.hpp"

namespace invsep {

void Scenario::validate() const {
  if (!(dt > 0.0)) throw ConfigError("dt: must satisfy dt > 0");
  if (!(t_end > 0.0)) throw ConfigError("t_end: must satisfy t_end > 0");
  controller.validate();
  observer.validate();
  if (!(min_abs_speed(reference) > 0.0)) {
    throw ConfigError("trajectory.u: reference speed must be nonzero on every segment");
  }
}

LandmarkSet standard_landmarks() {
  return LandmarkSet({{10.0, 0.0}, {0.0, 10.0}, {-10.0, -10.0}});
}

Scenario standard_scenario() {
  return Scenario{PermanentTrajectory(1.0, 0.5), standard_landmarks(), ControllerGains{},
                  ObserverGains{},               GroupElement{},        GroupElement{},
                  30.0,                          1e-3};
}

Scenario left_translate(const GroupElement& g0, const Scenario& sc) {
  Scenario out = sc;
  out.reference = left_translate(g0, sc.reference);
  out.landmarks = act(g0, sc.landmarks);
  out.initial_pose = compose(g0, sc.initial_pose);
  out.initial_estimate = compose(g0, sc.initial_estimate);
  return out;
}

namespace {

constexpr double kDivergenceNorm = 1e6;

struct LoopState {
  GroupElement reference;
  GroupElement pose;
  GroupElement estimate;

  static LoopState from_vector(const Vector& x) {
    return {GroupElement(x[0], x[1], x[2]), GroupElement(x[3], x[4], x[5]),
            GroupElement(x[6], x[7], x[8])};
  }
  Vector vector() const {
    Vector x(9);
    x << reference.vector(), pose.vector(), estimate.vector();
    return x;
  }
};

RobotInput control_input(const Scenario& sc, double t, const LoopState& s) {
  const RobotInput r = reference_input(sc.reference, t);
  return feedback(tracking_error(s.reference, s.estimate), r.u, r.v, sc.controller);
}

Vector loop_field(const Scenario& sc, double t, const Vector& x) {
  const LoopState s = LoopState::from_vector(x);
  const RobotInput r = reference_input(sc.reference, t);
  const RobotInput input = control_input(sc, t, s);
  const Measurement y = measure(s.pose, sc.landmarks);
  Vector out(9);
  out << dynamics(s.reference, r), dynamics(s.pose, input),
      observer_field(s.estimate, input, sc.landmarks, y, sc.observer);
  return out;
}

void record(const Scenario& sc, double t, const LoopState& s, SimulationResult& out) {
  out.time.push_back(t);
  out.pose.push_back(s.pose);
  out.estimate.push_back(s.estimate);
  out.reference.push_back(s.reference);
  out.eta.push_back(tracking_error(s.reference, s.pose));
  out.eps.push_back(state_error(s.pose, s.estimate));
  out.input.push_back(control_input(sc, t, s));
}

}  // namespace

SimulationResult simulate(const Scenario& sc) {
  sc.validate();

  const double tol = 1e-9 * sc.dt;
  const auto steps = static_cast<std::size_t>(std::ceil(sc.t_end / sc.dt - 1e-9));
  SimulationResult out;
  out.time.reserve(steps + 1);
  out.pose.reserve(steps + 1);
  out.estimate.reserve(steps + 1);
  out.reference.reserve(steps + 1);
  out.eta.reserve(steps + 1);
  out.eps.reserve(steps + 1);
  out.input.reserve(steps + 1);

  const VectorField field = [&sc](double t, const Vector& x) { return loop_field(sc, t, x); };
  LoopState state{reference_pose(sc.reference, 0.0), sc.initial_pose, sc.initial_estimate};
  double t = 0.0;
  try {
    record(sc, t, state, out);
    for (std::size_t k = 0; k < steps; ++k) {
      const double t_next = (k + 1 == steps) ? sc.t_end : static_cast<double>(k + 1) * sc.dt;
      const double h = t_next - t;
      if (h <= tol) break;
      const Vector x = rk4_step(field, t, state.vector(), h);
      if (!x.allFinite() || x.norm() > kDivergenceNorm) {
        std::ostringstream msg;
        msg << "simulate: state diverged at t = " << t_next;
        throw DivergenceError(msg.str(), t_next);
      }
      state = LoopState::from_vector(x);
      t = t_next;
      record(sc, t, state, out);
    }
  } catch (const GeometryError& e) {
    std::ostringstream msg;
    msg << e.what() << " at t = " << t;
    throw GeometryError(msg.str(), e.condition_number());
  }
  return out;
}

Matrix separation_matrix(double u_r, double v_r, const ControllerGains& controller,
                         const ObserverGains& observer) {
  Matrix m = Matrix::Zero(6, 6);
  if (u_r == 0.0) return m;

  const GroupElement e;
  const RobotInput r{u_r, v_r};
  // B: sensitivity of the tracking error rate to the input at the origin.
  const Matrix b = jacobian_fd(
      [&](const Vector& du) -> Vector {
        return tracking_error_rate(e, r, e, RobotInput{u_r + du[0], v_r + du[1]});
      },
      Vector::Zero(2));
  // -K: sensitivity of the feedback to the estimated tracking error.
  const Matrix minus_k = jacobian_fd(
      [&](const Vector& eta_hat) -> Vector {
        const RobotInput in =
            feedback(TrackingError::from_vector(eta_hat.head<3>()), u_r, v_r, controller);
        return Eigen::Vector2d(in.u, in.v);
      },
      Vector::Zero(3));

  m.topLeftCorner(3, 3) = ctrl_loop_matrix(u_r, v_r, controller);
  m.topRightCorner(3, 3) = b * minus_k;
  m.bottomRightCorner(3, 3) = obs_error_matrix(u_r, v_r, observer);
  return m;
}

std::vector<Matrix> linearize_along(const ErrorDynamics& dynamics, std::span<const double> times,
                                    double step) {
  std::vector<Matrix> out;
  out.reserve(times.size());
  const Vector origin = Vector::Zero(static_cast<Eigen::Index>(dynamics.dim));
  for (const double t : times) {
    out.push_back(jacobian_fd([&](const Vector& err) { return dynamics.field(t, err); }, origin,
                              step));
  }
  return out;
}

double time_invariance_probe(const ErrorDynamics& dynamics, std::span<const double> times) {
  if (times.size() < 2) throw std::invalid_argument("time_invariance_probe: need >= 2 times");
  return max_pairwise_deviation(linearize_along(dynamics, times));
}

ErrorDynamics tracking_error_dynamics(const Reference& ref, const ControllerGains& gains) {
  return {3, [ref, gains](double t, const Vector& err) -> Vector {
            const GroupElement gr = reference_pose(ref, t);
            const RobotInput r = reference_input(ref, t);
            const TrackingError eta = TrackingError::from_vector(err.head<3>());
            const GroupElement g = compose(gr, GroupElement::from_vector(err.head<3>()));
            return tracking_error_rate(gr, r, g, feedback(eta, r.u, r.v, gains));
          }};
}

ErrorDynamics observer_error_dynamics(const Reference& ref, const LandmarkSet& landmarks,
                                      const ObserverGains& gains) {
  return {3, [ref, landmarks, gains](double t, const Vector& err) -> Vector {
            const GroupElement x = reference_pose(ref, t);
            const RobotInput input = reference_input(ref, t);
            const GroupElement x_hat = compose(x, GroupElement::from_vector(err.head<3>()));
            const Eigen::Vector3d x_hat_dot =
                observer_field(x_hat, input, landmarks, measure(x, landmarks), gains);
            return relative_rate(x, dynamics(x, input), x_hat, x_hat_dot);
          }};
}

ErrorDynamics closed_loop_error_dynamics(const Reference& ref, const LandmarkSet& landmarks,
                                         const ControllerGains& controller,
                                         const ObserverGains& observer) {
  return {6, [ref, landmarks, controller, observer](double t, const Vector& err) -> Vector {
            const GroupElement gr = reference_pose(ref, t);
            const RobotInput r = reference_input(ref, t);
            const GroupElement g = compose(gr, GroupElement::from_vector(err.head<3>()));
            const GroupElement x_hat = compose(g, GroupElement::from_vector(err.tail<3>()));
            const RobotInput input =
                feedback(tracking_error(gr, x_hat), r.u, r.v, controller);
            const Eigen::Vector3d g_dot = dynamics(g, input);
            const Eigen::Vector3d x_hat_dot =
                observer_field(x_hat, input, landmarks, measure(g, landmarks), observer);
            Vector out(6);
            out << relative_rate(gr, dynamics(gr, r), g, g_dot),
                relative_rate(g, g_dot, x_hat, x_hat_dot);
            return out;
          }};
}

ErrorDynamics ekf_error_dynamics(const Reference& ref, const LandmarkSet& landmarks,
                                 std::function<Eigen::MatrixXd(double)> gain_schedule) {
  return {3, [ref, landmarks, gain_schedule = std::move(gain_schedule)](
                 double t, const Vector& err) -> Vector {
            const GroupElement x = reference_pose(ref, t);
            const RobotInput input = reference_input(ref, t);
            // Cartesian error: no angle wrapping on the way back.
            const Eigen::Vector3d xv = x.vector();
            const Eigen::Vector3d xhv = xv + err.head<3>();
            const GroupElement x_hat(xhv.x(), xhv.y(), xhv.z());
            const Eigen::MatrixXd L = gain_schedule(t);
            const Eigen::Vector3d x_hat_dot =
                dynamics(x_hat, input) - L * (measure(x_hat, landmarks) - measure(x, landmarks));
            return Vector(x_hat_dot - dynamics(x, input));
          }};
}

}  // namespace invsep
