#include "invsep/ekf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "invsep/errors.hpp"

namespace invsep {

void EkfState::validate() const {
  if ((P - P.transpose()).cwiseAbs().maxCoeff() > 1e-10) {
    throw Error("ekf: covariance is not symmetric");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(P, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10) {
    throw Error("ekf: covariance is not positive semidefinite");
  }
}

EkfJacobians ekf_jacobians(const GroupElement& x_hat, const RobotInput& input,
                           const LandmarkSet& landmarks) {
  EkfJacobians jac;
  jac.F.setZero();
  jac.F(0, 2) = -input.u * std::sin(x_hat.theta());
  jac.F(1, 2) = input.u * std::cos(x_hat.theta());
  jac.H.resize(static_cast<Eigen::Index>(landmarks.size()), 3);
  for (std::size_t i = 0; i < landmarks.size(); ++i) {
    const Eigen::Vector2d d = x_hat.position() - landmarks[i];
    jac.H.row(static_cast<Eigen::Index>(i)) << 2.0 * d.x(), 2.0 * d.y(), 0.0;
  }
  return jac;
}

EkfNoise EkfNoise::defaults(std::size_t landmark_count) {
  const auto p = static_cast<Eigen::Index>(landmark_count);
  return {1e-3 * Eigen::Matrix3d::Identity(), 1e-2 * Eigen::MatrixXd::Identity(p, p)};
}

namespace {

Eigen::MatrixXd solve_r(const Eigen::MatrixXd& R, const Eigen::MatrixXd& rhs) {
  if (R.rows() != R.cols() || R.rows() != rhs.rows()) {
    throw std::invalid_argument("ekf: measurement covariance R does not match the landmark count");
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(R);
  if (!lu.isInvertible()) throw Error("ekf: measurement covariance R is singular");
  return lu.solve(rhs);
}

}  // namespace

Eigen::MatrixXd ekf_gain(const Eigen::MatrixXd& P, const Eigen::MatrixXd& H,
                         const Eigen::MatrixXd& R) {
  // (R^{-1} H P)^T = P H^T R^{-1} for symmetric P and R.
  return solve_r(R, H * P).transpose();
}

Eigen::MatrixXd riccati_rate(const Eigen::MatrixXd& P, const Eigen::MatrixXd& F,
                             const Eigen::MatrixXd& H, const Eigen::MatrixXd& Q,
                             const Eigen::MatrixXd& R) {
  const Eigen::MatrixXd HP = H * P;
  Eigen::MatrixXd rate = F * P + P * F.transpose() + Q - HP.transpose() * solve_r(R, HP);
  return 0.5 * (rate + rate.transpose());
}

EkfDerivative ekf_field(const EkfState& state, const RobotInput& input,
                        const LandmarkSet& landmarks, const Measurement& y,
                        const EkfNoise& noise) {
  const EkfJacobians jac = ekf_jacobians(state.x_hat, input, landmarks);
  const Eigen::MatrixXd L = ekf_gain(state.P, jac.H, noise.R);
  EkfDerivative d;
  d.x_hat_dot = dynamics(state.x_hat, input) - L * (measure(state.x_hat, landmarks) - y);
  d.P_dot = riccati_rate(state.P, jac.F, jac.H, noise.Q, noise.R);
  return d;
}

Matrix ekf_error_matrix(const GroupElement& x_hat, const RobotInput& input,
                        const LandmarkSet& landmarks, const Eigen::MatrixXd& L) {
  const EkfJacobians jac = ekf_jacobians(x_hat, input, landmarks);
  return jac.F - L * jac.H;
}

std::vector<EkfState> ekf_states_along(const Reference& ref, const LandmarkSet& landmarks,
                                       const EkfNoise& noise, const Eigen::Matrix3d& P0,
                                       const std::vector<double>& times, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("ekf_states_along: dt must be > 0");
  if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0)) {
    throw std::invalid_argument("ekf_states_along: times must be ascending and >= 0");
  }
  const VectorField field = [&](double t, const Vector& v) -> Vector {
    const EkfState s = unpack_ekf(v);
    const RobotInput input = reference_input(ref, t);
    const Measurement y = measure(reference_pose(ref, t), landmarks);
    const EkfDerivative d = ekf_field(s, input, landmarks, y, noise);
    Vector out(12);
    out.head<3>() = d.x_hat_dot;
    out.tail<9>() = d.P_dot.reshaped();
    return out;
  };

  std::vector<EkfState> out;
  out.reserve(times.size());
  Vector x = pack(EkfState{reference_pose(ref, 0.0), P0});
  double t = 0.0;
  for (const double target : times) {
    while (t < target) {
      const double h = std::min(dt, target - t);
      x = rk4_step(field, t, x, h);
      t = (target - t <= dt) ? target : t + h;
      EkfState s = unpack_ekf(x);
      s.P = 0.5 * (s.P + s.P.transpose());
      x = pack(s);
      if (!x.allFinite()) throw DivergenceError("ekf: non-finite state", t);
    }
    out.push_back(unpack_ekf(x));
  }
  return out;
}

Vector pack(const EkfState& state) {
  Vector v(12);
  v.head<3>() = state.x_hat.vector();
  v.tail<9>() = state.P.reshaped();
  return v;
}

EkfState unpack_ekf(const Vector& v) {
  EkfState s;
  s.x_hat = GroupElement(v[0], v[1], v[2]);
  s.P = v.tail<9>().reshaped(3, 3);
  return s;
}

}  // namespace invsep
