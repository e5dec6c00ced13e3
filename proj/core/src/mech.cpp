#include "invsep/mech.hpp"

#include <cmath>

#include <Eigen/Cholesky>
#include <Eigen/Geometry>
#include <Eigen/LU>
#include <Eigen/SVD>

#include "invsep/errors.hpp"

namespace invsep::mech {

Eigen::Matrix3d hat(const Eigen::Vector3d& w) {
  Eigen::Matrix3d m;
  m << 0.0, -w.z(), w.y(),
       w.z(), 0.0, -w.x(),
       -w.y(), w.x(), 0.0;
  return m;
}

Eigen::Vector3d vee(const Eigen::Matrix3d& m) { return {m(2, 1), m(0, 2), m(1, 0)}; }

Eigen::Matrix3d so3_exp(const Eigen::Vector3d& w) {
  const double angle = w.norm();
  const Eigen::Matrix3d k = hat(w);
  double a = 0.0;
  double b = 0.0;
  if (angle < 1e-7) {
    a = 1.0 - angle * angle / 6.0;
    b = 0.5 - angle * angle / 24.0;
  } else {
    a = std::sin(angle) / angle;
    b = (1.0 - std::cos(angle)) / (angle * angle);
  }
  return Eigen::Matrix3d::Identity() + a * k + b * k * k;
}

Eigen::Matrix3d project_to_so3(const Eigen::Matrix3d& m) {
  const Eigen::JacobiSVD<Eigen::Matrix3d> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

ForceModel no_force() {
  return [](const Eigen::Matrix3d&, const Eigen::Vector3d&) -> Eigen::Vector3d {
    return Eigen::Vector3d::Zero();
  };
}

ForceModel linear_damping(const Eigen::Vector3d& damping) {
  return [damping](const Eigen::Matrix3d&, const Eigen::Vector3d& xi) -> Eigen::Vector3d {
    return -damping.cwiseProduct(xi);
  };
}

ForceModel offset_mass_gravity(double mass, const Eigen::Vector3d& offset,
                               const Eigen::Vector3d& gravity) {
  return [mass, offset, gravity](const Eigen::Matrix3d& attitude,
                                 const Eigen::Vector3d&) -> Eigen::Vector3d {
    return offset.cross(mass * attitude.transpose() * gravity);
  };
}

void EpSystem::validate() const {
  if ((attitude.transpose() * attitude - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() >
          1e-9 ||
      std::abs(attitude.determinant() - 1.0) > 1e-9) {
    throw Error("mech: attitude is not a rotation");
  }
  if ((inertia - inertia.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("mech: inertia is not symmetric");
  }
  const Eigen::LLT<Eigen::Matrix3d> llt(inertia);
  if (llt.info() != Eigen::Success) throw Error("mech: inertia is not positive definite");
}

Eigen::Vector3d bilinear_term(const Eigen::Matrix3d& inertia, const Eigen::Vector3d& xi) {
  return inertia.ldlt().solve((inertia * xi).cross(xi));
}

EpDerivative ep_dynamics(const EpSystem& s, const Eigen::Vector3d& torque) {
  return {s.attitude * hat(s.velocity),
          bilinear_term(s.inertia, s.velocity) +
              s.inertia.ldlt().solve(s.force(s.attitude, s.velocity) + torque)};
}

double kinetic_energy(const Eigen::Matrix3d& inertia, const Eigen::Vector3d& xi) {
  return 0.5 * xi.dot(inertia * xi);
}

namespace {

Vector pack(const Eigen::Matrix3d& attitude, const Eigen::Vector3d& velocity) {
  Vector v(12);
  v.head<9>() = attitude.reshaped();
  v.tail<3>() = velocity;
  return v;
}

}  // namespace

std::vector<RigidBodySample> integrate_rigid_body(const EpSystem& s, double t_end, double dt) {
  s.validate();
  if (!(dt > 0.0) || !(t_end > 0.0)) {
    throw std::invalid_argument("integrate_rigid_body: dt and t_end must be > 0");
  }
  const VectorField field = [&s](double, const Vector& x) -> Vector {
    EpSystem cur = s;
    cur.attitude = x.head<9>().reshaped(3, 3);
    cur.velocity = x.tail<3>();
    const EpDerivative d = ep_dynamics(cur, Eigen::Vector3d::Zero());
    return pack(d.attitude_dot, d.velocity_dot);
  };

  std::vector<RigidBodySample> out;
  out.push_back({0.0, s.attitude, s.velocity});
  Vector x = pack(s.attitude, s.velocity);
  const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
  double t = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t_next = (k + 1 == steps) ? t_end : static_cast<double>(k + 1) * dt;
    x = rk4_step(field, t, x, t_next - t);
    if (!x.allFinite()) throw DivergenceError("integrate_rigid_body: non-finite state", t_next);
    const Eigen::Matrix3d r = project_to_so3(x.head<9>().reshaped(3, 3));
    x.head<9>() = r.reshaped();
    t = t_next;
    out.push_back({t, r, x.tail<3>()});
  }
  return out;
}

std::vector<Matrix> lemma1_linearizations(const EpSystem& s, const Eigen::Vector3d& xi_r,
                                          std::span<const double> times) {
  s.validate();
  const Eigen::Matrix3d inertia = s.inertia;
  const auto inertia_solve = inertia.ldlt();
  const Eigen::Matrix3d r0 = s.attitude;

  std::vector<Matrix> out;
  out.reserve(times.size());
  for (const double t : times) {
    const Eigen::Matrix3d xr = r0 * so3_exp(t * xi_r);
    // Feedforward torque that keeps xi_r constant along x_r.
    const Eigen::Vector3d u_r = -(inertia * xi_r).cross(xi_r) - s.force(xr, xi_r);

    // Error chart: eta_x = exp(hat(a)) read back through the skew part.
    const VectorMap field = [&](const Vector& err) -> Vector {
      const Eigen::Matrix3d eta = so3_exp(err.head<3>());
      const Eigen::Matrix3d x = xr * eta;
      const Eigen::Vector3d xi = xi_r + err.tail<3>();
      const Eigen::Matrix3d eta_dot = -hat(xi_r) * eta + eta * hat(xi);
      const Eigen::Vector3d xi_dot =
          bilinear_term(inertia, xi) + inertia_solve.solve(s.force(x, xi) + u_r);
      Vector rate(6);
      rate.head<3>() = vee(0.5 * (eta_dot - eta_dot.transpose()));
      rate.tail<3>() = xi_dot;
      return rate;
    };
    out.push_back(jacobian_fd(field, Vector::Zero(6)));
  }
  return out;
}

double lemma1_probe(const EpSystem& s, const Eigen::Vector3d& xi_r,
                    std::span<const double> times) {
  if (times.size() < 2) throw std::invalid_argument("lemma1_probe: need >= 2 times");
  return max_pairwise_deviation(lemma1_linearizations(s, xi_r, times));
}

}  // namespace invsep::mech
