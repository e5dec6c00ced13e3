#include <cmath>
#include <complex>

#include <gtest/gtest.h>

#include "invsep/controller.hpp"
#include "invsep/errors.hpp"
#include "invsep/trajectory.hpp"
#include "test_support.hpp"

namespace invsep {
namespace {

const ControllerGains kUnit{1.0, 1.0, 1.0};

TEST(ControllerGains, Validation) {
  EXPECT_NO_THROW(kUnit.validate());
  try {
    ControllerGains{-1.0, 1.0, 1.0}.validate();
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("k1 > 0"), std::string::npos);
  }
  EXPECT_THROW((ControllerGains{1.0, 0.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((ControllerGains{1.0, 1.0, NAN}.validate()), ConfigError);
}

TEST(TrackingError, Examples) {
  testing::Gen gen(40);
  const GroupElement g = gen.pose();
  EXPECT_LT(tracking_error(g, g).vector().norm(), 1e-12);
  EXPECT_EQ(tracking_error(GroupElement::identity(), {1.0, 2.0, 0.3}).vector(), Eigen::Vector3d(1.0, 2.0, 0.3));
}

TEST(TrackingError, InvariantUnderLeftTranslation) {
  testing::Gen gen(41);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g0 = gen.pose(), gr = gen.pose(), g = gen.pose();
    const Eigen::Vector3d a = tracking_error(gr, g).vector();
    const Eigen::Vector3d b = tracking_error(compose(g0, gr), compose(g0, g)).vector();
    EXPECT_LT((a - b).head<2>().norm(), 1e-10);
    EXPECT_NEAR(wrap_angle(a.z() - b.z()), 0.0, 1e-12);
  }
}

TEST(Feedback, PureFeedforwardAtZeroError) {
  const RobotInput in = feedback({}, 1.3, -0.7, kUnit);
  EXPECT_EQ(in.u, 1.3);
  EXPECT_EQ(in.v, -0.7);
}

TEST(Feedback, SubstitutionExample) {
  const RobotInput in = feedback({0.1, 0.2, 0.05}, 1.0, 0.0, kUnit);
  EXPECT_NEAR(in.u, 0.9, 1e-15);
  EXPECT_NEAR(in.v, -0.25, 1e-15);
}

TEST(Feedback, DegenerateReference) {
  EXPECT_THROW(feedback({}, 0.0, 0.5, kUnit), DegenerateReferenceError);
}

TEST(Feedback, LinearCoefficients) {
  const ControllerGains gains{0.7, 1.9, 1.3};
  for (const double ur : {1.0, -0.6, 2.5}) {
    const double vr = 0.4, sgn = ur > 0 ? 1.0 : -1.0;
    const Matrix j = jacobian_fd(
        [&](const Vector& e) -> Vector {
          const RobotInput in = feedback(TrackingError::from_vector(e), ur, vr, gains);
          return Eigen::Vector2d(in.u, in.v);
        },
        Vector::Zero(3));
    EXPECT_NEAR(j(0, 0), -std::abs(ur) * gains.k1, 1e-9);
    EXPECT_NEAR(j(0, 1), -ur * vr, 1e-9);
    EXPECT_NEAR(j(0, 2), 0.0, 1e-9);
    EXPECT_NEAR(j(1, 0), vr * sgn * gains.k1, 1e-9);
    EXPECT_NEAR(j(1, 1), vr * vr - gains.k2, 1e-9);
    EXPECT_NEAR(j(1, 2), -sgn * gains.k3, 1e-9);
  }
}

TEST(CtrlLoopMatrix, ZeroSpeed) {
  EXPECT_EQ(ctrl_loop_matrix(0.0, 0.5, kUnit), Matrix::Zero(3, 3));
}

TEST(CtrlLoopMatrix, UnitSpectrum) {
  const double im = std::sqrt(3.0) / 2.0;
  const Spectrum expected{-1.0, {-0.5, im}, {-0.5, -im}};
  EXPECT_LT(spectrum_mismatch(eigenvalues(ctrl_loop_matrix(1.0, 0.5, kUnit)), expected), 1e-9);
}

// Linearization of the closed tracking loop eta' = rate(g_r, u_r, g_r*eta, feedback(eta)).
Matrix fd_tracking_loop(const GroupElement& gr, double ur, double vr, const ControllerGains& gains) {
  return jacobian_fd(
      [&](const Vector& e) -> Vector {
        const TrackingError eta = TrackingError::from_vector(e);
        const GroupElement g = compose(gr, GroupElement::from_vector(e));
        return tracking_error_rate(gr, {ur, vr}, g, feedback(eta, ur, vr, gains));
      },
      Vector::Zero(3));
}

TEST(CtrlLoopMatrix, MatchesFiniteDifferenceAtManyPoses) {
  testing::Gen gen(42);
  for (int i = 0; i < 50; ++i) {
    const double ur = i % 2 ? gen.uniform(0.2, 3.0) : -gen.uniform(0.2, 3.0);
    const double vr = gen.uniform(-1.5, 1.5);
    const ControllerGains gains{gen.uniform(0.2, 3.0), gen.uniform(0.2, 3.0), gen.uniform(0.2, 3.0)};
    const Matrix expected = ctrl_loop_matrix(ur, vr, gains);
    EXPECT_LT((fd_tracking_loop(gen.pose(), ur, vr, gains) - expected).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(CtrlLoopMatrix, HurwitzForPositiveGains) {
  testing::Gen gen(43);
  for (int i = 0; i < 200; ++i) {
    const double ur = (i % 2 ? 1.0 : -1.0) * gen.uniform(0.05, 4.0);
    const ControllerGains gains{gen.uniform(0.05, 5.0), gen.uniform(0.05, 5.0), gen.uniform(0.05, 5.0)};
    EXPECT_LT(spectral_abscissa(ctrl_loop_matrix(ur, gen.uniform(-2.0, 2.0), gains)), 0.0);
  }
}

TEST(TrackingErrorRate, InvariantUnderLeftTranslation) {
  testing::Gen gen(44);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g0 = gen.pose(), gr = gen.pose(), g = gen.pose();
    const RobotInput ir = gen.input(), in = gen.input();
    const Eigen::Vector3d a = tracking_error_rate(gr, ir, g, in);
    const Eigen::Vector3d b = tracking_error_rate(compose(g0, gr), ir, compose(g0, g), in);
    EXPECT_LT((a - b).norm(), 1e-9);
  }
}

}  // namespace
}  // namespace invsep
