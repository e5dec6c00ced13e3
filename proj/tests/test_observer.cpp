#include <cmath>
#include <complex>
#include <numbers>

#include <gtest/gtest.h>

#include "invsep/errors.hpp"
#include "invsep/observer.hpp"
#include "test_support.hpp"

namespace invsep {
namespace {

constexpr double kPi = std::numbers::pi;
const ObserverGains kUnit{1.0, 1.0, 1.0};

TEST(ObserverGains, Validation) {
  EXPECT_NO_THROW(kUnit.validate());
  EXPECT_THROW((ObserverGains{0.0, 1.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((ObserverGains{1.0, -2.0, 1.0}.validate()), ConfigError);
  EXPECT_THROW((ObserverGains{1.0, 1.0, NAN}.validate()), ConfigError);
}

TEST(BodyFrameLandmarks, Examples) {
  const LandmarkSet lm({{1.0, 0.0}, {0.0, 2.0}, {-3.0, -1.0}});
  const BodyFrameLandmarks at_origin(GroupElement::identity(), lm);
  for (std::size_t i = 0; i < lm.size(); ++i) {
    EXPECT_EQ(at_origin.matrix().col(static_cast<Eigen::Index>(i)), lm[i]);
  }
  const BodyFrameLandmarks turned({0.0, 0.0, kPi / 2}, lm);
  EXPECT_NEAR(turned.matrix()(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(turned.matrix()(1, 0), -1.0, 1e-15);
  EXPECT_GE(turned.condition_number(), 1.0);
}

TEST(BodyFrameLandmarks, IllConditionedReportsConditionNumber) {
  // Nearly collinear as seen from the estimate.
  const LandmarkSet lm({{1.0, 0.0}, {2.0, 1e-5}, {3.0, 0.0}});
  try {
    BodyFrameLandmarks(GroupElement::identity(), lm);
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_GT(e.condition_number(), kDefaultConditionBound);
    EXPECT_NE(std::string(e.what()).find("condition number"), std::string::npos);
  }
  EXPECT_NO_THROW(BodyFrameLandmarks(GroupElement::identity(), lm, 1e15));
}

TEST(OutputError, Examples) {
  testing::Gen gen(50);
  const LandmarkSet lm = gen.landmarks();
  const GroupElement g = gen.pose();
  EXPECT_EQ(output_error(g, lm, measure(g, lm)).norm(), 0.0);

  const LandmarkSet one({{3.0, 4.0}, {0.0, 1.0}, {1.0, 0.0}});
  Measurement y = measure(GroupElement::identity(), one);
  y[0] = 16.0;
  EXPECT_EQ(output_error(GroupElement::identity(), one, y)[0], 9.0);
  EXPECT_THROW(output_error(g, lm, Measurement::Zero(2)), std::invalid_argument);
}

TEST(GainMatrix, DefiningIdentity) {
  testing::Gen gen(51);
  for (int i = 0; i < 100; ++i) {
    const GroupElement xh = gen.pose();
    const LandmarkSet lm = gen.landmarks(3 + i % 4);
    const RobotInput in = gen.input();
    const ObserverGains gains{gen.uniform(0.1, 3.0), gen.uniform(0.1, 3.0), gen.uniform(0.1, 3.0)};
    const BodyFrameLandmarks body(xh, lm);
    const Eigen::Matrix3Xd l = gain_matrix(body, in.u, in.v, gains);
    const Eigen::Matrix<double, 3, 2> lhs = l * (-2.0 * body.matrix().transpose());
    EXPECT_LT((lhs - observer_shaping(in.u, in.v, gains)).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(GainMatrix, ZeroSpeedGivesZeroGain) {
  testing::Gen gen(52);
  const BodyFrameLandmarks body(gen.pose(), gen.landmarks());
  EXPECT_EQ(observer_shaping(0.0, 0.7, kUnit), (Eigen::Matrix<double, 3, 2>::Zero()));
  EXPECT_EQ(gain_matrix(body, 0.0, 0.7, kUnit).norm(), 0.0);
}

TEST(GainMatrix, HomogeneousInLandmarkScale) {
  testing::Gen gen(53);
  for (int i = 0; i < 20; ++i) {
    const LandmarkSet lm = gen.landmarks();
    std::vector<Eigen::Vector2d> doubled;
    for (const auto& p : lm.points()) doubled.push_back(2.0 * p);
    const BodyFrameLandmarks a(GroupElement::identity(), lm);
    const BodyFrameLandmarks b(GroupElement::identity(), LandmarkSet(doubled));
    EXPECT_LT((b.matrix() - 2.0 * a.matrix()).norm(), 1e-12);
    EXPECT_LT((gain_matrix(b, 1.0, 0.5, kUnit) - 0.5 * gain_matrix(a, 1.0, 0.5, kUnit)).norm(), 1e-12);
  }
}

TEST(ObserverField, ZeroErrorReplicatesModel) {
  testing::Gen gen(54);
  for (int i = 0; i < 20; ++i) {
    const GroupElement xh = gen.pose();
    const LandmarkSet lm = gen.landmarks();
    const RobotInput in = gen.input();
    EXPECT_LT((observer_field(xh, in, lm, measure(xh, lm), kUnit) - dynamics(xh, in)).norm(), 1e-12);
  }
}

TEST(ObserverField, Equivariant) {
  testing::Gen gen(55);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g0 = gen.pose(), x = gen.pose(), xh = gen.pose(10.0);
    const LandmarkSet lm = gen.landmarks();
    const RobotInput in = gen.input();
    const Eigen::Vector3d original = observer_field(xh, in, lm, measure(x, lm), kUnit);
    const LandmarkSet moved = act(g0, lm);
    const Eigen::Vector3d translated =
        observer_field(compose(g0, xh), in, moved, measure(compose(g0, x), moved), kUnit);
    EXPECT_LT((translated - transport_tangent(g0, original)).norm(), 1e-7 * (1.0 + original.norm()));
  }
}

TEST(ObserverField, PropagatesGeometryError) {
  const LandmarkSet lm({{1.0, 0.0}, {2.0, 1e-5}, {3.0, 0.0}});
  EXPECT_THROW(observer_field(GroupElement::identity(), {1.0, 0.0}, lm, measure({}, lm), kUnit),
               GeometryError);
}

// d/dt of the state error eps = x^{-1} x_hat, with the true state driven by the same input.
Eigen::Vector3d error_rate(const GroupElement& x, const Eigen::Vector3d& eps, const RobotInput& in,
                           const LandmarkSet& lm, const ObserverGains& gains) {
  const GroupElement xh = compose(x, GroupElement::from_vector(eps));
  return relative_rate(x, dynamics(x, in), xh, observer_field(xh, in, lm, measure(x, lm), gains));
}

TEST(ObsErrorMatrix, Examples) {
  EXPECT_EQ(obs_error_matrix(0.0, 0.5, kUnit), Matrix::Zero(3, 3));
  const double im = std::sqrt(3.0) / 2.0;
  const Spectrum expected{-1.0, {-0.5, im}, {-0.5, -im}};
  EXPECT_LT(spectrum_mismatch(eigenvalues(obs_error_matrix(1.0, 0.5, kUnit)), expected), 1e-9);
}

TEST(ObsErrorMatrix, MatchesFiniteDifferenceIndependentOfPoseAndLandmarks) {
  testing::Gen gen(56);
  for (int i = 0; i < 50; ++i) {
    const GroupElement x = gen.pose(5.0);
    const LandmarkSet lm = gen.landmarks(3 + i % 3);
    const RobotInput in{(i % 2 ? 1.0 : -1.0) * gen.uniform(0.2, 2.0), gen.uniform(-1.0, 1.0)};
    const ObserverGains gains{gen.uniform(0.2, 3.0), gen.uniform(0.2, 3.0), gen.uniform(0.2, 3.0)};
    const Matrix fd = jacobian_fd(
        [&](const Vector& e) -> Vector { return error_rate(x, e, in, lm, gains); }, Vector::Zero(3));
    EXPECT_LT((fd - obs_error_matrix(in.u, in.v, gains)).cwiseAbs().maxCoeff(), 1e-5);
  }
}

TEST(ObsErrorMatrix, HurwitzForPositiveGains) {
  testing::Gen gen(57);
  for (int i = 0; i < 200; ++i) {
    const double u = (i % 2 ? 1.0 : -1.0) * gen.uniform(0.05, 4.0);
    const ObserverGains gains{gen.uniform(0.05, 5.0), gen.uniform(0.05, 5.0), gen.uniform(0.05, 5.0)};
    EXPECT_LT(spectral_abscissa(obs_error_matrix(u, gen.uniform(-2.0, 2.0), gains)), 0.0);
  }
}

TEST(ObserverField, SmallPerturbationDecays) {
  // With unit gains the coupling block is skew, so d/dt |eps|^2 = -2(ex^2 + ey^2) to first order.
  testing::Gen gen(58);
  const LandmarkSet lm = gen.landmarks();
  for (int i = 0; i < 50; ++i) {
    const GroupElement x = gen.pose(5.0);
    const Eigen::Vector3d delta = 1e-4 * gen.tangent(1.0, 1.0).vector();
    const GroupElement xh = compose(x, exp(TangentVector::from_vector(delta)));
    const Eigen::Vector3d eps = compose(inverse(x), xh).vector();
    const Eigen::Vector3d rate = error_rate(x, eps, {1.0, 0.5}, lm, kUnit);
    EXPECT_LT(eps.dot(rate), 0.0) << eps.transpose();
  }
}

}  // namespace
}  // namespace invsep
