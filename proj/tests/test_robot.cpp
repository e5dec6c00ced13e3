#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "invsep/errors.hpp"
#include "invsep/robot.hpp"
#include "test_support.hpp"

namespace invsep {
namespace {

constexpr double kPi = std::numbers::pi;

TEST(Dynamics, Examples) {
  testing::Gen gen(20);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(dynamics(gen.pose(), {0.0, gen.uniform(-2, 2)}), Eigen::Vector3d::Zero());
  EXPECT_EQ(dynamics(GroupElement::identity(), {1.0, 0.0}), Eigen::Vector3d(1.0, 0.0, 0.0));
  const Eigen::Vector3d turned = dynamics({0.0, 0.0, kPi / 2}, {2.0, 1.0});
  EXPECT_NEAR(turned.x(), 0.0, 1e-15);
  EXPECT_NEAR(turned.y(), 2.0, 1e-15);
  EXPECT_EQ(turned.z(), 2.0);
}

TEST(Measure, SquaredRanges) {
  const LandmarkSet lm({{3.0, 4.0}, {0.0, 10.0}, {-1.0, 2.0}});
  const Measurement at_origin = measure(GroupElement::identity(), lm);
  EXPECT_EQ(at_origin[0], 25.0);
  EXPECT_EQ(measure({-1.0, 2.0, 0.4}, lm)[2], 0.0);
  // Ranges do not depend on heading.
  EXPECT_LT((measure({1.0, 2.0, 0.3}, lm) - measure({1.0, 2.0, -2.0}, lm)).norm(), 1e-12);
}

TEST(LandmarkSet, Validation) {
  EXPECT_THROW(LandmarkSet({{0.0, 0.0}, {1.0, 1.0}}), ConfigError);
  EXPECT_THROW(LandmarkSet({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}), ConfigError);
  EXPECT_THROW(LandmarkSet({{0.0, 0.0}, {NAN, 1.0}, {2.0, 0.0}}), ConfigError);
  EXPECT_NO_THROW(LandmarkSet({{10.0, 0.0}, {0.0, 10.0}, {-10.0, -10.0}}));
  try {
    LandmarkSet({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}});
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("collinear"), std::string::npos);
  }
}

TEST(CollinearityRatio, ScaleAndTranslationFree) {
  const std::vector<Eigen::Vector2d> pts{{1.0, 0.0}, {0.0, 2.0}, {-1.0, -1.0}, {3.0, 1.0}};
  std::vector<Eigen::Vector2d> moved;
  for (const auto& p : pts) moved.push_back(7.0 * p + Eigen::Vector2d(5.0, -3.0));
  EXPECT_NEAR(collinearity_ratio(pts), collinearity_ratio(moved), 1e-12);
  EXPECT_LT(collinearity_ratio({{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}}), 1e-12);
}

TEST(Act, IdentityLeavesFrameUnchanged) {
  testing::Gen gen(21);
  const LandmarkSet lm = gen.landmarks();
  const GroupElement g = gen.pose();
  const RobotFrame frame{g, {1.2, -0.4}, lm, measure(g, lm)};
  const RobotFrame same = act(GroupElement::identity(), frame);
  EXPECT_EQ(same.pose.vector(), g.vector());
  EXPECT_EQ(same.input.u, 1.2);
  EXPECT_EQ(same.input.v, -0.4);
  EXPECT_EQ(same.output, frame.output);
  for (std::size_t i = 0; i < lm.size(); ++i) EXPECT_LT((same.landmarks[i] - lm[i]).norm(), 1e-15);
}

TEST(Act, IsAGroupAction) {
  testing::Gen gen(22);
  for (int i = 0; i < 100; ++i) {
    const GroupElement a = gen.pose(), b = gen.pose();
    const LandmarkSet lm = gen.landmarks();
    const LandmarkSet lhs = act(compose(a, b), lm);
    const LandmarkSet rhs = act(a, act(b, lm));
    for (std::size_t k = 0; k < lm.size(); ++k) EXPECT_LT((lhs[k] - rhs[k]).norm(), 1e-11);
  }
}

TEST(Invariance, ExactAtIdentity) {
  testing::Gen gen(23);
  for (int i = 0; i < 20; ++i) {
    EXPECT_EQ(invariance_residual(GroupElement::identity(), gen.pose(), gen.input(), gen.landmarks()), 0.0);
  }
}

TEST(Invariance, RandomTransformations) {
  testing::Gen gen(24);
  for (int i = 0; i < 100; ++i) {
    EXPECT_LT(invariance_residual(gen.pose(), gen.pose(), gen.input(), gen.landmarks()), 1e-9);
  }
}

TEST(Invariance, PureRotations) {
  testing::Gen gen(25);
  for (int i = 0; i < 100; ++i) {
    const GroupElement rot(0.0, 0.0, gen.uniform(-kPi, kPi));
    EXPECT_LT(invariance_residual(rot, gen.pose(), gen.input(), gen.landmarks()), 1e-9);
  }
}

TEST(Invariance, OracleFromDefinition) {
  // Independent check: transported velocity equals velocity of transported
  // pose, ranges to transported landmarks are unchanged.
  testing::Gen gen(26);
  for (int i = 0; i < 100; ++i) {
    const GroupElement g0 = gen.pose(), g = gen.pose();
    const RobotInput in = gen.input();
    const LandmarkSet lm = gen.landmarks();
    const Eigen::Vector3d lhs = dynamics(compose(g0, g), in);
    const Eigen::Vector3d rhs = transport_tangent(g0, dynamics(g, in));
    EXPECT_LT((lhs - rhs).norm(), 1e-12);
    EXPECT_LT((measure(compose(g0, g), act(g0, lm)) - measure(g, lm)).norm(), 1e-9);
  }
}

}  // namespace
}  // namespace invsep
