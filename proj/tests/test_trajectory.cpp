#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "invsep/numerics.hpp"
#include "invsep/trajectory.hpp"
#include "test_support.hpp"

namespace invsep {
namespace {

constexpr double kPi = std::numbers::pi;

// Largest residual between a central-difference pose derivative and the plant.
double dynamics_residual(const Reference& ref, double t0, double t1, int points) {
  const double h = 1e-6;
  double worst = 0.0;
  for (int k = 0; k < points; ++k) {
    const double t = t0 + (t1 - t0) * k / (points - 1);
    const GroupElement plus = reference_pose(ref, t + h), minus = reference_pose(ref, t - h);
    const Eigen::Vector3d fd((plus.x() - minus.x()) / (2 * h), (plus.y() - minus.y()) / (2 * h),
                             wrap_angle(plus.theta() - minus.theta()) / (2 * h));
    const Eigen::Vector3d f = dynamics(reference_pose(ref, t), reference_input(ref, t));
    worst = std::max(worst, (fd - f).cwiseAbs().maxCoeff());
  }
  return worst;
}

TEST(PermanentTrajectory, StraightLine) {
  const PermanentTrajectory line(1.0, 0.0);
  for (const double t : {0.0, 0.5, 3.0, 17.25}) {
    const GroupElement g = line.pose(t);
    EXPECT_DOUBLE_EQ(g.x(), t);
    EXPECT_EQ(g.y(), 0.0);
    EXPECT_EQ(g.theta(), 0.0);
  }
  EXPECT_TRUE(std::isinf(line.period()));
  EXPECT_EQ(line.reference_input().u, 1.0);
  EXPECT_EQ(line.reference_input().v, 0.0);
}

TEST(PermanentTrajectory, CircleClosesAfterOnePeriod) {
  const PermanentTrajectory unit(1.0, 1.0);
  EXPECT_DOUBLE_EQ(unit.period(), 2.0 * kPi);
  EXPECT_LT(distance(unit.pose(2.0 * kPi), GroupElement::identity()), 1e-10);

  const PermanentTrajectory circle(1.0, 0.5, {3.0, -1.0, 0.7});
  EXPECT_LT(distance(circle.pose(circle.period()), circle.pose(0.0)), 1e-10);
  EXPECT_EQ(circle.reference_input().u, 1.0);
  EXPECT_EQ(circle.reference_input().v, 0.5);
}

TEST(PermanentTrajectory, MatchesIntegratedPlant) {
  // Oracle: RK4 integration of the constant-input plant.
  const RobotInput in{1.0, 1.0};
  const VectorField f = [&](double, const Vector& x) -> Vector {
    return dynamics(GroupElement(x[0], x[1], x[2]), in);
  };
  const auto run = integrate_rk4(f, Vector::Zero(3), 0.0, 2.0 * kPi, 1e-3);
  const Vector end = run.back().x;
  EXPECT_LT(distance(GroupElement(end[0], end[1], end[2]), PermanentTrajectory(1.0, 1.0).pose(2.0 * kPi)),
            1e-10);
}

TEST(PermanentTrajectory, SatisfiesPlantDynamics) {
  EXPECT_LT(dynamics_residual(PermanentTrajectory(1.0, 0.0), 0.0, 20.0, 1000), 1e-8);
  EXPECT_LT(dynamics_residual(PermanentTrajectory(1.0, 0.5), 0.0, 20.0, 1000), 1e-8);
  EXPECT_LT(dynamics_residual(PermanentTrajectory(-0.8, 1.3, {1.0, 2.0, -0.4}), 0.0, 20.0, 1000), 1e-8);
}

TEST(PermanentTrajectory, RejectsNonFinite) {
  EXPECT_THROW(PermanentTrajectory(NAN, 1.0), std::invalid_argument);
  EXPECT_THROW(PermanentTrajectory(1.0, INFINITY), std::invalid_argument);
}

TEST(PiecewiseTrajectory, ContinuousAndDynamicallyConsistent) {
  const PiecewiseTrajectory path({{1.0, 0.0, 2.0}, {1.0, 0.5, 3.0}, {0.5, -1.0, 1.0}});
  const std::vector<double> switches = path.switch_times();
  ASSERT_EQ(switches.size(), 2u);
  EXPECT_DOUBLE_EQ(switches[0], 2.0);
  EXPECT_DOUBLE_EQ(switches[1], 5.0);
  for (const double s : switches) {
    EXPECT_LT(distance(path.pose(s - 1e-9), path.pose(s + 1e-9)), 1e-8);
  }
  // Away from switches the pose obeys the plant.
  EXPECT_LT(dynamics_residual(path, 0.1, 1.9, 100), 1e-8);
  EXPECT_LT(dynamics_residual(path, 2.1, 4.9, 100), 1e-8);
  EXPECT_LT(dynamics_residual(path, 5.1, 9.0, 100), 1e-8);
  EXPECT_EQ(path.input(1.0).v, 0.0);
  EXPECT_EQ(path.input(2.5).v, 0.5);
  EXPECT_EQ(path.input(100.0).v, -1.0);
}

TEST(PiecewiseTrajectory, RejectsBadSegments) {
  EXPECT_THROW(PiecewiseTrajectory({}), std::invalid_argument);
  EXPECT_THROW(PiecewiseTrajectory({{1.0, 0.0, 0.0}}), std::invalid_argument);
}

TEST(SteeringSinusoid, FollowsPlant) {
  const SteeringSinusoid s(1.0, 0.5, 0.3, 1.0);
  EXPECT_NEAR(s.input(kPi / 2).v, 0.8, 1e-15);
  EXPECT_LT(dynamics_residual(s, 0.5, 10.0, 50), 1e-6);
}

TEST(LeftTranslate, MovesPosesKeepsInputs) {
  testing::Gen gen(30);
  const GroupElement g0 = gen.pose();
  const std::vector<Reference> refs{PermanentTrajectory(1.0, 0.5), PiecewiseTrajectory({{1.0, 0.0, 1.0}, {1.0, 1.0, 1.0}}),
                                    SteeringSinusoid(1.0, 0.5, 0.3, 1.0)};
  for (const Reference& ref : refs) {
    const Reference moved = left_translate(g0, ref);
    for (const double t : {0.0, 0.7, 1.5, 3.0}) {
      EXPECT_LT(distance(reference_pose(moved, t), compose(g0, reference_pose(ref, t))), 1e-9);
      EXPECT_EQ(reference_input(moved, t).v, reference_input(ref, t).v);
    }
  }
}

TEST(MinAbsSpeed, Values) {
  EXPECT_EQ(min_abs_speed(PermanentTrajectory(-2.0, 0.5)), 2.0);
  EXPECT_EQ(min_abs_speed(PiecewiseTrajectory({{1.0, 0.0, 1.0}, {-0.3, 1.0, 1.0}})), 0.3);
}

std::vector<RobotInput> sample_inputs(const Reference& ref, double t1, int n) {
  std::vector<RobotInput> out;
  for (int k = 0; k < n; ++k) out.push_back(reference_input(ref, t1 * k / (n - 1)));
  return out;
}

std::vector<GroupElement> sample_poses(const Reference& ref, double t1, int n) {
  std::vector<GroupElement> out;
  for (int k = 0; k < n; ++k) out.push_back(reference_pose(ref, t1 * k / (n - 1)));
  return out;
}

TEST(PermanenceProbe, DistinguishesTrajectories) {
  const Reference circle = PermanentTrajectory(1.0, 0.5);
  EXPECT_EQ(permanence_probe(sample_poses(circle, 10.0, 41), sample_inputs(circle, 10.0, 41)), 0.0);

  // Samples hit the sine crest, so the probe equals the amplitude.
  const Reference wobble = SteeringSinusoid(1.0, 0.5, 0.3, 1.0);
  const double t1 = 2.0 * kPi;
  EXPECT_NEAR(permanence_probe(sample_poses(wobble, t1, 9), sample_inputs(wobble, t1, 9)), 0.3, 1e-12);

  const Reference joined = PiecewiseTrajectory({{1.0, 0.0, 2.0}, {1.0, 0.5, 2.0}});
  EXPECT_GT(permanence_probe(sample_poses(joined, 4.0, 9), sample_inputs(joined, 4.0, 9)), 0.0);
  EXPECT_THROW(permanence_probe(sample_poses(joined, 4.0, 3), sample_inputs(joined, 4.0, 4)),
               std::invalid_argument);
}

}  // namespace
}  // namespace invsep
