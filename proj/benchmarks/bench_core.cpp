#include <benchmark/benchmark.h>

#include "invsep/closed_loop.hpp"
#include "invsep/mech.hpp"

namespace {

using namespace invsep;

void BM_Eigenvalues(benchmark::State& state) {
  const auto n = static_cast<Eigen::Index>(state.range(0));
  Matrix m(n, n);
  for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = std::sin(1.7 * static_cast<double>(i) + 0.3);
  for (auto _ : state) benchmark::DoNotOptimize(eigenvalues(m));
}
BENCHMARK(BM_Eigenvalues)->Arg(3)->Arg(6)->Arg(8);

void BM_SeparationMatrix(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(separation_matrix(1.0, 0.5, {}, {}));
}
BENCHMARK(BM_SeparationMatrix);

void BM_ObserverField(benchmark::State& state) {
  const LandmarkSet lm = standard_landmarks();
  const GroupElement x(1.0, 2.0, 0.3), xh(1.1, 1.9, 0.35);
  const Measurement y = measure(x, lm);
  for (auto _ : state) benchmark::DoNotOptimize(observer_field(xh, {1.0, 0.5}, lm, y, {}));
}
BENCHMARK(BM_ObserverField);

void BM_ClosedLoopLinearization(benchmark::State& state) {
  const Scenario sc = standard_scenario();
  const ErrorDynamics loop = closed_loop_error_dynamics(sc.reference, sc.landmarks, sc.controller, sc.observer);
  const double times[] = {0.0, 1.0};
  for (auto _ : state) benchmark::DoNotOptimize(linearize_along(loop, times));
}
BENCHMARK(BM_ClosedLoopLinearization);

void BM_SimulateStandard(benchmark::State& state) {
  Scenario sc = standard_scenario();
  sc.t_end = static_cast<double>(state.range(0));
  sc.initial_pose = GroupElement(0.1, 0.1, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(simulate(sc));
}
BENCHMARK(BM_SimulateStandard)->Arg(1)->Arg(30)->Unit(benchmark::kMillisecond);

void BM_RigidBody(benchmark::State& state) {
  mech::EpSystem s;
  s.inertia = Eigen::Vector3d(1.0, 2.0, 3.0).asDiagonal();
  s.velocity = Eigen::Vector3d(0.3, 0.5, 0.7);
  for (auto _ : state) benchmark::DoNotOptimize(mech::integrate_rigid_body(s, 1.0, 1e-3));
}
BENCHMARK(BM_RigidBody)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
