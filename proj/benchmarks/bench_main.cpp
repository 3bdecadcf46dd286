#include <benchmark/benchmark.h>

#include "glcn/norms.hpp"
#include "glcn/stepper.hpp"

using namespace glcn;

namespace {

std::shared_ptr<const DGSpace> make_space(int n, int k) {
  auto mesh = std::make_shared<const Mesh>(build_structured({0, 1, 0, 1}, n));
  return std::make_shared<const DGSpace>(mesh, k);
}

void BM_AssembleStiffness(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto space = make_space(n, k);
  const SipgConfig cfg = SipgConfig::with_default_penalty(k);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_stiffness(*space, cfg));
  state.counters["dofs"] = space->num_dofs();
}
BENCHMARK(BM_AssembleStiffness)->Args({10, 1})->Args({20, 2})->Args({40, 3})
    ->Unit(benchmark::kMillisecond);

void BM_Residual(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto space = make_space(n, k);
  const ManufacturedCase c = find_case("example1");
  StepConfig cfg;
  cfg.tau = 0.05;
  CrankNicolsonStepper stepper(space, SipgConfig::with_default_penalty(k), c, cfg);
  const Eigen::VectorXcd u = interpolate(space, c.u_at(0.0)).coeffs();
  const Eigen::VectorXcd f = stepper.load(0.0);
  for (auto _ : state) benchmark::DoNotOptimize(stepper.residual(u, u, f));
}
BENCHMARK(BM_Residual)->Args({20, 2})->Args({40, 3})->Unit(benchmark::kMillisecond);

void BM_Jacobian(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto space = make_space(n, k);
  const ManufacturedCase c = find_case("example1");
  StepConfig cfg;
  cfg.tau = 0.05;
  CrankNicolsonStepper stepper(space, SipgConfig::with_default_penalty(k), c, cfg);
  const Eigen::VectorXcd u = interpolate(space, c.u_at(0.0)).coeffs();
  for (auto _ : state) benchmark::DoNotOptimize(stepper.jacobian(u).nonZeros());
}
BENCHMARK(BM_Jacobian)->Args({20, 2})->Args({40, 3})->Unit(benchmark::kMillisecond);

void BM_Step(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = static_cast<int>(state.range(1));
  auto space = make_space(n, k);
  const ManufacturedCase c = find_case("example1");
  StepConfig cfg;
  cfg.tau = 1.0 / n;
  cfg.linear.kind = state.range(2) ? LinearSolverConfig::Kind::iterative
                                   : LinearSolverConfig::Kind::direct;
  CrankNicolsonStepper stepper(space, SipgConfig::with_default_penalty(k), c, cfg);
  const ComplexField u0 = interpolate(space, c.u_at(0.0));
  for (auto _ : state) benchmark::DoNotOptimize(stepper.step(u0, 0.0, 1));
}
BENCHMARK(BM_Step)
    ->ArgNames({"n", "k", "iterative"})
    ->Args({10, 2, 0})
    ->Args({10, 2, 1})
    ->Args({20, 3, 0})
    ->Args({20, 3, 1})
    ->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
