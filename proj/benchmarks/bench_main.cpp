#include <benchmark/benchmark.h>

#include "launchopt/config.hpp"
#include "launchopt/continuation.hpp"
#include "launchopt/integrator.hpp"
#include "launchopt/ocp0.hpp"
#include "launchopt/shooting.hpp"

namespace launchopt {
namespace {

CaseParameters flight_case() {
  CaseParameters p;
  p.v0 = 2000.0;
  p.theta_v0 = 38.0;
  p.theta0 = 38.0;
  p.theta_f = 40.0;
  return p;
}

void BM_SolveOcp0(benchmark::State& state) {
  Ocp0Problem prob;
  prob.v0 = {200, 30, 50};
  prob.w = Eigen::Vector3d(1, 0.2, 0.3).normalized();
  prob.a = 25.0;
  prob.g = {-kStandardGravity, 0, 0};
  for (auto _ : state) benchmark::DoNotOptimize(solve_ocp0(prob));
}
BENCHMARK(BM_SolveOcp0);

void BM_Propagate(benchmark::State& state) {
  const LauncherConfig cfg = launcher_preset("pegasus");
  const CaseSpec c = make_case(flight_case());
  Costate p;
  p.values << 1e-3, 2e-4, 5e-4, 0.1, 0.05, 0.0, 0.5, 1.0;
  HomotopyState h;
  h.lambda3 = 1.0;
  h.lambda4 = state.range(0) / 100.0;
  const int steps = static_cast<int>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(propagate(c.initial, p, 30.0, cfg.vehicle, h, steps));
}
BENCHMARK(BM_Propagate)->Args({0, 512})->Args({50, 512})->Args({100, 512})->Args({0, 2048});

void BM_PropagateTerminal(benchmark::State& state) {
  const LauncherConfig cfg = launcher_preset("ariane-flight");
  const CaseSpec c = make_case(flight_case());
  Costate p;
  p.values << 1e-3, 0.0, 5e-4, 0.1, 0.0, 0.0, 0.0, 1.0;
  HomotopyState h;
  for (auto _ : state) benchmark::DoNotOptimize(propagate_terminal(c.initial, p, 30.0, cfg.vehicle, h));
}
BENCHMARK(BM_PropagateTerminal);

void BM_SolveCase(benchmark::State& state) {
  const LauncherConfig cfg = launcher_preset("ariane-flight");
  const CaseSpec c = make_case(flight_case());
  SolverOptions opts = cfg.solver;
  opts.stop_lambda4 = state.range(0) / 100.0;
  for (auto _ : state) benchmark::DoNotOptimize(solve_case(c, cfg.vehicle, opts));
}
BENCHMARK(BM_SolveCase)->Arg(0)->Arg(95)->Arg(100)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace launchopt

BENCHMARK_MAIN();
