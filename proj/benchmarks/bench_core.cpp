#include <benchmark/benchmark.h>

#include <random>

#include "coldplasma/diagnostics.hpp"
#include "coldplasma/harness/config.hpp"
#include "coldplasma/harness/experiments.hpp"
#include "coldplasma/integrators.hpp"

using namespace coldplasma;

namespace {

std::shared_ptr<const StructuredHexMesh> cube(int n) {
  return std::make_shared<const StructuredHexMesh>(Vec3{-1, -1, -1}, Vec3{1, 1, 1}, Index3{n, n, n});
}

Formulation formulation(const benchmark::State& state) {
  return state.range(1) == 0 ? Formulation::FluxFree : Formulation::DgFlux;
}

TimeState conservation_state(const Discretization& disc, std::size_t particles) {
  harness::RunConfig cfg = harness::conservation_defaults();
  cfg.particle_count = particles;
  cfg.constants.c = 10.0;
  return harness::make_conservation_state(disc, cfg);
}

}  // namespace

static void BM_EdgeMassAssembly(benchmark::State& state) {
  const FeSpace edge(cube(static_cast<int>(state.range(0))), SpaceKind::edge(0, true));
  for (auto _ : state) benchmark::DoNotOptimize(mass_matrix(edge));
  state.counters["dofs"] = static_cast<double>(edge.n_dofs());
}
BENCHMARK(BM_EdgeMassAssembly)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_EdgeMassSolve(benchmark::State& state) {
  const DeRhamComplex cx(cube(static_cast<int>(state.range(0))));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  DofVector b(cx.edge().n_dofs());
  for (double& v : b) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(cg_solve(cx.mass_edge(), b, CgConfig{}));
}
BENCHMARK(BM_EdgeMassSolve)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_SemidiscreteRhs(benchmark::State& state) {
  const Discretization disc(cube(static_cast<int>(state.range(0))), formulation(state));
  const TimeState s = conservation_state(disc, 1000);
  const PhysConstants pc{10.0, 1.0, -1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(semidiscrete_rhs(disc, s.fields, s.particles, pc));
}
BENCHMARK(BM_SemidiscreteRhs)->Args({8, 0})->Args({8, 1})->Unit(benchmark::kMillisecond);

static void BM_AvfStep(benchmark::State& state) {
  const Discretization disc(cube(static_cast<int>(state.range(0))), formulation(state));
  const TimeState s = conservation_state(disc, 1000);
  const PhysConstants pc{10.0, 1.0, -1.0, 2.0};
  StepStats stats;
  for (auto _ : state) benchmark::DoNotOptimize(avf_step(disc, s, 5e-3, pc, AvfConfig{}, {}, &stats));
  state.counters["picard"] = benchmark::Counter(stats.picard_iterations, benchmark::Counter::kAvgIterations);
}
BENCHMARK(BM_AvfStep)->Args({4, 0})->Args({4, 1})->Unit(benchmark::kMillisecond);

static void BM_Rk3Step(benchmark::State& state) {
  const Discretization disc(cube(static_cast<int>(state.range(0))), formulation(state));
  const TimeState s = conservation_state(disc, 1000);
  const PhysConstants pc{10.0, 1.0, -1.0, 2.0};
  for (auto _ : state) benchmark::DoNotOptimize(explicit_step(disc, s, 1e-3, pc, Integrator::SspRk3));
}
BENCHMARK(BM_Rk3Step)->Args({8, 0})->Args({8, 1})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
