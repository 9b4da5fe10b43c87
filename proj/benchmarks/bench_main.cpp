#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <numbers>

#include <dpkit/dpkit.hpp>

using namespace dpkit;

namespace {

CoefficientFields fields() {
  return {ExponentField::constant(2.5), ExponentField::constant(3.5), ExponentField::constant(1.0)};
}

std::shared_ptr<const Mesh> square(Index n) {
  return std::make_shared<const Mesh>(build_rect_mesh({0.0, 1.0}, {0.0, 1.0}, n, n));
}

DiscreteFunction bump(const std::shared_ptr<const Mesh>& mesh) {
  return interpolate(mesh, [](const Point& x) {
    return std::sin(std::numbers::pi * x[0]) * std::sin(std::numbers::pi * x[1]);
  });
}

void BM_AssembleJacobian(benchmark::State& state) {
  const auto mesh = square(static_cast<Index>(state.range(0)));
  const DoublePhaseModel model(mesh, fields());
  const auto u = bump(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(assemble_jacobian(model, u));
  state.SetItemsProcessed(state.iterations() * mesh->num_elements());
}
BENCHMARK(BM_AssembleJacobian)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_LuxemburgNorm(benchmark::State& state) {
  const auto mesh = square(static_cast<Index>(state.range(0)));
  const DoublePhaseModel model(mesh, fields());
  const auto u = bump(mesh);
  for (auto _ : state) benchmark::DoNotOptimize(luxemburg_norm(model, u, ModularKind::combined).norm);
}
BENCHMARK(BM_LuxemburgNorm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_SolvePoisson1d(benchmark::State& state) {
  const auto c = manufactured_case("poisson-1d");
  const DoublePhaseModel model(case_mesh(c, static_cast<Index>(state.range(0))), c.fields);
  for (auto _ : state) benchmark::DoNotOptimize(solve_convection(model, c.f).residual);
}
BENCHMARK(BM_SolvePoisson1d)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_SolveDoublePhase1d(benchmark::State& state) {
  const auto c = manufactured_case("dp-1d");
  const DoublePhaseModel model(case_mesh(c, static_cast<Index>(state.range(0))), c.fields);
  for (auto _ : state) benchmark::DoNotOptimize(solve_convection(model, c.f).residual);
}
BENCHMARK(BM_SolveDoublePhase1d)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

void BM_FirstEigenvalue(benchmark::State& state) {
  const auto mesh = std::make_shared<const Mesh>(build_interval_mesh(0.0, 1.0, state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(first_eigenvalue(3.0, mesh).lambda);
}
BENCHMARK(BM_FirstEigenvalue)->Arg(64)->Arg(256)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
