#include <benchmark/benchmark.h>

#include "hamlat/catalog.hpp"
#include "hamlat/flows.hpp"
#include "hamlat/reduction.hpp"

using namespace hamlat;

namespace {

void BM_PolyMultiply(benchmark::State& state) {
  // (H_3)^2 on toda-a:n, dense enough to exercise term merging
  const Poly h = hamiltonian(SystemId::toda_a(static_cast<int>(state.range(0))), 3);
  for (auto _ : state) benchmark::DoNotOptimize(h * h);
}
BENCHMARK(BM_PolyMultiply)->Arg(4)->Arg(8)->Arg(16);

void BM_JacobiatorToda(benchmark::State& state) {
  const Tensor pi = tensor(SystemId::toda_a(static_cast<int>(state.range(0))), 3);
  for (auto _ : state) benchmark::DoNotOptimize(jacobiator(pi));
}
BENCHMARK(BM_JacobiatorToda)->Arg(4)->Arg(8)->Arg(11)->Unit(benchmark::kMicrosecond);

void BM_JacobiatorVolterra(benchmark::State& state) {
  const Tensor pi = tensor(SystemId::volterra_a(static_cast<int>(state.range(0))), 4);
  for (auto _ : state) benchmark::DoNotOptimize(jacobiator(pi));
}
BENCHMARK(BM_JacobiatorVolterra)->Arg(5)->Arg(11)->Unit(benchmark::kMicrosecond);

void BM_ReducePsi(benchmark::State& state) {
  const int N = static_cast<int>(state.range(0));
  const SystemId t = SystemId::toda_a(N);
  const auto G = FiniteGroupAction<Rational>::generate({symmetry(SymmetryName::psi, t)});
  const auto chart = fixed_point_chart(G, variables(SystemId::volterra_a(N)));
  const Tensor pi = tensor(t, 2);
  for (auto _ : state) benchmark::DoNotOptimize(reduced_bracket(pi, G, chart));
}
BENCHMARK(BM_ReducePsi)->Arg(5)->Arg(9)->Unit(benchmark::kMicrosecond);

void BM_Rk4Toda(benchmark::State& state) {
  const SystemId s = SystemId::toda_a(static_cast<int>(state.range(0)));
  const CompiledField f(special_field(s, Special::flow, 2));
  const auto x0 = random_point(s, 1, 0.0, 1.0, -1.0, 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(flow_to(f, x0, 10.0, 1e-3));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Rk4Toda)->Arg(3)->Arg(10)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
