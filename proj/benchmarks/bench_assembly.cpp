#include <benchmark/benchmark.h>

#include "derham/bgg.hpp"

using namespace derham;

static void BM_ElementDef(benchmark::State& state) {
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(element_def({Family::r2, p, 1, 3}));
}
BENCHMARK(BM_ElementDef)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_Unisolvence(benchmark::State& state) {
  const ElementDef e = element_def({Family::r2, static_cast<int>(state.range(0)), 0, 3});
  for (auto _ : state) benchmark::DoNotOptimize(unisolvence_check(e));
}
BENCHMARK(BM_Unisolvence)->Arg(5)->Arg(6)->Arg(7)->Unit(benchmark::kMillisecond);

static void BM_AssembleSpace(benchmark::State& state) {
  const auto m = fourteen_tet_grid(1, 1, 1);
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(assemble_space(m, {Family::r1, p, 1, 3}));
  state.counters["dim"] = static_cast<double>(assemble_space(m, {Family::r1, p, 1, 3}).dimension);
}
BENCHMARK(BM_AssembleSpace)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_CountOnly(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto m = fourteen_tet_grid(n, n, n);
  for (auto _ : state)
    benchmark::DoNotOptimize(assemble_space(m, {Family::r2, 4, 1, 3}, AssemblyMode::count_only).dimension);
}
BENCHMARK(BM_CountOnly)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);

static void BM_VerifyExactness(benchmark::State& state) {
  const auto m = meshes::two_tets();
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_exactness(m, family_row(2, 3, p)));
}
BENCHMARK(BM_VerifyExactness)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

static void BM_BggIdentity(benchmark::State& state) {
  const auto m = meshes::three_triangle_square();
  const int p = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(verify_bgg_identity(p, m));
}
BENCHMARK(BM_BggIdentity)->Arg(1)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

static void BM_MeshBuild(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(fourteen_tet_grid(n, n, n));
}
BENCHMARK(BM_MeshBuild)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
