#include <benchmark/benchmark.h>

#include <numbers>

#include "qwjoin/qwjoin.hpp"

using namespace qwjoin;

static void BM_Decompose(benchmark::State& state) {
  auto g = family::cocktail_party(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(g, MatrixKind::Laplacian));
}
BENCHMARK(BM_Decompose)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

// closed form only needs the spectra of the parts
static void BM_JoinPstClosedForm(benchmark::State& state) {
  auto x = family::cocktail_party(static_cast<std::size_t>(state.range(0)));
  auto y = family::empty(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(join_pst(x, y, 0, 1, MatrixKind::Laplacian, CheckMode::ClosedFormOnly));
}
BENCHMARK(BM_JoinPstClosedForm)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_GenericPstOnJoin(benchmark::State& state) {
  auto g = join(family::cocktail_party(static_cast<std::size_t>(state.range(0))), family::empty(2));
  for (auto _ : state) benchmark::DoNotOptimize(pst_certificate(decompose(g, MatrixKind::Laplacian), 0, 1));
}
BENCHMARK(BM_GenericPstOnJoin)->Arg(8)->Arg(16)->Arg(32)->Arg(64);

static void BM_BoundSweep(benchmark::State& state) {
  auto x = disjoint_union(family::cycle(4), family::empty(2));
  auto y = family::empty(2);
  for (auto _ : state)
    benchmark::DoNotOptimize(
        bound_sweep(x, y, 0, 2, MatrixKind::Laplacian, 4 * std::numbers::pi, static_cast<std::size_t>(state.range(0))));
}
BENCHMARK(BM_BoundSweep)->Arg(1024)->Arg(4096);
BENCHMARK_MAIN();
