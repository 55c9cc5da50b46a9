// Serial reference vs OpenMP kernels. Run with --benchmark_filter=... as usual.

#include <benchmark/benchmark.h>

#include <vector>

#include "labelgcn/kernels.hpp"
#include "labelgcn/rng.hpp"
#include "oracles.hpp"

namespace k = labelgcn::kernels;
using labelgcn::Rng;

namespace {

std::vector<double> random_values(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

template <bool Parallel>
void BM_Matmul(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_values(n * n, 1), b = random_values(n * n, 2);
  std::vector<double> c(n * n);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::matmul_parallel(a, b, c, n, n, n);
    else
      k::matmul_serial(a, b, c, n, n, n);
    benchmark::DoNotOptimize(c.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(n * n * n));
}

template <bool Parallel>
void BM_Cosine(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::size_t d = 300;
  const auto v = random_values(n * d, 3);
  std::vector<double> out(n * n);
  for (auto _ : state) {
    if constexpr (Parallel)
      k::cosine_rows_parallel(v, n, d, out);
    else
      k::cosine_rows_serial(v, n, d, out);
    benchmark::DoNotOptimize(out.data());
  }
}

template <bool Parallel>
void BM_AllPairsBfs(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  Rng rng(4);
  const auto g = oracle::random_graph(n, 4.0 / static_cast<double>(n), rng);
  const auto& adjacency = g.neighbor_lists();
  for (auto _ : state) {
    auto d = Parallel ? k::all_pairs_bfs_parallel(adjacency) : k::all_pairs_bfs_serial(adjacency);
    benchmark::DoNotOptimize(d.data());
  }
}

}  // namespace

BENCHMARK(BM_Matmul<false>)->Name("matmul/serial")->Arg(64)->Arg(256)->Arg(512);
BENCHMARK(BM_Matmul<true>)->Name("matmul/parallel")->Arg(64)->Arg(256)->Arg(512)->UseRealTime();
BENCHMARK(BM_Cosine<false>)->Name("cosine/serial")->Arg(170)->Arg(1000);
BENCHMARK(BM_Cosine<true>)->Name("cosine/parallel")->Arg(170)->Arg(1000)->UseRealTime();
BENCHMARK(BM_AllPairsBfs<false>)->Name("bfs/serial")->Arg(170)->Arg(2000);
BENCHMARK(BM_AllPairsBfs<true>)->Name("bfs/parallel")->Arg(170)->Arg(2000)->UseRealTime();

BENCHMARK_MAIN();
