#include <benchmark/benchmark.h>

#include "mttkit/mttkit.hpp"
#include "mttkit_tools/families.hpp"

using namespace mttkit;

// member_io on the copy-free family with |s| = |t| = n.
static void BM_CopyFreeIo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mtt m = families::copy_free();
  const Tree s = families::copy_free_input(n);
  const Tree t = families::copy_free_output(n);
  for (auto _ : state) benchmark::DoNotOptimize(member_io(m, s, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CopyFreeIo)->RangeMultiplier(2)->Range(16, 256)->Complexity()->Unit(benchmark::kMillisecond);

static void BM_CopyFreeOiFc(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mtt m = families::copy_free();
  const Tree s = families::copy_free_input(n);
  const Tree t = families::copy_free_output(n);
  for (auto _ : state) benchmark::DoNotOptimize(member_oi_fc(m, CopyBound{1}, s, t));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_CopyFreeOiFc)->RangeMultiplier(2)->Range(16, 128)->Complexity()->Unit(benchmark::kMillisecond);

// member_io on the doubling family: t has 2^(2^n+1)-1 nodes but a DAG of 2^n+1.
static void BM_DoubleIo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mtt m = families::double_mtt();
  const Tree s = families::double_input(n);
  const Tree t = families::double_output(n);
  for (auto _ : state) benchmark::DoNotOptimize(member_io(m, s, t));
}
BENCHMARK(BM_DoubleIo)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

static void BM_DoubleOracleIo(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const Mtt m = families::double_mtt();
  const Tree s = families::double_input(n);
  const Tree t = families::double_output(n);
  for (auto _ : state) benchmark::DoNotOptimize(oracle_member(m, Mode::io, s, t));
}
BENCHMARK(BM_DoubleOracleIo)->DenseRange(1, 2)->Unit(benchmark::kMicrosecond);

static void BM_SatReduction(benchmark::State& state) {
  const Cnf3 f = parse_dimacs("p cnf 3 2\n1 -2 3 0\n-1 2 3 0\n");
  for (auto _ : state) benchmark::DoNotOptimize(sat_check_small(f));
}
BENCHMARK(BM_SatReduction)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
