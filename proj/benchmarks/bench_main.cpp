#include <benchmark/benchmark.h>

#include <random>

#include "fairdiv/allocators.hpp"
#include "fairdiv/fairness.hpp"
#include "fairdiv/gen.hpp"
#include "fairdiv/rank.hpp"
#include "fairdiv/stability.hpp"

namespace {

using namespace fairdiv;

Instance make_instance(int n, int m, Value total = 1000) {
  std::mt19937_64 rng(42);
  return random_instance(rng, n, m, total);
}

void BM_RankLeximin(benchmark::State& state) {
  const Instance inst = make_instance(2, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_leximin_allocate(inst));
  }
}
BENCHMARK(BM_RankLeximin)->Arg(8)->Arg(10)->Arg(12)->Arg(14);

void BM_RankLeximinParallel(benchmark::State& state) {
  const Instance inst = make_instance(2, 16);
  ScanOptions opts;
  opts.jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(rank_leximin_allocate(inst, opts));
  }
}
BENCHMARK(BM_RankLeximinParallel)->Arg(1)->Arg(2)->Arg(4);

void BM_Leximin(benchmark::State& state) {
  const Instance inst = make_instance(2, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(leximin_allocate(inst));
  }
}
BENCHMARK(BM_Leximin)->Arg(8)->Arg(12)->Arg(14);

void BM_Mnw(benchmark::State& state) {
  const Instance inst = make_instance(2, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(mnw_allocate(inst));
  }
}
BENCHMARK(BM_Mnw)->Arg(8)->Arg(12)->Arg(14);

void BM_BuildRankTable(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Instance inst = make_instance(2, m, 100000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(build_rank_table(inst, 0, Bundle::full(m)));
  }
}
BENCHMARK(BM_BuildRankTable)->Arg(12)->Arg(16)->Arg(20);

void BM_PairMaximin(benchmark::State& state) {
  const int m = static_cast<int>(state.range(0));
  const Instance inst = make_instance(2, m, 100000);
  for (auto _ : state) {
    benchmark::DoNotOptimize(pair_maximin_value(inst, 0, Bundle::full(m)));
  }
}
BENCHMARK(BM_PairMaximin)->Arg(12)->Arg(16)->Arg(20);

void BM_PmmsCheck(benchmark::State& state) {
  const Instance inst = make_instance(2, static_cast<int>(state.range(0)));
  const Allocation alloc = draft_allocate(inst);
  for (auto _ : state) {
    benchmark::DoNotOptimize(check_pmms_definition(inst, alloc));
  }
}
BENCHMARK(BM_PmmsCheck)->Arg(8)->Arg(12)->Arg(16);

void BM_NeighborEnumeration(benchmark::State& state) {
  const Instance inst = make_instance(2, 5, 45);
  NeighborSpec spec;
  spec.agent = 0;
  spec.alpha = state.range(0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(enumerate_neighbors(inst, spec));
  }
}
BENCHMARK(BM_NeighborEnumeration)->Arg(5)->Arg(10)->Arg(15);

void BM_AuditLeximin(benchmark::State& state) {
  const Instance inst = make_instance(2, 4, 40);
  NeighborSpec spec;
  spec.agent = 0;
  spec.alpha = state.range(0);
  const AllocatorId id = AllocatorId::parse("leximin");
  for (auto _ : state) {
    benchmark::DoNotOptimize(audit_stability(id, inst, spec));
  }
}
BENCHMARK(BM_AuditLeximin)->Arg(4)->Arg(8)->Arg(12);

}  // namespace

BENCHMARK_MAIN();
