#include "ssa/auction.hpp"
#include "ssa/experiments.hpp"
#include "ssa/hardness.hpp"
#include "ssa/stealing.hpp"
#include "ssa/topsteal.hpp"

#include <benchmark/benchmark.h>

#include <algorithm>
#include <random>

namespace {

ssa::Allocation allToFirst(std::size_t n, int m)
{
  ssa::Allocation out;
  out.bundles.assign(n, ssa::Bundle{});
  out.bundles[0] = ssa::Bundle::full(m);
  return out;
}

void BM_Resolve(benchmark::State& state)
{
  int const m     = static_cast<int>(state.range(0));
  auto const vals = ssa::randomSubmodularInstance(4, m, 1);
  std::mt19937_64 rng(2);
  ssa::BidProfile bids(4, m);
  for (std::size_t i = 0; i < 4; ++i)
  {
    for (int j = 0; j < m; ++j)
    {
      bids.set(i, j, ssa::Money(static_cast<long>(rng() % 100), 10));
    }
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ssa::resolve(bids, vals));
  }
}
BENCHMARK(BM_Resolve)->Arg(8)->Arg(14);

void BM_Topsteal(benchmark::State& state)
{
  int const m     = static_cast<int>(state.range(0));
  auto const vals = ssa::randomSubmodularInstance(2, m, 3);
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ssa::topsteal(vals, allToFirst(2, m)));
  }
}
BENCHMARK(BM_Topsteal)->Arg(6)->Arg(8);

void BM_IterativeStealing(benchmark::State& state)
{
  auto const vals = ssa::randomSubmodularInstance(4, 8, 4);
  for (auto _ : state)
  {
    auto ordering = ssa::orderingPolicyByName("stolen-last");
    auto policy   = ssa::stealPolicyByName("lex", 0);
    benchmark::DoNotOptimize(ssa::runIterativeStealing(vals, allToFirst(4, 8), *ordering, *policy, 1000000));
  }
}
BENCHMARK(BM_IterativeStealing);

void BM_EquilibriumCheck(benchmark::State& state)
{
  int const m     = static_cast<int>(state.range(0));
  auto const vals = ssa::randomSubmodularInstance(2, m, 5);
  auto const run  = ssa::topsteal(vals, allToFirst(2, m));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ssa::isPureNashNoOverbid(vals, run.bids));
  }
}
BENCHMARK(BM_EquilibriumCheck)->Arg(8)->Arg(12);

void BM_GrayDynamic(benchmark::State& state)
{
  int const m = static_cast<int>(state.range(0));
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ssa::runGrayDynamic(m, ssa::RunOptions{}));
  }
}
BENCHMARK(BM_GrayDynamic)->Arg(5)->Arg(7)->Arg(9)->Unit(benchmark::kMillisecond);

void BM_SparseDemand(benchmark::State& state)
{
  ssa::GenParams params;
  params.m         = 45;
  params.support   = static_cast<std::size_t>(state.range(0));
  auto const inst  = ssa::generate(ssa::Family::Sensitive, params, 6);
  auto const& v    = static_cast<const ssa::SensitiveValuation&>(*inst.valuations[0]);
  std::mt19937_64 rng(7);
  std::vector<ssa::Money> prices(45);
  for (auto& p : prices)
  {
    p = ssa::Money(static_cast<long>(rng() % 2000), 1000);
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ssa::sparseDemandOracle(v, prices));
  }
}
BENCHMARK(BM_SparseDemand)->Arg(64)->Arg(1024)->Unit(benchmark::kMillisecond);

void BM_AdversaryQuery(benchmark::State& state)
{
  std::mt19937_64 rng(8);
  for (auto _ : state)
  {
    state.PauseTiming();
    ssa::OddGraphAdversary adversary(43);
    std::vector<int> items(43);
    for (int i = 0; i < 43; ++i)
    {
      items[static_cast<std::size_t>(i)] = i;
    }
    state.ResumeTiming();
    for (int q = 0; q < 50; ++q)
    {
      std::shuffle(items.begin(), items.end(), rng);
      ssa::Bundle b;
      for (int i = 0; i < 22; ++i)
      {
        b = b.with(items[static_cast<std::size_t>(i)]);
      }
      benchmark::DoNotOptimize(adversary.query(b));
    }
  }
}
BENCHMARK(BM_AdversaryQuery)->Unit(benchmark::kMillisecond);

void BM_OddGraphNeighbours(benchmark::State& state)
{
  ssa::Bundle b;
  for (int i = 0; i < 22; ++i)
  {
    b = b.with(2 * i);
  }
  for (auto _ : state)
  {
    benchmark::DoNotOptimize(ssa::oddGraphNeighbours(b, 43));
  }
}
BENCHMARK(BM_OddGraphNeighbours);

}  // namespace

BENCHMARK_MAIN();
