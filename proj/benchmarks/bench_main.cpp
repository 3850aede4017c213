#include <benchmark/benchmark.h>

#include "parmax/backend.hpp"
#include "parmax/corpus.hpp"
#include "parmax/parallelmax.hpp"
#include "parmax/rng.hpp"
#include "parmax/sim.hpp"
#include "parmax/stats.hpp"
#include "parmax/tiers.hpp"

namespace {

void BM_SampleServiceTime(benchmark::State& state) {
  const parmax::TierSet tiers = parmax::default_tier_models();
  const parmax::TierModel& model = tiers.by_kind(parmax::TierKind::StandardShared);
  parmax::Rng rng(1234);
  const int in_flight = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        parmax::sample_service_time(model, parmax::AgentRole::Video, in_flight, rng));
  }
}
BENCHMARK(BM_SampleServiceTime)->Arg(1)->Arg(50);

void BM_RunLevel(benchmark::State& state) {
  const parmax::TierSet tiers = parmax::default_tier_models();
  const parmax::TierModel& model = tiers.by_kind(parmax::TierKind::StandardShared);
  const parmax::Corpus corpus = parmax::synth_corpus(100, parmax::SynthTarget{}, 42);
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parmax::run_level(model, corpus, level, 42));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) * 100);
}
BENCHMARK(BM_RunLevel)->Arg(1)->Arg(10)->Arg(50);

void BM_FullSweep(benchmark::State& state) {
  const parmax::TierSet tiers = parmax::default_tier_models();
  parmax::SweepPlan plan;
  const parmax::Corpus corpus =
      parmax::synth_corpus(plan.requests_per_level, parmax::SynthTarget{}, plan.seed);
  const int jobs = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parmax::run_sweep(plan, tiers, corpus, jobs));
  }
}
BENCHMARK(BM_FullSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ExpectedMaxMc(benchmark::State& state) {
  const parmax::MaxOfK dice{parmax::DiscretePmf::fair_die(6), 3};
  const auto samples = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(parmax::expected_max_mc(dice, samples, 7));
  }
  state.SetItemsProcessed(static_cast<std::int64_t>(state.iterations()) *
                          static_cast<std::int64_t>(samples));
}
BENCHMARK(BM_ExpectedMaxMc)->Arg(10'000)->Arg(1'000'000)->Unit(benchmark::kMillisecond);

void BM_Aggregate(benchmark::State& state) {
  const parmax::TierSet tiers = parmax::default_tier_models();
  const parmax::TierModel& model = tiers.by_kind(parmax::TierKind::StandardShared);
  const parmax::Corpus corpus = parmax::synth_corpus(1000, parmax::SynthTarget{}, 42);
  const parmax::CellResult cell = parmax::run_level(model, corpus, 10, 42);
  const auto slice = parmax::steady_slice(cell);
  const parmax::CorpusStats stats = parmax::corpus_stats(corpus);
  const parmax::CostBasis basis{parmax::PricingTable{}, stats.mean_input_tokens,
                                stats.mean_output_tokens};
  for (auto _ : state) {
    benchmark::DoNotOptimize(parmax::aggregate(slice, cell.tier, cell.concurrency, basis));
  }
}
BENCHMARK(BM_Aggregate);

}  // namespace

BENCHMARK_MAIN();
