#include <benchmark/benchmark.h>

#include <vector>

#include "fsopc/block_detectors.hpp"
#include "fsopc/fading.hpp"
#include "fsopc/simulation.hpp"
#include "fsopc/trellis.hpp"

namespace {

std::vector<std::int64_t> make_counts(std::size_t n, double n_s, double n_b, std::uint64_t seed) {
  fsopc::Rng rng(seed);
  const fsopc::ChannelParams params{n_s, n_b, 1};
  std::vector<std::int64_t> counts(n);
  for (auto& c : counts) c = fsopc::transmit_slot(static_cast<int>(rng() & 1U), 1.0, params, rng);
  return counts;
}

// Per-step cost should not depend on the memory length.
void BM_TrellisStep(benchmark::State& state) {
  const auto counts = make_counts(1 << 16, 30.0, 1.0, 1);
  fsopc::TrellisDecoder decoder({static_cast<std::size_t>(state.range(0)), 20}, 1.0);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(decoder.step(counts[i]));
    i = (i + 1) & (counts.size() - 1);
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_TrellisStep)->Arg(1)->Arg(8)->Arg(64)->Arg(1024);

void BM_MsdBlock(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto counts = make_counts(len * 256, 30.0, 1.0, 2);
  std::size_t block = 0;
  for (auto _ : state) {
    const std::span<const std::int64_t> view(counts.data() + block * len, len);
    benchmark::DoNotOptimize(fsopc::msd_detect(view, 1.0));
    block = (block + 1) % 256;
  }
  state.SetComplexityN(state.range(0));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_MsdBlock)->RangeMultiplier(2)->Range(2, 1024)->Complexity(benchmark::oNLogN);

void BM_BruteForceBlock(benchmark::State& state) {
  const auto len = static_cast<std::size_t>(state.range(0));
  const auto counts = make_counts(len, 30.0, 1.0, 3);
  for (auto _ : state) benchmark::DoNotOptimize(fsopc::brute_force_detect(counts, 1.0));
}
BENCHMARK(BM_BruteForceBlock)->DenseRange(4, 16, 4);

void BM_BerPointTrellis(benchmark::State& state) {
  const fsopc::ChannelSpec channel{fsopc::lognormal_from_si(0.5), {40.0, 1.0, 1000}};
  const fsopc::StoppingRule stop{0, 1 << 18};
  for (auto _ : state)
    benchmark::DoNotOptimize(fsopc::run_ber_point(fsopc::ReceiverSpec::trellis(8), channel, stop, 1, 1));
  state.SetItemsProcessed(state.iterations() * (1 << 18));
}
BENCHMARK(BM_BerPointTrellis)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
