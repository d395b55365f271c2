#include <benchmark/benchmark.h>

#include <sstream>

#include "bellscan/herald.hpp"
#include "bellscan/ingest.hpp"
#include "bellscan/scan.hpp"
#include "bellscan/stats.hpp"
#include "bellscan/synth.hpp"

namespace {

using namespace bellscan;

std::vector<CandidateEvent> events(std::uint64_t n) {
  SynthConfig c;
  c.n_attempts = n;
  c.seed = 1;
  c.w_ref = 0.3;
  return generate(c);
}

void BM_Generate(benchmark::State& state) {
  SynthConfig c;
  c.n_attempts = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(generate(c));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Generate)->Arg(1'000)->Arg(20'000);

void BM_AnalyzeSample(benchmark::State& state) {
  const auto e = events(static_cast<std::uint64_t>(state.range(0)));
  HeraldFilter f;
  f.start_offset_ps = -20'000;
  f.invalid_threshold = 50;
  for (auto _ : state) benchmark::DoNotOptimize(analyze_sample(e, f));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_AnalyzeSample)->Arg(2'000)->Arg(20'000);

void BM_BinomialTail(benchmark::State& state) {
  const auto n = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(binomial_upper_tail(n, n * 4 / 5));
}
BENCHMARK(BM_BinomialTail)->Arg(245)->Arg(20'000)->Arg(100'000);

void BM_Scan2d(benchmark::State& state) {
  const auto e = events(20'000);
  const auto offsets = offset_range(-50'000, 20'000, 1'000);
  const auto thresholds = threshold_range(0, 250, 10);
  const auto jobs = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(scan_2d(e, HeraldFilter{}, offsets, thresholds, jobs));
}
BENCHMARK(BM_Scan2d)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

void BM_ReadEvents(benchmark::State& state) {
  std::ostringstream out;
  write_events(out, events(20'000));
  const std::string text = out.str();
  for (auto _ : state) {
    std::istringstream in(text);
    benchmark::DoNotOptimize(read_events(in));
  }
  state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(text.size()));
}
BENCHMARK(BM_ReadEvents);

}  // namespace
BENCHMARK_MAIN();
