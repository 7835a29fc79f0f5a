#include <benchmark/benchmark.h>

#include <random>

#include "effcost/analysis.hpp"
#include "effcost/archlib.hpp"
#include "effcost/indicators.hpp"
#include "effcost/latency.hpp"

using namespace effcost;

namespace {

std::vector<ModelRecord> random_records(std::size_t n) {
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<ModelRecord> out;
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back({"m" + std::to_string(i), std::nullopt, u(rng), {{"params", u(rng)}, {"latency", u(rng)}}});
  }
  return out;
}

void BM_CountFlopsVit(benchmark::State& state) {
  const ArchSpec spec = build_vit(vit_base(static_cast<Count>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(count_flops(spec, 1).flops);
}
BENCHMARK(BM_CountFlopsVit)->Arg(8)->Arg(16)->Arg(32);

void BM_CountParamsLm(benchmark::State& state) {
  LmConfig cfg;
  cfg.arrangement = LmArrangement::kEncoderDecoder;
  cfg.layers_per_stack = static_cast<Count>(state.range(0));
  const ArchSpec spec = build_lm(cfg);
  for (auto _ : state) benchmark::DoNotOptimize(count_params(spec).total);
}
BENCHMARK(BM_CountParamsLm)->Arg(6)->Arg(24);

void BM_EstimateLatency(benchmark::State& state) {
  const ArchSpec spec = build_vit(vit_base(16));
  const HardwareModel hw = default_hardware();
  for (auto _ : state) benchmark::DoNotOptimize(estimate_latency(spec, hw, 32).latency_sec);
}
BENCHMARK(BM_EstimateLatency);

void BM_Pareto(benchmark::State& state) {
  const auto rs = random_records(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pareto_indices(rs, "quality", "params"));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Pareto)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

void BM_Kendall(benchmark::State& state) {
  const auto rs = random_records(static_cast<std::size_t>(state.range(0)));
  std::vector<double> a, b;
  for (const auto& r : rs) {
    a.push_back(r.indicators.at("params"));
    b.push_back(r.indicators.at("latency"));
  }
  for (auto _ : state) benchmark::DoNotOptimize(kendall_counts(a, b));
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_Kendall)->RangeMultiplier(8)->Range(8, 32768)->Complexity();

}  // namespace
BENCHMARK_MAIN();
