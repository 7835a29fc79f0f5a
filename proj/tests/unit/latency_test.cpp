#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "effcost/archlib.hpp"
#include "effcost/indicators.hpp"
#include "effcost/latency.hpp"

using namespace effcost;

namespace {

ArchSpec embed_then(LayerList layers, Count len = 4, Count d = 64) {
  ArchSpec s;
  s.name = "probe";
  s.input = TokenInput{len, 10, 0};
  s.layers.emplace_back(TokenEmbedding{10, d, true, false});
  for (auto& l : layers) s.layers.push_back(std::move(l));
  return s;
}

HardwareModel compute_only() {
  HardwareModel hw;
  hw.name = "compute-only";
  hw.peak_flops_per_sec = 1e9;
  hw.mem_bandwidth_bytes_per_sec = std::numeric_limits<double>::infinity();
  hw.per_op_overhead_sec = 0.0;
  return hw;
}

}  // namespace

TEST(Latency, SequenceSumsParallelTakesMax) {
  const HardwareModel hw = compute_only();
  const double base = estimate_latency(embed_then({}), hw, 1).latency_sec;
  const Dense dense{64, 64, true, 0.0};
  const double seq = estimate_latency(embed_then({dense, dense}), hw, 1).latency_sec - base;
  const double par = estimate_latency(embed_then({Parallel{{{dense}, {dense}}}}), hw, 1).latency_sec - base;
  EXPECT_NEAR(seq, 2 * par, 1e-15);
  EXPECT_GT(par, 0.0);
}

TEST(Latency, PureComputeRooflineIsFlopsOverPeak) {
  const HardwareModel hw = compute_only();
  const ArchSpec s = build_vit(vit_base(32));
  for (Count b : {1, 8}) {
    const double expected = static_cast<double>(count_flops(s, b).flops) / hw.peak_flops_per_sec;
    EXPECT_NEAR(estimate_latency(s, hw, b).latency_sec, expected, expected * 1e-12);
  }
}

TEST(Latency, ComputeBoundBatchDoublesLatencyKeepsThroughput) {
  const HardwareModel hw = compute_only();
  const ArchSpec s = build_vit(vit_base(32));
  const auto one = estimate_throughput(s, hw, 16);
  const auto two = estimate_throughput(s, hw, 32);
  EXPECT_NEAR(two.latency_sec, 2 * one.latency_sec, one.latency_sec * 1e-12);
  EXPECT_NEAR(two.throughput_examples_per_sec, one.throughput_examples_per_sec,
              one.throughput_examples_per_sec * 1e-12);
}

TEST(Latency, PerLayerBreakdownSumsAndTags) {
  HardwareModel hw = default_hardware();
  const auto est = estimate_latency(build_vit(vit_base(16)), hw, 1);
  double sum = 0.0;
  bool any_memory = false, any_compute = false;
  for (const auto& l : est.per_layer) {
    sum += l.seconds;
    (l.memory_bound ? any_memory : any_compute) = true;
  }
  EXPECT_NEAR(sum, est.latency_sec, est.latency_sec * 1e-9);
  EXPECT_TRUE(any_memory);
  EXPECT_GT(est.latency_sec, 0.0);
}

TEST(Latency, OverheadChargedPerSequentialOp) {
  HardwareModel hw = compute_only();
  hw.per_op_overhead_sec = 1e-3;
  const Dense dense{64, 64, true, 0.0};
  const double a = estimate_latency(embed_then({dense}), hw, 1).latency_sec;
  const double b = estimate_latency(embed_then({Repeat{{dense}, 5, false}}), hw, 1).latency_sec;
  EXPECT_NEAR(b - a, 4 * (1e-3 + 64.0 * 65 * 4 / 1e9), 1e-12);
}

TEST(Latency, DevicesDivideComputeTime) {
  HardwareModel one = compute_only(), four = compute_only();
  four.num_devices = 4;
  const ArchSpec s = build_vit(vit_base(32));
  EXPECT_NEAR(estimate_latency(s, one, 1).latency_sec, 4 * estimate_latency(s, four, 1).latency_sec, 1e-12);
}

TEST(Latency, LengthPaddingIncreasesLatency) {
  HardwareModel plain = compute_only(), padded = compute_only();
  padded.length_pad_multiple = 128;
  const ArchSpec s = build_vit(vit_base(16));
  const double a = estimate_latency(s, plain, 1).latency_sec;
  const double b = estimate_latency(s, padded, 1).latency_sec;
  EXPECT_GT(b, a * 1.2);
  EXPECT_NEAR(b, static_cast<double>(count_flops(s, 1, CostOptions{128}).flops) / 1e9, b * 1e-12);
}

TEST(Throughput, FromLatency) {
  const auto t = throughput_from_latency(100, 1.0);
  EXPECT_DOUBLE_EQ(t.throughput_examples_per_sec, 100.0);
  EXPECT_DOUBLE_EQ(t.latency_sec, 1.0);
  EXPECT_FALSE(t.pipeline_bubble_fraction.has_value());
}

TEST(Throughput, BubbleScalesThroughput) {
  const auto t = throughput_from_latency(10, 1.0, BubbleModel{1.0, 9});
  EXPECT_NEAR(t.throughput_examples_per_sec, 10.0 * 0.9, 1e-12);
  ASSERT_TRUE(t.pipeline_bubble_fraction.has_value());
  EXPECT_NEAR(*t.pipeline_bubble_fraction, 0.1, 1e-12);
}

TEST(Throughput, EqualsBatchOverLatencyWithoutBubble) {
  const auto est = estimate_throughput(build_vit(vit_base(32)), default_hardware(), 8);
  EXPECT_DOUBLE_EQ(est.throughput_examples_per_sec, 8 / est.latency_sec);
}

TEST(Hardware, CheckRejectsBadModels) {
  HardwareModel hw;
  EXPECT_NO_THROW(hw.check());
  hw.peak_flops_per_sec = 0;
  EXPECT_THROW(hw.check(), std::invalid_argument);
  hw = HardwareModel{};
  hw.num_devices = 0;
  EXPECT_THROW(hw.check(), std::invalid_argument);
  hw = HardwareModel{};
  hw.per_op_overhead_sec = -1;
  EXPECT_THROW(hw.check(), std::invalid_argument);
  hw = HardwareModel{};
  hw.length_pad_multiple = 0;
  EXPECT_THROW(hw.check(), std::invalid_argument);
  EXPECT_THROW((void)estimate_latency(build_vit(vit_base(32)), hw, 1), std::invalid_argument);
}

TEST(Hardware, PresetsAreValidAndFindable) {
  EXPECT_GE(hardware_presets().size(), 3u);
  for (const auto& hw : hardware_presets()) {
    EXPECT_NO_THROW(hw.check());
    ASSERT_TRUE(find_preset(hw.name).has_value());
    EXPECT_EQ(*find_preset(hw.name), hw);
  }
  EXPECT_FALSE(find_preset("abacus").has_value());
}

TEST(Hardware, DeepNarrowSlowerThanWideShallowEverywhere) {
  VitConfig deep = vit_base(32);
  deep.depth = 48;
  deep.model_dim = 492;
  deep.qkv_dim = 384;
  deep.num_heads = 6;
  deep.ffn_dim = 1024;
  const ArchSpec d = build_vit(deep), w = build_vit(vit_base(32));
  ASSERT_NEAR(count_flops(d, 1).gflops(), count_flops(w, 1).gflops(), 0.01);
  for (const auto& hw : hardware_presets()) {
    EXPECT_GT(estimate_latency(d, hw, 1).latency_sec, estimate_latency(w, hw, 1).latency_sec) << hw.name;
  }
}
