#include <gtest/gtest.h>

#include "effcost/archlib.hpp"
#include "effcost/errors.hpp"
#include "effcost/indicators.hpp"
#include "effcost/latency.hpp"

using namespace effcost;

namespace {

Count params(const ArchSpec& s) { return count_params(s).total; }
Count flops(const ArchSpec& s) { return count_flops(s, 1).flops; }

VitConfig small_vit() {
  VitConfig c = vit_base(32);
  c.depth = 4;
  c.model_dim = 64;
  c.num_heads = 4;
  c.ffn_dim = 128;
  return c;
}

LmConfig small_lm(LmArrangement a, Count layers) {
  LmConfig c;
  c.arrangement = a;
  c.layers_per_stack = layers;
  c.model_dim = 64;
  c.num_heads = 4;
  c.ffn_dim = 256;
  c.vocab = 500;
  c.input_length = 32;
  c.output_length = 32;
  return c;
}

}  // namespace

TEST(BuildVit, ShapeAndValidity) {
  const ArchSpec s = build_vit(vit_base(32));
  EXPECT_TRUE(validate(s).ok());
  EXPECT_EQ(s.name, "ViT-B/32");
  EXPECT_EQ(derive_sequence_length(s.input, 32, true), 50u);
  ASSERT_EQ(s.layers.size(), 4u);
  EXPECT_EQ(layer_kind(s.layers[0]), "patch_embed");
  EXPECT_EQ(layer_kind(s.layers[1]), "repeat");
  EXPECT_EQ(std::get<Repeat>(s.layers[1].node).times, 12u);
  EXPECT_FALSE(std::get<Repeat>(s.layers[1].node).share_params);
  EXPECT_EQ(layer_kind(s.layers[3]), "classifier_head");
}

TEST(BuildVit, RejectsBadConfig) {
  VitConfig c = vit_base(16);
  c.num_heads = 5;
  EXPECT_THROW((void)build_vit(c), SpecError);
  c = vit_base(16);
  c.depth = 0;
  EXPECT_THROW((void)build_vit(c), SpecError);
}

TEST(UniversalTransformer, SharedParamsUnsharedFlops) {
  VitConfig one = small_vit();
  one.depth = 1;
  for (Count k : {2, 6}) {
    VitConfig deep = small_vit();
    deep.depth = k;
    const ArchSpec ut = build_universal_transformer(small_vit(), k);
    EXPECT_TRUE(validate(ut).ok());
    EXPECT_EQ(params(ut), params(build_vit(one)));
    EXPECT_EQ(flops(ut), flops(build_vit(deep)));
    EXPECT_EQ(activation_size(ut, 2), activation_size(build_vit(deep), 2));
  }
}

TEST(UniversalTransformer, SingleStepEqualsVanilla) {
  VitConfig one = small_vit();
  one.depth = 1;
  const ArchSpec ut = build_universal_transformer(small_vit(), 1);
  const ArchSpec v = build_vit(one);
  EXPECT_EQ(params(ut), params(v));
  EXPECT_EQ(flops(ut), flops(v));
  EXPECT_EQ(activation_size(ut, 3), activation_size(v, 3));
  EXPECT_EQ(memory_access_cost(ut, 3), memory_access_cost(v, 3));
  EXPECT_EQ(training_memory(ut, 3, OptimizerKind::kAdam).peak_training_bytes,
            training_memory(v, 3, OptimizerKind::kAdam).peak_training_bytes);
  EXPECT_DOUBLE_EQ(estimate_latency(ut, default_hardware(), 3).latency_sec,
                   estimate_latency(v, default_hardware(), 3).latency_sec);
  EXPECT_THROW((void)build_universal_transformer(small_vit(), 0), SpecError);
}

TEST(UniversalTransformer, LmVariant) {
  const LmConfig c = small_lm(LmArrangement::kDecoderOnly, 3);
  const ArchSpec ut = build_universal_transformer(c, 6);
  EXPECT_TRUE(validate(ut).ok());
  EXPECT_EQ(flops(ut), flops(build_lm(c)));
  EXPECT_LT(params(ut), params(build_lm(c)));
}

TEST(Moe, SingleExpertEqualsVanillaPlusRouter) {
  const VitConfig c = small_vit();
  const ArchSpec moe = build_moe_transformer(c, MoeConfig{1, 1, 1});
  EXPECT_TRUE(validate(moe).ok());
  // One router column (d x 1) per MoE layer.
  EXPECT_EQ(params(moe), params(build_vit(c)) + c.depth * c.model_dim);
}

TEST(Moe, DoublingExpertsGrowsParamsNotFlops) {
  const VitConfig c = small_vit();
  const Count ffn_params = 2 * c.model_dim * c.ffn_dim + c.ffn_dim + c.model_dim;
  for (Count every : {1, 2}) {
    const ArchSpec e4 = build_moe_transformer(c, MoeConfig{4, 1, every});
    const ArchSpec e8 = build_moe_transformer(c, MoeConfig{8, 1, every});
    const Count moe_layers = c.depth / every;
    EXPECT_EQ(params(e8) - params(e4), moe_layers * 4 * (ffn_params + c.model_dim));
    const double rel = static_cast<double>(flops(e8) - flops(e4)) / static_cast<double>(flops(e4));
    EXPECT_LT(rel, 0.01);
  }
}

TEST(Moe, TopTwoDoublesExpertFlops) {
  const VitConfig c = small_vit();
  const ArchSpec k1 = build_moe_transformer(c, MoeConfig{4, 1, 1});
  const ArchSpec k2 = build_moe_transformer(c, MoeConfig{4, 2, 1});
  // Expert work per MoE layer: K applications of the FFN.
  const Count L = 50, d = c.model_dim, f = c.ffn_dim;
  const Count ffn_flops = 2 * L * d * f + 5 * L * f + 2 * L * d;
  EXPECT_EQ(flops(k2) - flops(k1), c.depth * ffn_flops);
  EXPECT_THROW((void)build_moe_transformer(c, MoeConfig{2, 3, 1}), SpecError);
  EXPECT_THROW((void)build_moe_transformer(c, MoeConfig{2, 1, 3}), SpecError);
}

TEST(Lm, ArrangementsAreValid) {
  for (Count layers : {1, 2, 6}) {
    EXPECT_TRUE(validate(build_lm(small_lm(LmArrangement::kDecoderOnly, layers))).ok());
    EXPECT_TRUE(validate(build_lm(small_lm(LmArrangement::kEncoderDecoder, layers))).ok());
  }
  EXPECT_THROW((void)build_lm(small_lm(LmArrangement::kDecoderOnly, 0)), SpecError);
}

TEST(Lm, EncoderDecoderHasSimilarParamsAboutHalfCompute) {
  for (Count layers : {2, 6, 12}) {
    LmConfig ed;
    ed.arrangement = LmArrangement::kEncoderDecoder;
    ed.layers_per_stack = layers;
    LmConfig dec = ed;
    dec.arrangement = LmArrangement::kDecoderOnly;
    const double pr = static_cast<double>(params(build_lm(ed))) / static_cast<double>(params(build_lm(dec)));
    const double fr = static_cast<double>(flops(build_lm(ed))) / static_cast<double>(flops(build_lm(dec)));
    EXPECT_GE(pr, 0.9);
    EXPECT_LE(pr, 1.15);
    EXPECT_GE(fr, 0.45);
    EXPECT_LE(fr, 0.6);
  }
}

TEST(Lm, EmbeddingParamsCostNoFlops) {
  // Byte-level vs subword vocabulary on the same stack: the lookup table
  // grows with the vocabulary but the lookup itself does no arithmetic.
  LmConfig bytes;
  bytes.layers_per_stack = 6;
  bytes.vocab = 256;
  LmConfig subword = bytes;
  subword.vocab = 32000;
  const ArchSpec a = build_lm(bytes), b = build_lm(subword);
  auto first_layer = [](const std::vector<LayerTotal>& rows) { return rows.front(); };
  EXPECT_EQ(first_layer(count_params(a).by_layer).value, 256u * 768);
  EXPECT_EQ(first_layer(count_params(b).by_layer).value, 32000u * 768);
  EXPECT_EQ(first_layer(count_flops(a, 1).by_layer).value, 0u);
  EXPECT_EQ(first_layer(count_flops(b, 1).by_layer).value, 0u);
  EXPECT_EQ(params(b) - params(a), (32000u - 256) * 768);
}
