#pragma once

#include <string>

#include "effcost/archspec.hpp"

namespace effcost {

struct VitConfig {
  std::string name;  // empty: derived from the geometry
  Count patch = 16;
  Count depth = 12;
  Count model_dim = 768;
  Count num_heads = 12;
  Count ffn_dim = 3072;
  Count qkv_dim = 0;  // 0: same as model_dim
  ImageInput image{224, 224, 3};
  Count classes = 1000;
  PatchBoundary boundary = PatchBoundary::kExact;

  [[nodiscard]] Count effective_qkv_dim() const { return qkv_dim == 0 ? model_dim : qkv_dim; }
};

// ViT-Base geometry at the given patch size on 224x224x3 with 1000 classes.
[[nodiscard]] VitConfig vit_base(Count patch, PatchBoundary boundary = PatchBoundary::kExact);

enum class LmArrangement { kDecoderOnly, kEncoderDecoder };

struct LmConfig {
  std::string name;
  LmArrangement arrangement = LmArrangement::kDecoderOnly;
  Count layers_per_stack = 6;
  Count model_dim = 768;
  Count ffn_dim = 3072;
  Count num_heads = 12;
  Count qkv_dim = 0;
  Count vocab = 32128;
  Count input_length = 512;
  Count output_length = 512;

  [[nodiscard]] Count effective_qkv_dim() const { return qkv_dim == 0 ? model_dim : qkv_dim; }
};

struct MoeConfig {
  Count num_experts = 8;
  Count experts_per_token = 1;
  Count moe_every = 1;  // every m-th block's FFN becomes a MoE layer
};

// PatchEmbed(+CLS, +positional) -> depth x [LN, Attention, LN, FFN] -> LN -> head.
// Throws SpecError on an inconsistent config.
[[nodiscard]] ArchSpec build_vit(const VitConfig& cfg);

// Same stack with one block shared across `steps` iterations (cfg.depth
// is ignored).
[[nodiscard]] ArchSpec build_universal_transformer(const VitConfig& cfg, Count steps);
[[nodiscard]] ArchSpec build_universal_transformer(const LmConfig& cfg, Count steps);

[[nodiscard]] ArchSpec build_moe_transformer(const VitConfig& cfg, const MoeConfig& moe);
[[nodiscard]] ArchSpec build_moe_transformer(const LmConfig& cfg, const MoeConfig& moe);

// Decoder-only: 2L causal blocks over input+output length.
// Encoder-decoder: L blocks over the input, L cross-attending blocks over
// the output. Embedding table is tied and shared between streams.
[[nodiscard]] ArchSpec build_lm(const LmConfig& cfg);

}  // namespace effcost
