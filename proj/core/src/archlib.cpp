#include "effcost/archlib.hpp"

#include <fmt/format.h>

#include <optional>

#include "effcost/errors.hpp"

namespace effcost {
namespace {

struct BlockDims {
  Count d;
  Count qkv;
  Count heads;
  Count ffn;
};

LayerSpec ffn_or_moe(const BlockDims& b, const std::optional<MoeConfig>& moe) {
  FeedForward ffn{b.d, b.ffn, 0.0};
  if (!moe) return ffn;
  return MoE{LayerSpec{ffn}, moe->num_experts, moe->experts_per_token, b.d};
}

LayerList block(const BlockDims& b, bool causal, bool cross, const std::optional<MoeConfig>& moe) {
  LayerList out{LayerNorm{b.d}, Attention{b.d, b.qkv, b.heads, causal, false}};
  if (cross) {
    out.emplace_back(LayerNorm{b.d});
    out.emplace_back(Attention{b.d, b.qkv, b.heads, false, true});
  }
  out.emplace_back(LayerNorm{b.d});
  out.push_back(ffn_or_moe(b, moe));
  return out;
}

// `depth` blocks as a Repeat. With MoE, every moe_every-th block's FFN is
// replaced, so the repeated unit holds moe_every blocks.
LayerSpec stack(const BlockDims& b, Count depth, bool share, bool causal, bool cross,
                const std::optional<MoeConfig>& moe) {
  if (depth == 0) throw SpecError("stack depth must be >= 1");
  Repeat rep;
  rep.share_params = share;
  if (!moe) {
    rep.body = block(b, causal, cross, std::nullopt);
    rep.times = depth;
    return rep;
  }
  if (moe->moe_every == 0 || depth % moe->moe_every != 0) {
    throw SpecError(fmt::format("moe_every {} must divide depth {}", moe->moe_every, depth));
  }
  for (Count i = 1; i <= moe->moe_every; ++i) {
    auto part = block(b, causal, cross, i == moe->moe_every ? moe : std::nullopt);
    rep.body.insert(rep.body.end(), part.begin(), part.end());
  }
  rep.times = depth / moe->moe_every;
  return rep;
}

void check_dims(Count d, Count qkv, Count heads, Count ffn) {
  if (d == 0 || qkv == 0 || heads == 0 || ffn == 0) throw SpecError("dimensions must be >= 1");
  if (d % heads != 0) throw SpecError(fmt::format("num_heads {} does not divide model_dim {}", heads, d));
  if (qkv % heads != 0) throw SpecError(fmt::format("num_heads {} does not divide qkv_dim {}", heads, qkv));
}

ArchSpec vit_spec(const VitConfig& cfg, Count depth, bool share, const std::optional<MoeConfig>& moe) {
  check_dims(cfg.model_dim, cfg.effective_qkv_dim(), cfg.num_heads, cfg.ffn_dim);
  if (cfg.classes == 0) throw SpecError("classes must be >= 1");
  // Throws on a patch that the boundary rule rejects.
  (void)derive_sequence_length(cfg.image, cfg.patch, true, cfg.boundary);

  const BlockDims b{cfg.model_dim, cfg.effective_qkv_dim(), cfg.num_heads, cfg.ffn_dim};
  ArchSpec spec;
  spec.name = cfg.name.empty() ? fmt::format("vit-d{}-w{}-p{}", depth, cfg.model_dim, cfg.patch) : cfg.name;
  spec.input = cfg.image;
  spec.layers.emplace_back(PatchEmbed{cfg.patch, cfg.image.channels, cfg.model_dim, true, true, cfg.boundary});
  spec.layers.push_back(stack(b, depth, share, false, false, moe));
  spec.layers.emplace_back(LayerNorm{cfg.model_dim});
  spec.layers.emplace_back(ClassifierHead{cfg.model_dim, cfg.classes});
  require_valid(spec);
  return spec;
}

ArchSpec lm_spec(const LmConfig& cfg, std::optional<Count> shared_steps, const std::optional<MoeConfig>& moe) {
  check_dims(cfg.model_dim, cfg.effective_qkv_dim(), cfg.num_heads, cfg.ffn_dim);
  if (cfg.layers_per_stack == 0) throw SpecError("layers_per_stack must be >= 1");
  if (cfg.vocab == 0 || cfg.input_length == 0 || cfg.output_length == 0) {
    throw SpecError("vocab and sequence lengths must be >= 1");
  }
  const BlockDims b{cfg.model_dim, cfg.effective_qkv_dim(), cfg.num_heads, cfg.ffn_dim};
  const bool share = shared_steps.has_value();
  const Count d = cfg.model_dim;

  ArchSpec spec;
  if (cfg.arrangement == LmArrangement::kDecoderOnly) {
    const Count depth = share ? *shared_steps : 2 * cfg.layers_per_stack;
    spec.name = cfg.name.empty() ? fmt::format("lm-dec-{}x{}", depth, d) : cfg.name;
    spec.input = TokenInput{cfg.input_length + cfg.output_length, cfg.vocab, 0};
    spec.layers.emplace_back(TokenEmbedding{cfg.vocab, d, true, false});
    spec.layers.push_back(stack(b, depth, share, true, false, moe));
    spec.layers.emplace_back(LayerNorm{d});
    spec.layers.emplace_back(Unembed{d, cfg.vocab});
  } else {
    const Count depth = share ? *shared_steps : cfg.layers_per_stack;
    spec.name = cfg.name.empty() ? fmt::format("lm-encdec-{}+{}x{}", depth, depth, d) : cfg.name;
    spec.input = TokenInput{cfg.input_length, cfg.vocab, cfg.output_length};
    spec.layers.emplace_back(TokenEmbedding{cfg.vocab, d, true, false});
    spec.layers.push_back(stack(b, depth, share, false, false, moe));
    spec.layers.emplace_back(LayerNorm{d});
    spec.layers.emplace_back(TokenEmbedding{cfg.vocab, d, true, true});
    spec.layers.push_back(stack(b, depth, share, true, true, moe));
    spec.layers.emplace_back(LayerNorm{d});
    spec.layers.emplace_back(Unembed{d, cfg.vocab});
  }
  require_valid(spec);
  return spec;
}

}  // namespace

VitConfig vit_base(Count patch, PatchBoundary boundary) {
  VitConfig cfg;
  cfg.name = fmt::format("ViT-B/{}", patch);
  cfg.patch = patch;
  cfg.boundary = boundary;
  return cfg;
}

ArchSpec build_vit(const VitConfig& cfg) {
  if (cfg.depth == 0) throw SpecError("depth must be >= 1");
  return vit_spec(cfg, cfg.depth, false, std::nullopt);
}

ArchSpec build_universal_transformer(const VitConfig& cfg, Count steps) {
  if (steps == 0) throw SpecError("steps must be >= 1");
  auto spec = vit_spec(cfg, steps, true, std::nullopt);
  if (cfg.name.empty()) spec.name = fmt::format("ut-{}x{}-p{}", steps, cfg.model_dim, cfg.patch);
  return spec;
}

ArchSpec build_universal_transformer(const LmConfig& cfg, Count steps) {
  if (steps == 0) throw SpecError("steps must be >= 1");
  return lm_spec(cfg, steps, std::nullopt);
}

ArchSpec build_moe_transformer(const VitConfig& cfg, const MoeConfig& moe) {
  if (cfg.depth == 0) throw SpecError("depth must be >= 1");
  if (moe.experts_per_token > moe.num_experts || moe.experts_per_token == 0) {
    throw SpecError("experts_per_token must lie in [1, num_experts]");
  }
  auto spec = vit_spec(cfg, cfg.depth, false, moe);
  if (cfg.name.empty()) {
    spec.name = fmt::format("moe-e{}k{}-d{}-w{}", moe.num_experts, moe.experts_per_token, cfg.depth, cfg.model_dim);
  }
  return spec;
}

ArchSpec build_moe_transformer(const LmConfig& cfg, const MoeConfig& moe) {
  if (moe.experts_per_token > moe.num_experts || moe.experts_per_token == 0) {
    throw SpecError("experts_per_token must lie in [1, num_experts]");
  }
  return lm_spec(cfg, std::nullopt, moe);
}

ArchSpec build_lm(const LmConfig& cfg) { return lm_spec(cfg, std::nullopt, std::nullopt); }

}  // namespace effcost
