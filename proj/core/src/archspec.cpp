#include "effcost/archspec.hpp"

#include <fmt/format.h>

#include <type_traits>

namespace effcost {

TensorShape::TensorShape(std::vector<Count> dims, Count element_bytes)
    : dims_(std::move(dims)), element_bytes_(element_bytes) {
  if (element_bytes_ == 0) throw SpecError("element_bytes must be >= 1");
  elements_ = 1;
  for (Count d : dims_) {
    if (d == 0) throw SpecError("tensor extents must be >= 1");
    elements_ = checked_mul(elements_, d, "tensor element count");
  }
}

std::string_view layer_kind(const LayerSpec& layer) {
  return std::visit(
      [](const auto& l) -> std::string_view {
        using T = std::decay_t<decltype(l)>;
        if constexpr (std::is_same_v<T, PatchEmbed>) return "patch_embed";
        else if constexpr (std::is_same_v<T, Attention>) return "attention";
        else if constexpr (std::is_same_v<T, FeedForward>) return "feed_forward";
        else if constexpr (std::is_same_v<T, LayerNorm>) return "layer_norm";
        else if constexpr (std::is_same_v<T, Dense>) return "dense";
        else if constexpr (std::is_same_v<T, TokenEmbedding>) return "token_embedding";
        else if constexpr (std::is_same_v<T, Unembed>) return "unembed";
        else if constexpr (std::is_same_v<T, ClassifierHead>) return "classifier_head";
        else if constexpr (std::is_same_v<T, MoE>) return "moe";
        else if constexpr (std::is_same_v<T, Repeat>) return "repeat";
        else return "parallel";
      },
      layer.node);
}

std::string ValidationResult::summary() const {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += fmt::format("{}: {}", v.path.empty() ? "/" : v.path, v.message);
  }
  return out;
}

Count patch_grid(Count extent, Count patch, PatchBoundary boundary) {
  if (patch == 0) throw SpecError("patch size must be >= 1");
  switch (boundary) {
    case PatchBoundary::kExact:
      if (extent % patch != 0) {
        throw SpecError(fmt::format("patch {} does not divide input extent {}", patch, extent));
      }
      return extent / patch;
    case PatchBoundary::kPad:
      return extent / patch + (extent % patch != 0 ? 1 : 0);
    case PatchBoundary::kCrop:
      if (patch > extent) {
        throw SpecError(fmt::format("patch {} exceeds input extent {}", patch, extent));
      }
      return extent / patch;
  }
  return 0;
}

Count derive_sequence_length(const InputSignature& input, Count patch, bool add_cls,
                             PatchBoundary boundary) {
  const auto* image = std::get_if<ImageInput>(&input);
  if (image == nullptr) throw SpecError("sequence length from patches requires an image input");
  const Count rows = patch_grid(image->height, patch, boundary);
  const Count cols = patch_grid(image->width, patch, boundary);
  return checked_add(checked_mul(rows, cols, "patch count"), add_cls ? 1 : 0, "sequence length");
}

namespace {

// Shape of the running activation stream while walking a spec.
struct Stream {
  bool raw_image = false;
  Count length = 0;
  Count width = 0;  // 0: token ids, not yet embedded
  Count memory_length = 0;
  bool source_embedded = false;
};

class Validator {
 public:
  explicit Validator(const ArchSpec& spec) : spec_(spec) {}

  ValidationResult run() {
    if (spec_.element_bytes == 0) add("/element_bytes", "element_bytes must be >= 1");
    Stream s;
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, ImageInput>) {
            if (in.height == 0 || in.width == 0 || in.channels == 0) {
              add("/input", "image extents must be >= 1");
            }
            Count px{};
            if (__builtin_mul_overflow(in.height, in.width, &px) ||
                __builtin_mul_overflow(px, in.channels, &px)) {
              add("/input", "image element count overflows 64-bit accumulator");
            }
            s.raw_image = true;
            s.length = in.height * in.width;
            s.width = in.channels;
          } else {
            if (in.length == 0) add("/input", "token sequence length must be >= 1");
            if (in.vocab == 0) add("/input", "vocab must be >= 1");
            s.length = in.length;
            s.width = 0;
          }
        },
        spec_.input);
    walk_list(spec_.layers, "/layers", s, 0);
    return std::move(result_);
  }

 private:
  void add(std::string path, std::string message) {
    result_.violations.push_back({std::move(path), std::move(message)});
  }

  void positive(const std::string& path, const char* field, Count v) {
    if (v == 0) add(path, fmt::format("{} must be >= 1", field));
  }

  void expect_width(const std::string& path, const Stream& s, Count dim, const char* field) {
    if (s.width == 0) {
      add(path, "layer needs an embedded input (token ids reach it directly)");
    } else if (s.width != dim) {
      add(path, fmt::format("{} {} does not match incoming width {}", field, dim, s.width));
    }
  }

  void check_output(const std::string& path, const Stream& s) {
    Count out{};
    if (__builtin_mul_overflow(s.length, s.width == 0 ? 1 : s.width, &out)) {
      add(path, "output tensor element count overflows 64-bit accumulator");
    }
  }

  void sparsity(const std::string& path, double s) {
    if (!(s >= 0.0 && s < 1.0)) add(path, "weight_sparsity must lie in [0, 1)");
  }

  void walk_list(const LayerList& layers, const std::string& path, Stream& s, std::size_t depth) {
    for (std::size_t i = 0; i < layers.size(); ++i) {
      walk(layers[i], fmt::format("{}/{}", path, i), s, depth);
    }
  }

  void walk(const LayerSpec& layer, const std::string& path, Stream& s, std::size_t depth) {
    if (depth > kMaxNestingDepth) {
      add(path, fmt::format("nesting deeper than {} levels", kMaxNestingDepth));
      return;
    }
    std::visit([&](const auto& l) { visit(l, path, s, depth); }, layer.node);
    check_output(path, s);
  }

  void visit(const PatchEmbed& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "patch", l.patch);
    positive(path, "in_channels", l.in_channels);
    positive(path, "embed_dim", l.embed_dim);
    const auto* image = std::get_if<ImageInput>(&spec_.input);
    if (image == nullptr || !s.raw_image) {
      add(path, "patch_embed requires the raw image input");
    } else {
      if (l.in_channels != image->channels) {
        add(path, fmt::format("in_channels {} does not match image channels {}", l.in_channels,
                              image->channels));
      }
      if (l.patch != 0) {
        try {
          s.length = derive_sequence_length(*image, l.patch, l.add_cls_token, l.boundary);
        } catch (const Error& e) {
          add(path, e.what());
        }
      }
    }
    s.raw_image = false;
    s.width = l.embed_dim;
  }

  void visit(const Attention& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "model_dim", l.model_dim);
    positive(path, "qkv_dim", l.qkv_dim);
    positive(path, "num_heads", l.num_heads);
    if (l.num_heads != 0 && l.qkv_dim % l.num_heads != 0) {
      add(path, fmt::format("num_heads {} does not divide qkv_dim {}", l.num_heads, l.qkv_dim));
    }
    if (l.cross_attention && s.memory_length == 0) {
      add(path, "cross_attention needs an encoder memory (a target-stream token_embedding first)");
    }
    expect_width(path, s, l.model_dim, "model_dim");
  }

  void visit(const FeedForward& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "model_dim", l.model_dim);
    positive(path, "hidden_dim", l.hidden_dim);
    sparsity(path, l.weight_sparsity);
    expect_width(path, s, l.model_dim, "model_dim");
  }

  void visit(const LayerNorm& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "model_dim", l.model_dim);
    expect_width(path, s, l.model_dim, "model_dim");
  }

  void visit(const Dense& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "in_dim", l.in_dim);
    positive(path, "out_dim", l.out_dim);
    sparsity(path, l.weight_sparsity);
    expect_width(path, s, l.in_dim, "in_dim");
    s.width = l.out_dim;
  }

  void visit(const TokenEmbedding& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "vocab", l.vocab);
    positive(path, "embed_dim", l.embed_dim);
    const auto* tokens = std::get_if<TokenInput>(&spec_.input);
    if (tokens == nullptr) {
      add(path, "token_embedding requires a token-sequence input");
    } else {
      if (l.vocab != tokens->vocab) {
        add(path, fmt::format("vocab {} does not match input vocab {}", l.vocab, tokens->vocab));
      }
      if (l.target_stream) {
        if (tokens->target_length == 0) add(path, "target_stream needs input target_length >= 1");
        if (!s.source_embedded) add(path, "target_stream needs a source token_embedding before it");
        s.memory_length = s.length;
        s.length = tokens->target_length;
      } else {
        if (s.source_embedded) add(path, "source stream embedded twice");
        s.source_embedded = true;
      }
    }
    s.width = l.embed_dim;
  }

  void visit(const Unembed& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "model_dim", l.model_dim);
    positive(path, "vocab", l.vocab);
    expect_width(path, s, l.model_dim, "model_dim");
    s.width = l.vocab;
  }

  void visit(const ClassifierHead& l, const std::string& path, Stream& s, std::size_t) {
    positive(path, "model_dim", l.model_dim);
    positive(path, "classes", l.classes);
    expect_width(path, s, l.model_dim, "model_dim");
    s.length = 1;
    s.width = l.classes;
  }

  void visit(const MoE& l, const std::string& path, Stream& s, std::size_t depth) {
    positive(path, "num_experts", l.num_experts);
    positive(path, "experts_per_token", l.experts_per_token);
    positive(path, "router_dim", l.router_dim);
    if (l.experts_per_token > l.num_experts) {
      add(path, fmt::format("experts_per_token {} exceeds num_experts {}", l.experts_per_token,
                            l.num_experts));
    }
    expect_width(path, s, l.router_dim, "router_dim");
    const auto& expert = *l.expert;
    if (!std::holds_alternative<FeedForward>(expert.node) &&
        !std::holds_alternative<Dense>(expert.node)) {
      add(path + "/expert", "expert must be a feed_forward or dense layer");
      return;
    }
    walk(expert, path + "/expert", s, depth + 1);
  }

  void visit(const Repeat& l, const std::string& path, Stream& s, std::size_t depth) {
    positive(path, "times", l.times);
    if (l.body.empty()) add(path, "repeat body is empty");
    const Stream before = s;
    walk_list(l.body, path + "/body", s, depth + 1);
    if (l.times > 1 && (s.width != before.width || s.length != before.length)) {
      add(path, "repeated body must preserve the stream shape");
    }
  }

  void visit(const Parallel& l, const std::string& path, Stream& s, std::size_t depth) {
    if (l.branches.empty()) add(path, "parallel needs at least one branch");
    const Stream before = s;
    std::optional<Stream> merged;
    for (std::size_t b = 0; b < l.branches.size(); ++b) {
      Stream branch = before;
      walk_list(l.branches[b], fmt::format("{}/branches/{}", path, b), branch, depth + 1);
      if (!merged) {
        merged = branch;
      } else if (merged->width != branch.width || merged->length != branch.length) {
        add(fmt::format("{}/branches/{}", path, b), "branch output shape differs from branch 0");
      }
    }
    if (merged) s = *merged;
  }

  const ArchSpec& spec_;
  ValidationResult result_;
};

}  // namespace

ValidationResult validate(const ArchSpec& spec) {
  try {
    return Validator(spec).run();
  } catch (const std::exception& e) {
    // Allocation failure or similar; still report rather than propagate.
    return ValidationResult{{{"/", e.what()}}};
  }
}

void require_valid(const ArchSpec& spec) {
  auto result = validate(spec);
  if (!result.ok()) {
    throw SpecError(fmt::format("invalid spec '{}': {}", spec.name, result.summary()));
  }
}

}  // namespace effcost
