#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "effcost/checked.hpp"

namespace effcost {

// Ordered tensor extents plus element width. Element count is checked
// against the 64-bit accumulator at construction.
class TensorShape {
 public:
  TensorShape() = default;
  explicit TensorShape(std::vector<Count> dims, Count element_bytes = 4);

  [[nodiscard]] const std::vector<Count>& dims() const noexcept { return dims_; }
  [[nodiscard]] Count element_bytes() const noexcept { return element_bytes_; }
  [[nodiscard]] Count elements() const noexcept { return elements_; }
  [[nodiscard]] Count bytes() const { return checked_mul(elements_, element_bytes_, "tensor bytes"); }

  bool operator==(const TensorShape&) const = default;

 private:
  std::vector<Count> dims_;
  Count element_bytes_ = 4;
  Count elements_ = 1;
};

// Deep-copying owning pointer; lets recursive variants stay value types.
template <typename T>
class Boxed {
 public:
  Boxed() : ptr_(std::make_unique<T>()) {}
  Boxed(T value) : ptr_(std::make_unique<T>(std::move(value))) {}  // NOLINT(google-explicit-constructor)
  Boxed(const Boxed& other) : ptr_(std::make_unique<T>(*other.ptr_)) {}
  Boxed(Boxed&&) noexcept = default;
  Boxed& operator=(const Boxed& other) {
    if (this != &other) ptr_ = std::make_unique<T>(*other.ptr_);
    return *this;
  }
  Boxed& operator=(Boxed&&) noexcept = default;
  ~Boxed() = default;

  const T& operator*() const { return *ptr_; }
  const T* operator->() const { return ptr_.get(); }

  friend bool operator==(const Boxed& a, const Boxed& b) { return *a.ptr_ == *b.ptr_; }

 private:
  std::unique_ptr<T> ptr_;
};

// How a patch grid treats an image extent the patch does not divide.
enum class PatchBoundary {
  kExact,  // reject non-divisible extents
  kPad,    // round the grid up (SAME padding)
  kCrop,   // drop the remainder (VALID convolution)
};

struct LayerSpec;
using LayerList = std::vector<LayerSpec>;

struct PatchEmbed {
  Count patch = 16;
  Count in_channels = 3;
  Count embed_dim = 768;
  bool add_cls_token = true;
  bool positional = true;
  PatchBoundary boundary = PatchBoundary::kExact;
  bool bias = true;
  bool operator==(const PatchEmbed&) const = default;
};

struct Attention {
  Count model_dim = 768;
  Count qkv_dim = 768;
  Count num_heads = 12;
  bool is_causal = false;
  bool cross_attention = false;
  bool operator==(const Attention&) const = default;
};

// Two-layer MLP with GELU and a residual add. `weight_sparsity` is the
// fraction of matmul work skipped by unstructured weight sparsity.
struct FeedForward {
  Count model_dim = 768;
  Count hidden_dim = 3072;
  double weight_sparsity = 0.0;
  bool operator==(const FeedForward&) const = default;
};

struct LayerNorm {
  Count model_dim = 768;
  bool operator==(const LayerNorm&) const = default;
};

struct Dense {
  Count in_dim = 1;
  Count out_dim = 1;
  bool bias = true;
  double weight_sparsity = 0.0;
  bool operator==(const Dense&) const = default;
};

// Vocabulary lookup. With `target_stream` set the lookup switches the
// running sequence to the decoder target length and reuses the source
// table (no parameters of its own).
struct TokenEmbedding {
  Count vocab = 32000;
  Count embed_dim = 768;
  bool tied_output = true;
  bool target_stream = false;
  bool operator==(const TokenEmbedding&) const = default;
};

// Per-token projection back onto the vocabulary. Weights belong to the
// TokenEmbedding (tied or untied), so this layer owns no parameters.
struct Unembed {
  Count model_dim = 768;
  Count vocab = 32000;
  bool operator==(const Unembed&) const = default;
};

// Applied to the pooled (CLS) token only.
struct ClassifierHead {
  Count model_dim = 768;
  Count classes = 1000;
  bool operator==(const ClassifierHead&) const = default;
};

struct MoE {
  Boxed<LayerSpec> expert;
  Count num_experts = 1;
  Count experts_per_token = 1;
  Count router_dim = 768;
  friend bool operator==(const MoE&, const MoE&) = default;
};

struct Repeat {
  LayerList body;
  Count times = 1;
  bool share_params = false;
  friend bool operator==(const Repeat&, const Repeat&) = default;
};

// Branches run concurrently on the same input; outputs are summed.
struct Parallel {
  std::vector<LayerList> branches;
  friend bool operator==(const Parallel&, const Parallel&) = default;
};

using LayerVariant = std::variant<PatchEmbed, Attention, FeedForward, LayerNorm, Dense,
                                  TokenEmbedding, Unembed, ClassifierHead, MoE, Repeat, Parallel>;

struct LayerSpec {
  LayerVariant node;

  LayerSpec() = default;
  template <typename T>
    requires(!std::is_same_v<std::remove_cvref_t<T>, LayerSpec>) &&
            (!std::is_same_v<std::remove_cvref_t<T>, Boxed<LayerSpec>>) &&
            std::is_constructible_v<LayerVariant, T&&>
  LayerSpec(T&& v) : node(std::forward<T>(v)) {}  // NOLINT(google-explicit-constructor)

  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

[[nodiscard]] std::string_view layer_kind(const LayerSpec& layer);

struct ImageInput {
  Count height = 224;
  Count width = 224;
  Count channels = 3;
  bool operator==(const ImageInput&) const = default;
};

// `target_length` > 0 declares a second (decoder) stream for
// encoder-decoder models.
struct TokenInput {
  Count length = 512;
  Count vocab = 32000;
  Count target_length = 0;
  bool operator==(const TokenInput&) const = default;
};

using InputSignature = std::variant<ImageInput, TokenInput>;

struct ArchSpec {
  std::string name;
  InputSignature input = ImageInput{};
  LayerList layers;
  std::map<std::string, std::string> metadata;
  Count element_bytes = 4;

  friend bool operator==(const ArchSpec&, const ArchSpec&) = default;
};

struct Violation {
  std::string path;  // JSON-pointer style path into the spec, e.g. "/layers/1/body/0"
  std::string message;
  bool operator==(const Violation&) const = default;
};

struct ValidationResult {
  std::vector<Violation> violations;
  [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
  [[nodiscard]] std::string summary() const;
};

inline constexpr std::size_t kMaxNestingDepth = 64;

// Total: never throws on any spec value; every invariant breach becomes
// a violation with a path.
[[nodiscard]] ValidationResult validate(const ArchSpec& spec);

// Throws SpecError carrying the summary when validate() finds anything.
void require_valid(const ArchSpec& spec);

// Patches along one extent under the given boundary rule. Throws
// SpecError when the rule is kExact and `patch` does not divide `extent`.
[[nodiscard]] Count patch_grid(Count extent, Count patch, PatchBoundary boundary);

// (H/p)*(W/p) + cls for an image input.
[[nodiscard]] Count derive_sequence_length(const InputSignature& input, Count patch, bool add_cls,
                                           PatchBoundary boundary = PatchBoundary::kExact);

}  // namespace effcost
