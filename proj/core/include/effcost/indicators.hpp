#pragma once

#include <string>
#include <vector>

#include "effcost/archspec.hpp"
#include "effcost/cost_tree.hpp"

namespace effcost {

struct LayerTotal {
  std::string path;
  Count value = 0;
  bool operator==(const LayerTotal&) const = default;
};

struct ParamCount {
  Count total = 0;
  Count trainable = 0;
  std::vector<LayerTotal> by_layer;
  Count shared_savings = 0;  // parameters avoided by share_params repeats
};

// FLOPs here count one multiply-add as a single operation, the convention
// behind published ViT GFLOPs tables; two_op_flops() gives the alternative.
struct FlopCount {
  Count flops = 0;        // macs + elementwise
  Count macs = 0;
  Count elementwise = 0;
  std::vector<LayerTotal> by_layer;

  [[nodiscard]] double gflops() const { return static_cast<double>(flops) / 1e9; }
  [[nodiscard]] Count two_op_flops() const {
    return checked_add(checked_mul(2, macs), elementwise, "flops");
  }
};

enum class OptimizerKind { kSgd, kMomentum, kAdam, kSam };

// Optimizer-state multiplier on parameter bytes. SAM keeps a momentum-like
// buffer plus a transient copy of the gradient for the ascent step.
[[nodiscard]] Count optimizer_state_multiplier(OptimizerKind kind);
[[nodiscard]] std::string_view to_string(OptimizerKind kind);
[[nodiscard]] OptimizerKind parse_optimizer(std::string_view name);

struct MemoryEstimate {
  Count parameter_bytes = 0;
  Count gradient_bytes = 0;
  Count optimizer_state_bytes = 0;
  // Training: every block output kept for backward. Inference: the largest
  // single-layer output, which is all that must be live at once.
  Count activation_bytes = 0;
  Count peak_training_bytes = 0;
  Count peak_inference_bytes = 0;
};

[[nodiscard]] ParamCount count_params(const ArchSpec& spec);

[[nodiscard]] FlopCount count_flops(const ArchSpec& spec, Count batch,
                                    const CostOptions& options = {});

// Forward plus backward, the latter modeled as twice the forward pass.
[[nodiscard]] FlopCount count_training_flops(const ArchSpec& spec, Count batch,
                                             const CostOptions& options = {});

// Elements in every building-block output tensor, times batch.
[[nodiscard]] Count activation_size(const ArchSpec& spec, Count batch,
                                    const CostOptions& options = {});

// Bytes moved: weights once per batch per execution (shared weights are
// re-read each iteration) plus input reads and output writes.
[[nodiscard]] Count memory_access_cost(const ArchSpec& spec, Count batch,
                                       const CostOptions& options = {});

[[nodiscard]] MemoryEstimate training_memory(const ArchSpec& spec, Count batch,
                                             OptimizerKind optimizer,
                                             const CostOptions& options = {});

[[nodiscard]] MemoryEstimate inference_memory(const ArchSpec& spec, Count batch,
                                              const CostOptions& options = {});

}  // namespace effcost
