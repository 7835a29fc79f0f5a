#include "effcost/indicators.hpp"

#include <algorithm>
#include <stdexcept>

namespace effcost {
namespace {

void require_batch(Count batch) {
  if (batch == 0) throw std::invalid_argument("batch must be >= 1");
}

void sum_params(const CostNode& node, Count copies, ParamCount& out) {
  switch (node.kind) {
    case CostNode::Kind::kLeaf: {
      const Count n = checked_mul(node.leaf.params, copies, "parameter count");
      out.total = checked_add(out.total, n, "parameter count");
      out.by_layer.push_back({node.path, n});
      break;
    }
    case CostNode::Kind::kSequence: {
      const Count child_copies = node.shared ? copies : checked_mul(copies, node.times);
      const Count before = out.total;
      for (const auto& c : node.children) sum_params(c, child_copies, out);
      if (node.shared && node.times > 1) {
        const Count body = out.total - before;
        out.shared_savings =
            checked_add(out.shared_savings, checked_mul(body, node.times - 1), "shared savings");
      }
      break;
    }
    case CostNode::Kind::kParallel:
      for (const auto& c : node.children) sum_params(c, copies, out);
      break;
  }
}

Count largest_output(const CostNode& tree) {
  Count best = 0;
  for_each_leaf(tree, [&](const LeafCost& leaf, Count) {
    best = std::max(best, leaf.output_elements);
  });
  return best;
}

}  // namespace

Count optimizer_state_multiplier(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd: return 0;
    case OptimizerKind::kMomentum: return 1;
    case OptimizerKind::kAdam: return 2;
    case OptimizerKind::kSam: return 2;
  }
  return 0;
}

std::string_view to_string(OptimizerKind kind) {
  switch (kind) {
    case OptimizerKind::kSgd: return "sgd";
    case OptimizerKind::kMomentum: return "momentum";
    case OptimizerKind::kAdam: return "adam";
    case OptimizerKind::kSam: return "sam";
  }
  return "sgd";
}

OptimizerKind parse_optimizer(std::string_view name) {
  if (name == "sgd") return OptimizerKind::kSgd;
  if (name == "momentum") return OptimizerKind::kMomentum;
  if (name == "adam") return OptimizerKind::kAdam;
  if (name == "sam") return OptimizerKind::kSam;
  throw std::invalid_argument("unknown optimizer '" + std::string(name) +
                              "' (expected sgd, momentum, adam or sam)");
}

ParamCount count_params(const ArchSpec& spec) {
  const CostNode tree = build_cost_tree(spec);
  ParamCount out;
  sum_params(tree, 1, out);
  out.trainable = out.total;
  return out;
}

FlopCount count_flops(const ArchSpec& spec, Count batch, const CostOptions& options) {
  require_batch(batch);
  const CostNode tree = build_cost_tree(spec, options);
  FlopCount out;
  for_each_leaf(tree, [&](const LeafCost& leaf, Count times) {
    const Count runs = checked_mul(times, batch, "flop count");
    const Count macs = checked_mul(leaf.macs, runs, "flop count");
    const Count ew = checked_mul(leaf.elementwise, runs, "flop count");
    out.macs = checked_add(out.macs, macs, "flop count");
    out.elementwise = checked_add(out.elementwise, ew, "flop count");
    out.by_layer.push_back({leaf.path, checked_add(macs, ew, "flop count")});
  });
  out.flops = checked_add(out.macs, out.elementwise, "flop count");
  return out;
}

FlopCount count_training_flops(const ArchSpec& spec, Count batch, const CostOptions& options) {
  FlopCount out = count_flops(spec, batch, options);
  out.macs = checked_mul(out.macs, 3, "flop count");
  out.elementwise = checked_mul(out.elementwise, 3, "flop count");
  out.flops = checked_add(out.macs, out.elementwise, "flop count");
  for (auto& l : out.by_layer) l.value = checked_mul(l.value, 3, "flop count");
  return out;
}

Count activation_size(const ArchSpec& spec, Count batch, const CostOptions& options) {
  require_batch(batch);
  const CostNode tree = build_cost_tree(spec, options);
  Count total = 0;
  for_each_leaf(tree, [&](const LeafCost& leaf, Count times) {
    total = checked_add(total, checked_product(leaf.output_elements, times, batch), "activation size");
  });
  return total;
}

Count memory_access_cost(const ArchSpec& spec, Count batch, const CostOptions& options) {
  require_batch(batch);
  const CostNode tree = build_cost_tree(spec, options);
  const Count eb = spec.element_bytes;
  Count total = 0;
  for_each_leaf(tree, [&](const LeafCost& leaf, Count times) {
    const Count io = checked_mul(checked_add(leaf.input_elements, leaf.output_elements), batch);
    const Count per_run = checked_mul(checked_add(leaf.param_reads, io), eb, "memory access cost");
    total = checked_add(total, checked_mul(per_run, times), "memory access cost");
  });
  return total;
}

MemoryEstimate training_memory(const ArchSpec& spec, Count batch, OptimizerKind optimizer,
                               const CostOptions& options) {
  require_batch(batch);
  const ParamCount params = count_params(spec);
  const Count eb = spec.element_bytes;
  MemoryEstimate m;
  m.parameter_bytes = checked_mul(params.total, eb, "parameter bytes");
  m.gradient_bytes = checked_mul(params.trainable, eb, "gradient bytes");
  m.optimizer_state_bytes =
      checked_mul(optimizer_state_multiplier(optimizer), m.parameter_bytes, "optimizer state");
  m.activation_bytes = checked_mul(activation_size(spec, batch, options), eb, "activation bytes");
  m.peak_training_bytes = checked_add(
      checked_add(m.parameter_bytes, m.gradient_bytes),
      checked_add(m.optimizer_state_bytes, m.activation_bytes), "peak training bytes");
  const Count working =
      checked_product(largest_output(build_cost_tree(spec, options)), batch, eb);
  m.peak_inference_bytes = checked_add(m.parameter_bytes, working, "peak inference bytes");
  return m;
}

MemoryEstimate inference_memory(const ArchSpec& spec, Count batch, const CostOptions& options) {
  require_batch(batch);
  const ParamCount params = count_params(spec);
  const Count eb = spec.element_bytes;
  MemoryEstimate m;
  m.parameter_bytes = checked_mul(params.total, eb, "parameter bytes");
  m.activation_bytes =
      checked_product(largest_output(build_cost_tree(spec, options)), batch, eb);
  m.peak_inference_bytes = checked_add(m.parameter_bytes, m.activation_bytes, "peak inference bytes");
  m.peak_training_bytes = m.peak_inference_bytes;
  return m;
}

}  // namespace effcost
