#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "effcost/archspec.hpp"

namespace effcost {

// Options that change the shapes costs are computed at.
struct CostOptions {
  // Round every token-stream length up to a multiple of this (0: off).
  Count pad_multiple = 0;
};

// Per-example cost of one leaf layer, for a single execution.
struct LeafCost {
  std::string path;
  std::string_view kind;
  Count params = 0;       // owned by this layer instance
  Count param_reads = 0;  // weights fetched per execution (Unembed reads the embedding table)
  Count macs = 0;         // multiply-accumulates
  Count elementwise = 0;  // bias, residual, softmax, norm and activation ops
  Count input_elements = 0;
  Count output_elements = 0;
  TensorShape output_shape;
};

// Mirror of the spec tree with leaf costs resolved.
//  kLeaf:     one layer
//  kSequence: children in order, the whole run executed `times`; when
//             `shared` the children's parameters exist once
//  kParallel: children (each a kSequence) run concurrently
struct CostNode {
  enum class Kind { kLeaf, kSequence, kParallel };

  Kind kind = Kind::kSequence;
  std::string path;
  LeafCost leaf;
  Count times = 1;
  bool shared = false;
  std::vector<CostNode> children;
};

// Throws SpecError if the spec is invalid, OverflowError on wrap.
[[nodiscard]] CostNode build_cost_tree(const ArchSpec& spec, const CostOptions& options = {});

[[nodiscard]] inline Count round_up(Count value, Count multiple) {
  if (multiple == 0 || value % multiple == 0) return value;
  return checked_mul(value / multiple + 1, multiple, "padded length");
}

// Visits every leaf with the number of times it executes per forward pass.
template <typename Fn>
void for_each_leaf(const CostNode& node, Fn&& fn, Count multiplicity = 1) {
  switch (node.kind) {
    case CostNode::Kind::kLeaf:
      fn(node.leaf, multiplicity);
      break;
    case CostNode::Kind::kSequence: {
      const Count m = checked_mul(multiplicity, node.times, "repeat multiplicity");
      for (const auto& c : node.children) for_each_leaf(c, fn, m);
      break;
    }
    case CostNode::Kind::kParallel:
      for (const auto& c : node.children) for_each_leaf(c, fn, multiplicity);
      break;
  }
}

}  // namespace effcost
