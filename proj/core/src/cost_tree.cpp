#include "effcost/cost_tree.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace effcost {
namespace {

// Elementwise op weights per element.
constexpr Count kSoftmaxOps = 5;
constexpr Count kLayerNormOps = 5;
constexpr Count kGeluOps = 4;
constexpr Count kAddOps = 1;

Count sparse_macs(Count dense, double sparsity) {
  if (sparsity <= 0.0) return dense;
  const long double kept = static_cast<long double>(dense) * (1.0L - sparsity);
  return static_cast<Count>(std::llround(kept));
}

struct Stream {
  bool raw_image = false;
  Count length = 0;  // effective (possibly padded) token count
  Count width = 0;
  Count memory_length = 0;
};

class TreeBuilder {
 public:
  TreeBuilder(const ArchSpec& spec, const CostOptions& options) : spec_(spec), opt_(options) {}

  CostNode run() {
    Stream s;
    if (const auto* img = std::get_if<ImageInput>(&spec_.input)) {
      s.raw_image = true;
      s.length = checked_mul(img->height, img->width, "pixel count");
      s.width = img->channels;
    } else {
      s.length = pad(std::get<TokenInput>(spec_.input).length);
    }
    CostNode root;
    root.kind = CostNode::Kind::kSequence;
    root.path = "/layers";
    root.children = list(spec_.layers, "/layers", s);
    return root;
  }

 private:
  Count pad(Count length) const { return round_up(length, opt_.pad_multiple); }

  std::vector<CostNode> list(const LayerList& layers, const std::string& path, Stream& s) {
    std::vector<CostNode> out;
    out.reserve(layers.size());
    for (std::size_t i = 0; i < layers.size(); ++i) {
      out.push_back(node(layers[i], fmt::format("{}/{}", path, i), s));
    }
    return out;
  }

  CostNode node(const LayerSpec& layer, const std::string& path, Stream& s) {
    if (const auto* rep = std::get_if<Repeat>(&layer.node)) {
      CostNode n;
      n.kind = CostNode::Kind::kSequence;
      n.path = path;
      n.times = rep->times;
      n.shared = rep->share_params;
      n.children = list(rep->body, path + "/body", s);
      return n;
    }
    if (const auto* par = std::get_if<Parallel>(&layer.node)) {
      CostNode n;
      n.kind = CostNode::Kind::kParallel;
      n.path = path;
      const Stream before = s;
      for (std::size_t b = 0; b < par->branches.size(); ++b) {
        Stream branch = before;
        CostNode seq;
        seq.kind = CostNode::Kind::kSequence;
        seq.path = fmt::format("{}/branches/{}", path, b);
        seq.children = list(par->branches[b], seq.path, branch);
        n.children.push_back(std::move(seq));
        s = branch;
      }
      return n;
    }
    CostNode n;
    n.kind = CostNode::Kind::kLeaf;
    n.path = path;
    n.leaf = leaf(layer, s);
    n.leaf.path = path;
    return n;
  }

  TensorShape stream_shape(const Stream& s) const {
    return TensorShape({s.length, s.width}, spec_.element_bytes);
  }

  LeafCost leaf(const LayerSpec& layer, Stream& s) {
    LeafCost c;
    c.kind = layer_kind(layer);
    std::visit([&](const auto& l) { fill(l, s, c); }, layer.node);
    c.output_elements = c.output_shape.elements();
    return c;
  }

  void fill(const PatchEmbed& l, Stream& s, LeafCost& c) {
    const auto& img = std::get<ImageInput>(spec_.input);
    const Count rows = patch_grid(img.height, l.patch, l.boundary);
    const Count cols = patch_grid(img.width, l.patch, l.boundary);
    const Count patches = checked_mul(rows, cols, "patch count");
    const Count true_len = patches + (l.add_cls_token ? 1 : 0);
    const Count d = l.embed_dim;
    const Count patch_volume = checked_product(l.patch, l.patch, l.in_channels);

    c.params = checked_mul(patch_volume, d);
    if (l.bias) c.params = checked_add(c.params, d);
    if (l.add_cls_token) c.params = checked_add(c.params, d);
    if (l.positional) c.params = checked_add(c.params, checked_mul(true_len, d));
    c.param_reads = c.params;
    c.macs = checked_product(patches, patch_volume, d);
    c.elementwise = l.bias ? checked_mul(patches, d) : 0;
    if (l.positional) c.elementwise = checked_add(c.elementwise, checked_mul(true_len, d));
    c.input_elements = checked_product(img.height, img.width, img.channels);

    s.raw_image = false;
    s.length = pad(true_len);
    s.width = d;
    c.output_shape = stream_shape(s);
  }

  void fill(const Attention& l, Stream& s, LeafCost& c) {
    const Count L = s.length;
    const Count Lk = l.cross_attention ? s.memory_length : L;
    const Count d = l.model_dim;
    const Count q = l.qkv_dim;
    c.params = checked_add(checked_product(4, d, q), checked_add(checked_mul(3, q), d));
    c.param_reads = c.params;
    // Q and output projections over L tokens, K and V over Lk, then
    // logits and weighted values over L x Lk.
    c.macs = checked_add(checked_product(2, L, d, q), checked_product(2, Lk, d, q));
    c.macs = checked_add(c.macs, checked_product(2, L, Lk, q));
    c.elementwise = checked_add(checked_mul(L, q), checked_product(2, Lk, q));
    c.elementwise = checked_add(c.elementwise, checked_product(2 * kAddOps, L, d));
    c.elementwise = checked_add(c.elementwise, checked_product(kSoftmaxOps, l.num_heads, L, Lk));
    c.input_elements = checked_mul(L, d);
    if (l.cross_attention) c.input_elements = checked_add(c.input_elements, checked_mul(Lk, d));
    c.output_shape = stream_shape(s);
  }

  void fill(const FeedForward& l, Stream& s, LeafCost& c) {
    const Count L = s.length;
    const Count d = l.model_dim;
    const Count f = l.hidden_dim;
    c.params = checked_add(checked_product(2, d, f), checked_add(f, d));
    c.param_reads = c.params;
    c.macs = sparse_macs(checked_product(2, L, d, f), l.weight_sparsity);
    // bias on both projections, GELU on the hidden units, residual add
    c.elementwise = checked_add(checked_product(kGeluOps + kAddOps, L, f),
                                checked_product(2 * kAddOps, L, d));
    c.input_elements = checked_mul(L, d);
    c.output_shape = stream_shape(s);
  }

  void fill(const LayerNorm& l, Stream& s, LeafCost& c) {
    c.params = checked_mul(2, l.model_dim);
    c.param_reads = c.params;
    c.elementwise = checked_product(kLayerNormOps, s.length, l.model_dim);
    c.input_elements = checked_mul(s.length, l.model_dim);
    c.output_shape = stream_shape(s);
  }

  void fill(const Dense& l, Stream& s, LeafCost& c) {
    const Count L = s.length;
    c.params = checked_add(checked_mul(l.in_dim, l.out_dim), l.bias ? l.out_dim : 0);
    c.param_reads = c.params;
    c.macs = sparse_macs(checked_product(L, l.in_dim, l.out_dim), l.weight_sparsity);
    c.elementwise = l.bias ? checked_mul(L, l.out_dim) : 0;
    c.input_elements = checked_mul(L, l.in_dim);
    s.width = l.out_dim;
    c.output_shape = stream_shape(s);
  }

  void fill(const TokenEmbedding& l, Stream& s, LeafCost& c) {
    const auto& tokens = std::get<TokenInput>(spec_.input);
    if (l.target_stream) {
      s.memory_length = s.length;
      s.length = pad(tokens.target_length);
    } else {
      c.params = checked_product(l.vocab, l.embed_dim, l.tied_output ? 1 : 2);
    }
    c.param_reads = checked_mul(std::min(s.length, l.vocab), l.embed_dim);
    c.input_elements = s.length;
    s.width = l.embed_dim;
    c.output_shape = stream_shape(s);
  }

  void fill(const Unembed& l, Stream& s, LeafCost& c) {
    c.param_reads = checked_mul(l.model_dim, l.vocab);
    c.macs = checked_product(s.length, l.model_dim, l.vocab);
    c.input_elements = checked_mul(s.length, l.model_dim);
    s.width = l.vocab;
    c.output_shape = stream_shape(s);
  }

  void fill(const ClassifierHead& l, Stream& s, LeafCost& c) {
    c.params = checked_add(checked_mul(l.model_dim, l.classes), l.classes);
    c.param_reads = c.params;
    c.macs = checked_mul(l.model_dim, l.classes);
    c.elementwise = l.classes;
    c.input_elements = l.model_dim;
    s.length = 1;
    s.width = l.classes;
    c.output_shape = TensorShape({l.classes}, spec_.element_bytes);
  }

  void fill(const MoE& l, Stream& s, LeafCost& c) {
    const Count L = s.length;
    const Count E = l.num_experts;
    const Count K = l.experts_per_token;
    const Count router = checked_mul(l.router_dim, E);
    const LeafCost expert = leaf(*l.expert, s);

    c.params = checked_add(router, checked_mul(E, expert.params, "moe params"));
    c.param_reads = c.params;
    c.macs = checked_add(checked_mul(L, router), checked_mul(K, expert.macs));
    c.elementwise = checked_add(checked_product(kSoftmaxOps, L, E), checked_mul(K, expert.elementwise));
    c.input_elements = checked_mul(L, l.router_dim);
    c.output_shape = expert.output_shape;
  }

  void fill(const Repeat&, Stream&, LeafCost&) {}
  void fill(const Parallel&, Stream&, LeafCost&) {}

  const ArchSpec& spec_;
  const CostOptions& opt_;
};

}  // namespace

CostNode build_cost_tree(const ArchSpec& spec, const CostOptions& options) {
  require_valid(spec);
  return TreeBuilder(spec, options).run();
}

}  // namespace effcost
