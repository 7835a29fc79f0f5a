#include "effcost/latency.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "effcost/cost_tree.hpp"

namespace effcost {

void HardwareModel::check() const {
  if (!(peak_flops_per_sec > 0.0) || std::isnan(peak_flops_per_sec)) {
    throw std::invalid_argument("hardware '" + name + "': peak_flops_per_sec must be > 0");
  }
  if (!(mem_bandwidth_bytes_per_sec > 0.0)) {
    throw std::invalid_argument("hardware '" + name + "': mem_bandwidth_bytes_per_sec must be > 0");
  }
  if (!(per_op_overhead_sec >= 0.0) || std::isinf(per_op_overhead_sec)) {
    throw std::invalid_argument("hardware '" + name + "': per_op_overhead_sec must be >= 0");
  }
  if (num_devices == 0) throw std::invalid_argument("hardware '" + name + "': num_devices must be >= 1");
  if (length_pad_multiple && *length_pad_multiple == 0) {
    throw std::invalid_argument("hardware '" + name + "': length_pad_multiple must be >= 1");
  }
}

const std::vector<HardwareModel>& hardware_presets() {
  // Plausible magnitudes for a generic accelerator class; not measurements.
  static const std::vector<HardwareModel> presets{
      {"accelerator", 100e12, 900e9, 5e-6, 1, std::nullopt},
      {"tpu_like", 123e12, 900e9, 4e-6, 1, Count{128}},
      {"gpu_like", 156e12, 1555e9, 8e-6, 1, std::nullopt},
      {"cpu_like", 3e12, 200e9, 2e-6, 1, std::nullopt},
  };
  return presets;
}

const HardwareModel& default_hardware() { return hardware_presets().front(); }

std::optional<HardwareModel> find_preset(std::string_view name) {
  for (const auto& hw : hardware_presets()) {
    if (hw.name == name) return hw;
  }
  return std::nullopt;
}

namespace {

class Roofline {
 public:
  Roofline(const HardwareModel& hw, Count batch, Count element_bytes)
      : hw_(hw), batch_(static_cast<double>(batch)), eb_(static_cast<double>(element_bytes)) {}

  double time(const CostNode& node, Count multiplicity) {
    switch (node.kind) {
      case CostNode::Kind::kLeaf:
        return leaf(node.leaf, multiplicity);
      case CostNode::Kind::kSequence: {
        double t = 0.0;
        const Count m = checked_mul(multiplicity, node.times);
        for (const auto& c : node.children) t += time(c, m);
        return t * static_cast<double>(node.times);
      }
      case CostNode::Kind::kParallel: {
        double t = 0.0;
        for (const auto& c : node.children) t = std::max(t, time(c, multiplicity));
        return t;
      }
    }
    return 0.0;
  }

  std::vector<LayerTime> take_layers() { return std::move(layers_); }

 private:
  double leaf(const LeafCost& c, Count multiplicity) {
    const double flops = static_cast<double>(c.macs + c.elementwise) * batch_;
    const double bytes =
        (static_cast<double>(c.param_reads) +
         static_cast<double>(c.input_elements + c.output_elements) * batch_) * eb_;
    const double compute = flops / (hw_.peak_flops_per_sec * static_cast<double>(hw_.num_devices));
    const double memory = bytes / hw_.mem_bandwidth_bytes_per_sec;
    const double t = hw_.per_op_overhead_sec + std::max(compute, memory);
    layers_.push_back({c.path, t * static_cast<double>(multiplicity), multiplicity, memory > compute});
    return t;
  }

  const HardwareModel& hw_;
  double batch_;
  double eb_;
  std::vector<LayerTime> layers_;
};

}  // namespace

SpeedEstimate estimate_latency(const ArchSpec& spec, const HardwareModel& hw, Count batch) {
  if (batch == 0) throw std::invalid_argument("batch must be >= 1");
  hw.check();
  CostOptions opt;
  opt.pad_multiple = hw.length_pad_multiple.value_or(0);
  const CostNode tree = build_cost_tree(spec, opt);
  Roofline roofline(hw, batch, spec.element_bytes);
  SpeedEstimate est;
  est.batch = batch;
  est.latency_sec = roofline.time(tree, 1);
  est.per_layer = roofline.take_layers();
  est.throughput_examples_per_sec = static_cast<double>(batch) / est.latency_sec;
  return est;
}

SpeedEstimate throughput_from_latency(Count batch, double latency_sec,
                                      const std::optional<BubbleModel>& bubble) {
  if (batch == 0) throw std::invalid_argument("batch must be >= 1");
  if (!(latency_sec > 0.0)) throw std::invalid_argument("latency must be > 0");
  SpeedEstimate est;
  est.batch = batch;
  est.latency_sec = latency_sec;
  est.throughput_examples_per_sec = static_cast<double>(batch) / latency_sec;
  if (bubble) {
    if (bubble->steady_batches == 0 || !(bubble->setup_sec >= 0.0)) {
      throw std::invalid_argument("bubble needs setup_sec >= 0 and steady_batches >= 1");
    }
    const double busy = static_cast<double>(bubble->steady_batches) * latency_sec;
    const double scale = busy / (bubble->setup_sec + busy);
    est.throughput_examples_per_sec *= scale;
    est.pipeline_bubble_fraction = 1.0 - scale;
  }
  return est;
}

SpeedEstimate estimate_throughput(const ArchSpec& spec, const HardwareModel& hw, Count batch,
                                  const std::optional<BubbleModel>& bubble) {
  SpeedEstimate est = estimate_latency(spec, hw, batch);
  SpeedEstimate scaled = throughput_from_latency(batch, est.latency_sec, bubble);
  scaled.per_layer = std::move(est.per_layer);
  return scaled;
}

}  // namespace effcost
