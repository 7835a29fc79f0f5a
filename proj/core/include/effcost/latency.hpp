#pragma once

#include <optional>
#include <string>
#include <vector>

#include "effcost/archspec.hpp"

namespace effcost {

// Parameterized device used by the roofline estimator.
struct HardwareModel {
  std::string name = "accelerator";
  double peak_flops_per_sec = 100e12;
  double mem_bandwidth_bytes_per_sec = 900e9;
  double per_op_overhead_sec = 5e-6;  // fixed dispatch cost per sequential layer
  Count num_devices = 1;
  std::optional<Count> length_pad_multiple;

  // Throws std::invalid_argument. Rates must be > 0 (bandwidth may be
  // +inf), overhead >= 0, devices >= 1, pad multiple >= 1 when set.
  void check() const;

  bool operator==(const HardwareModel&) const = default;
};

// Presets shipped with the library, also mirrored in configs/hardware/.
[[nodiscard]] const std::vector<HardwareModel>& hardware_presets();
[[nodiscard]] const HardwareModel& default_hardware();
[[nodiscard]] std::optional<HardwareModel> find_preset(std::string_view name);

struct LayerTime {
  std::string path;
  double seconds = 0.0;  // summed over all executions
  Count executions = 0;
  bool memory_bound = false;
};

struct SpeedEstimate {
  Count batch = 1;
  double latency_sec = 0.0;
  double throughput_examples_per_sec = 0.0;
  std::vector<LayerTime> per_layer;
  std::optional<double> pipeline_bubble_fraction;
};

// Idle setup time paid once per `steady_batches` back-to-back batches.
struct BubbleModel {
  double setup_sec = 0.0;
  Count steady_batches = 1;
};

// Roofline per sequential layer:
//   overhead + max(flops / (peak * devices), bytes / bandwidth)
// summed over sequence, max over Parallel branches, Repeat multiplies.
[[nodiscard]] SpeedEstimate estimate_latency(const ArchSpec& spec, const HardwareModel& hw,
                                             Count batch);

[[nodiscard]] SpeedEstimate estimate_throughput(const ArchSpec& spec, const HardwareModel& hw,
                                                Count batch,
                                                const std::optional<BubbleModel>& bubble = {});

// Throughput for a measured or estimated batch latency.
[[nodiscard]] SpeedEstimate throughput_from_latency(Count batch, double latency_sec,
                                                    const std::optional<BubbleModel>& bubble = {});

}  // namespace effcost
