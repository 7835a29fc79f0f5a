#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>

#include "effcost/analysis.hpp"
#include "effcost/footprint.hpp"
#include "effcost/indicators.hpp"
#include "effcost/latency.hpp"

namespace effcost {

struct ProfileRequest {
  Count batch = 1;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  std::optional<HardwareModel> hardware;
  std::optional<BubbleModel> bubble;
  std::optional<EnergyProfile> energy;
  std::optional<PricingProfile> pricing;
  std::optional<double> quality;
};

// Every indicator the request permits for one architecture. Analytical
// indicators use unpadded shapes; the speed estimate applies the
// hardware's length padding.
struct CostProfile {
  std::string name;
  Count batch = 1;
  Count element_bytes = 4;
  OptimizerKind optimizer = OptimizerKind::kAdam;
  ParamCount params;
  FlopCount flops;
  Count activation_elements = 0;
  Count memory_access_bytes = 0;
  MemoryEstimate training;
  MemoryEstimate inference;
  std::optional<HardwareModel> hardware;
  std::optional<SpeedEstimate> speed;
  std::optional<double> carbon_kg;
  std::optional<double> cost;
  std::optional<double> quality;

  // Indicator-id -> value, the same map a ModelRecord carries.
  [[nodiscard]] std::map<std::string, double> indicators() const;
  [[nodiscard]] ModelRecord to_record() const;
};

[[nodiscard]] CostProfile profile(const ArchSpec& spec, const ProfileRequest& request);

[[nodiscard]] nlohmann::json to_json(const CostProfile& p);

// Inverse of the "indicators" part of to_json(CostProfile).
[[nodiscard]] ModelRecord record_from_profile_json(const nlohmann::json& j);

}  // namespace effcost
