#pragma once

#include <cstdint>

namespace effcost {

struct EnergyProfile {
  double ee_train_kwh = 0.0;
  double ee_inference_kwh = 0.0;  // per query
  double queries = 0.0;
  double co2e_kg_per_kwh = 0.0;
  bool operator==(const EnergyProfile&) const = default;
};

struct PricingProfile {
  double train_hours = 0.0;
  double num_chips = 0.0;
  double price_per_chip_hour = 0.0;
  bool operator==(const PricingProfile&) const = default;
};

// (ee_train + queries * ee_inference) * co2e_per_kwh, in kg CO2e.
// Throws std::invalid_argument on negative or non-finite fields.
[[nodiscard]] double carbon_footprint(const EnergyProfile& e);

// train_hours * num_chips * price_per_chip_hour.
[[nodiscard]] double monetary_cost(const PricingProfile& p);

// Rough training energy from power draw: watts * hours * devices / 1000.
// An estimate only; real draw varies with utilization.
[[nodiscard]] double energy_from_power(double watts_per_device, double hours, double devices);

}  // namespace effcost
