#include "effcost/footprint.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace effcost {
namespace {

void non_negative(double v, const char* field) {
  if (!std::isfinite(v) || v < 0.0) {
    throw std::invalid_argument(std::string(field) + " must be finite and >= 0");
  }
}

}  // namespace

double carbon_footprint(const EnergyProfile& e) {
  non_negative(e.ee_train_kwh, "ee_train_kwh");
  non_negative(e.ee_inference_kwh, "ee_inference_kwh");
  non_negative(e.queries, "queries");
  non_negative(e.co2e_kg_per_kwh, "co2e_kg_per_kwh");
  return (e.ee_train_kwh + e.queries * e.ee_inference_kwh) * e.co2e_kg_per_kwh;
}

double monetary_cost(const PricingProfile& p) {
  non_negative(p.train_hours, "train_hours");
  non_negative(p.num_chips, "num_chips");
  non_negative(p.price_per_chip_hour, "price_per_chip_hour");
  return p.train_hours * p.num_chips * p.price_per_chip_hour;
}

double energy_from_power(double watts_per_device, double hours, double devices) {
  non_negative(watts_per_device, "watts_per_device");
  non_negative(hours, "hours");
  non_negative(devices, "devices");
  return watts_per_device * hours * devices / 1000.0;
}

}  // namespace effcost
