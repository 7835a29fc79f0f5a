#include "effcost/report.hpp"

#include "effcost/errors.hpp"

namespace effcost {

std::map<std::string, double> CostProfile::indicators() const {
  std::map<std::string, double> m{
      {"params", static_cast<double>(params.total)},
      {"flops", static_cast<double>(flops.flops)},
      {"activation", static_cast<double>(activation_elements)},
      {"mac", static_cast<double>(memory_access_bytes)},
      {"memory", static_cast<double>(training.peak_training_bytes)},
  };
  if (speed) {
    m["latency"] = speed->latency_sec;
    m["throughput"] = speed->throughput_examples_per_sec;
  }
  if (carbon_kg) m["carbon"] = *carbon_kg;
  if (cost) m["cost"] = *cost;
  return m;
}

ModelRecord CostProfile::to_record() const {
  ModelRecord r;
  r.name = name;
  r.quality = quality.value_or(0.0);
  r.indicators = indicators();
  return r;
}

CostProfile profile(const ArchSpec& spec, const ProfileRequest& req) {
  CostProfile p;
  p.name = spec.name;
  p.batch = req.batch;
  p.element_bytes = spec.element_bytes;
  p.optimizer = req.optimizer;
  p.params = count_params(spec);
  p.flops = count_flops(spec, req.batch);
  p.activation_elements = activation_size(spec, req.batch);
  p.memory_access_bytes = memory_access_cost(spec, req.batch);
  p.training = training_memory(spec, req.batch, req.optimizer);
  p.inference = inference_memory(spec, req.batch);
  if (req.hardware) {
    p.hardware = req.hardware;
    p.speed = estimate_throughput(spec, *req.hardware, req.batch, req.bubble);
  }
  if (req.energy) p.carbon_kg = carbon_footprint(*req.energy);
  if (req.pricing) p.cost = monetary_cost(*req.pricing);
  p.quality = req.quality;
  return p;
}

namespace {

nlohmann::json memory_json(const MemoryEstimate& m) {
  return {{"parameter_bytes", m.parameter_bytes},
          {"gradient_bytes", m.gradient_bytes},
          {"optimizer_state_bytes", m.optimizer_state_bytes},
          {"activation_bytes", m.activation_bytes},
          {"peak_training_bytes", m.peak_training_bytes},
          {"peak_inference_bytes", m.peak_inference_bytes}};
}

}  // namespace

nlohmann::json to_json(const CostProfile& p) {
  nlohmann::json ind = nlohmann::json::object();
  for (const auto& [k, v] : p.indicators()) ind[k] = v;

  nlohmann::json j;
  j["name"] = p.name;
  j["batch"] = p.batch;
  j["element_bytes"] = p.element_bytes;
  j["optimizer"] = to_string(p.optimizer);
  j["indicators"] = ind;
  if (p.quality) j["quality"] = *p.quality;
  j["params"] = {{"total", p.params.total},
                 {"trainable", p.params.trainable},
                 {"shared_savings", p.params.shared_savings}};
  j["flops"] = {{"flops", p.flops.flops},
                {"macs", p.flops.macs},
                {"elementwise", p.flops.elementwise},
                {"gflops", p.flops.gflops()},
                {"two_op_flops", p.flops.two_op_flops()}};
  j["activation_elements"] = p.activation_elements;
  j["memory_access_bytes"] = p.memory_access_bytes;
  j["training_memory"] = memory_json(p.training);
  j["inference_memory"] = memory_json(p.inference);
  if (p.speed) {
    nlohmann::json s = {{"hardware", p.hardware->name},
                        {"latency_sec", p.speed->latency_sec},
                        {"throughput_examples_per_sec", p.speed->throughput_examples_per_sec}};
    if (p.speed->pipeline_bubble_fraction) s["pipeline_bubble_fraction"] = *p.speed->pipeline_bubble_fraction;
    std::size_t memory_bound = 0;
    for (const auto& l : p.speed->per_layer) memory_bound += l.memory_bound ? 1 : 0;
    s["memory_bound_layers"] = memory_bound;
    s["layers"] = p.speed->per_layer.size();
    j["speed"] = s;
  }
  if (p.carbon_kg) j["carbon_kg"] = *p.carbon_kg;
  if (p.cost) j["cost"] = *p.cost;
  return j;
}

ModelRecord record_from_profile_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("indicators") || !j["indicators"].is_object()) {
    throw ParseError("profile JSON lacks an 'indicators' object");
  }
  ModelRecord r;
  r.name = j.value("name", std::string{});
  r.quality = j.contains("quality") ? j["quality"].get<double>() : 0.0;
  for (const auto& [k, v] : j["indicators"].items()) {
    if (!v.is_number()) throw ParseError("profile indicator '" + k + "' is not a number");
    r.indicators[k] = v.get<double>();
  }
  return r;
}

}  // namespace effcost
