#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "effcost/archlib.hpp"
#include "effcost/archspec.hpp"
#include "effcost/footprint.hpp"
#include "effcost/indicators.hpp"
#include "effcost/latency.hpp"

namespace effcost {

inline constexpr int kSchemaVersion = 1;

// JSON encodings. Every *_from_json throws ParseError whose message names
// the offending JSON path; unknown keys are rejected.
[[nodiscard]] nlohmann::json to_json(const ArchSpec& spec);
[[nodiscard]] ArchSpec arch_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const HardwareModel& hw);
[[nodiscard]] HardwareModel hardware_from_json(const nlohmann::json& j);

[[nodiscard]] nlohmann::json to_json(const EnergyProfile& e);
[[nodiscard]] EnergyProfile energy_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const PricingProfile& p);
[[nodiscard]] PricingProfile pricing_from_json(const nlohmann::json& j);

// Canonical text: sorted keys, two-space indent, trailing newline.
// serialize -> parse -> serialize is the identity.
[[nodiscard]] std::string serialize_arch(const ArchSpec& spec);
[[nodiscard]] ArchSpec parse_arch(std::string_view text);

// A builder invocation by family name, e.g.
//   {"family": "vit", "patch": 16, "moe": {"num_experts": 8, ...}}
struct BuilderRef {
  nlohmann::json args;
  bool operator==(const BuilderRef&) const = default;
};

[[nodiscard]] ArchSpec build_from_ref(const BuilderRef& ref);

// Hardware given by preset name or inline.
using HardwareRef = std::variant<std::string, HardwareModel>;

struct SpecFile {
  int schema_version = kSchemaVersion;
  std::variant<ArchSpec, BuilderRef> arch;
  std::optional<HardwareRef> hardware;
  std::optional<Count> batch;
  std::optional<double> quality;
  std::optional<OptimizerKind> optimizer;
  std::optional<EnergyProfile> energy;
  std::optional<PricingProfile> pricing;
};

// ParseError::offset() carries the byte offset for malformed JSON.
[[nodiscard]] SpecFile parse_spec_file(std::string_view text);
[[nodiscard]] nlohmann::json to_json(const SpecFile& file);

[[nodiscard]] ArchSpec resolve_arch(const SpecFile& file);

[[nodiscard]] std::string_view to_string(PatchBoundary b);
[[nodiscard]] PatchBoundary parse_boundary(std::string_view s);

}  // namespace effcost
