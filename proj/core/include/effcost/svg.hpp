#pragma once

#include <span>
#include <string>
#include <string_view>

#include "effcost/analysis.hpp"

namespace effcost {

// SVG 1.1 scatter of quality (y) against cost (x): one circle per record
// and a polyline through the frontier members in cost order. Output is a
// pure function of the inputs.
[[nodiscard]] std::string render_pareto_svg(std::span<const ModelRecord> records,
                                            std::span<const std::size_t> frontier,
                                            std::string_view quality_key,
                                            std::string_view cost_key);

}  // namespace effcost
