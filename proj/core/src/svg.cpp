#include "effcost/svg.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <limits>

namespace effcost {
namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kMargin = 60.0;

std::string escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = 0.0;
  double hi = 1.0;

  [[nodiscard]] double frac(double v) const { return hi > lo ? (v - lo) / (hi - lo) : 0.5; }
};

double raw_value(const ModelRecord& r, std::string_view key) {
  if (key == "quality") return r.quality;
  return r.indicators.at(std::string(key));
}

}  // namespace

std::string render_pareto_svg(std::span<const ModelRecord> records,
                              std::span<const std::size_t> frontier, std::string_view quality_key,
                              std::string_view cost_key) {
  Axis x{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  Axis y = x;
  for (const auto& r : records) {
    const double cx = raw_value(r, cost_key);
    const double qy = raw_value(r, quality_key);
    x.lo = std::min(x.lo, cx);
    x.hi = std::max(x.hi, cx);
    y.lo = std::min(y.lo, qy);
    y.hi = std::max(y.hi, qy);
  }
  if (records.empty()) x = y = Axis{};

  const double plot_w = kWidth - 2 * kMargin;
  const double plot_h = kHeight - 2 * kMargin;
  auto px = [&](double v) { return kMargin + x.frac(v) * plot_w; };
  auto py = [&](double v) { return kHeight - kMargin - y.frac(v) * plot_h; };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{:.0f}\" height=\"{:.0f}\" "
      "viewBox=\"0 0 {:.0f} {:.0f}\">\n",
      kWidth, kHeight, kWidth, kHeight);
  out += fmt::format("<rect x=\"0\" y=\"0\" width=\"{:.0f}\" height=\"{:.0f}\" fill=\"white\"/>\n", kWidth, kHeight);
  out += fmt::format(
      "<g class=\"axes\" stroke=\"black\" stroke-width=\"1\">"
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{2:.2f}\" y2=\"{1:.2f}\"/>"
      "<line x1=\"{0:.2f}\" y1=\"{1:.2f}\" x2=\"{0:.2f}\" y2=\"{3:.2f}\"/></g>\n",
      kMargin, kHeight - kMargin, kWidth - kMargin, kMargin);
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      "font-size=\"14\">{}</text>\n",
      kWidth / 2, kHeight - 15, escape(cost_key));
  out += fmt::format(
      "<text x=\"15\" y=\"{:.2f}\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
      "transform=\"rotate(-90 15 {:.2f})\">{}</text>\n",
      kHeight / 2, kHeight / 2, escape(quality_key));
  out += fmt::format(
      "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"10\">{:g}</text>\n"
      "<text x=\"{:.2f}\" y=\"{:.2f}\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"10\">{:g}</text>\n",
      kMargin, kHeight - kMargin + 14, x.lo, kWidth - kMargin, kHeight - kMargin + 14, x.hi);

  if (!frontier.empty()) {
    std::string d;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      const auto& r = records[frontier[k]];
      d += fmt::format("{}{:.2f},{:.2f}", k == 0 ? "M" : " L", px(raw_value(r, cost_key)),
                       py(raw_value(r, quality_key)));
    }
    out += fmt::format(
        "<path class=\"frontier\" d=\"{}\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"2\"/>\n", d);
  }

  std::vector<bool> on(records.size(), false);
  for (std::size_t i : frontier) on[i] = true;
  out += "<g class=\"records\">\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    const double cx = px(raw_value(r, cost_key));
    const double cy = py(raw_value(r, quality_key));
    out += fmt::format(
        "<circle class=\"{}\" cx=\"{:.2f}\" cy=\"{:.2f}\" r=\"4\" fill=\"{}\"><title>{}</title></circle>\n",
        on[i] ? "record frontier-member" : "record", cx, cy, on[i] ? "#d62728" : "#1f77b4",
        escape(r.name));
    out += fmt::format(
        "<text x=\"{:.2f}\" y=\"{:.2f}\" font-family=\"sans-serif\" font-size=\"9\">{}</text>\n",
        cx + 5, cy - 5, escape(r.name));
  }
  out += "</g>\n</svg>\n";
  return out;
}

}  // namespace effcost
