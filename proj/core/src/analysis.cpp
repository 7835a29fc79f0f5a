#include "effcost/analysis.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

#include "effcost/errors.hpp"

namespace effcost {

bool is_higher_better(std::string_view indicator) { return indicator == "throughput"; }

void check_record(const ModelRecord& record) {
  if (!std::isfinite(record.quality)) {
    throw std::invalid_argument(fmt::format("record '{}': quality is not finite", record.name));
  }
  if (record.indicators.empty()) {
    throw std::invalid_argument(fmt::format("record '{}': no indicators", record.name));
  }
  for (const auto& [key, value] : record.indicators) {
    if (!std::isfinite(value)) {
      throw std::invalid_argument(
          fmt::format("record '{}': indicator '{}' is not finite", record.name, key));
    }
  }
}

std::optional<double> oriented_cost(const ModelRecord& record, std::string_view indicator) {
  const auto it = record.indicators.find(std::string(indicator));
  if (it == record.indicators.end()) return std::nullopt;
  return is_higher_better(indicator) ? -it->second : it->second;
}

namespace {

std::optional<double> quality_of(const ModelRecord& r, std::string_view key) {
  if (key == "quality") return r.quality;
  const auto it = r.indicators.find(std::string(key));
  if (it == r.indicators.end()) return std::nullopt;
  return it->second;
}

Count tied_pairs(Count run) { return run * (run - 1) / 2; }

// Counts inversions (strictly greater element before smaller) while
// sorting `v` in place.
Count merge_count(std::vector<double>& v, std::vector<double>& scratch, std::size_t lo,
                  std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  Count swaps = merge_count(v, scratch, lo, mid) + merge_count(v, scratch, mid, hi);
  std::size_t i = lo, j = mid, k = lo;
  while (i < mid && j < hi) {
    if (v[j] < v[i]) {
      swaps += mid - i;
      scratch[k++] = v[j++];
    } else {
      scratch[k++] = v[i++];
    }
  }
  while (i < mid) scratch[k++] = v[i++];
  while (j < hi) scratch[k++] = v[j++];
  std::copy(scratch.begin() + static_cast<std::ptrdiff_t>(lo),
            scratch.begin() + static_cast<std::ptrdiff_t>(hi),
            v.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

std::vector<std::size_t> pareto_indices(std::span<const ModelRecord> records,
                                        std::string_view quality_key, std::string_view cost_key) {
  std::vector<std::string> offenders;
  std::vector<double> cost(records.size()), quality(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto c = oriented_cost(records[i], cost_key);
    const auto q = quality_of(records[i], quality_key);
    if (!c || !q) {
      offenders.push_back(records[i].name);
      continue;
    }
    cost[i] = *c;
    quality[i] = *q;
  }
  if (!offenders.empty()) {
    throw CoverageError(fmt::format("{} record(s) lack '{}' or '{}': {}", offenders.size(),
                                    cost_key, quality_key, fmt::join(offenders, ", ")),
                        offenders);
  }

  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });

  // Sweep equal-cost groups. Within a group only the best quality can
  // survive, and only if it beats everything strictly cheaper.
  std::vector<std::size_t> kept;
  double best_cheaper = -std::numeric_limits<double>::infinity();
  for (std::size_t g = 0; g < order.size();) {
    std::size_t end = g;
    double group_best = -std::numeric_limits<double>::infinity();
    while (end < order.size() && cost[order[end]] == cost[order[g]]) {
      group_best = std::max(group_best, quality[order[end]]);
      ++end;
    }
    if (group_best > best_cheaper) {
      for (std::size_t k = g; k < end; ++k) {
        if (quality[order[k]] == group_best) kept.push_back(order[k]);
      }
    }
    best_cheaper = std::max(best_cheaper, group_best);
    g = end;
  }
  return kept;
}

std::vector<ModelRecord> pareto_frontier(std::span<const ModelRecord> records,
                                         std::string_view quality_key, std::string_view cost_key) {
  std::vector<ModelRecord> out;
  for (std::size_t i : pareto_indices(records, quality_key, cost_key)) out.push_back(records[i]);
  return out;
}

double tau_b_from_counts(const TauCounts& c, bool* defined) {
  const Count left = c.pairs - c.ties_a;
  const Count right = c.pairs - c.ties_b;
  if (left == 0 || right == 0) {
    // Both rankings entirely tied order the models identically.
    if (defined != nullptr) *defined = false;
    return left == 0 && right == 0 && c.pairs > 0 ? 1.0 : 0.0;
  }
  if (defined != nullptr) *defined = true;
  const auto diff = static_cast<std::int64_t>(c.concordant) - static_cast<std::int64_t>(c.discordant);
  return static_cast<double>(diff) /
         std::sqrt(static_cast<double>(left) * static_cast<double>(right));
}

TauCounts kendall_counts(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("kendall: rankings differ in length");
  const std::size_t n = a.size();
  TauCounts c;
  c.n = n;
  c.pairs = n < 2 ? 0 : tied_pairs(n);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    return a[i] < a[j] || (a[i] == a[j] && b[i] < b[j]);
  });

  for (std::size_t i = 0; i < n;) {
    std::size_t run_a = i;
    while (run_a < n && a[order[run_a]] == a[order[i]]) ++run_a;
    c.ties_a += tied_pairs(run_a - i);
    for (std::size_t k = i; k < run_a;) {
      std::size_t run_ab = k;
      while (run_ab < run_a && b[order[run_ab]] == b[order[k]]) ++run_ab;
      c.ties_both += tied_pairs(run_ab - k);
      k = run_ab;
    }
    i = run_a;
  }

  std::vector<double> ys(n), scratch(n);
  for (std::size_t i = 0; i < n; ++i) ys[i] = b[order[i]];
  c.discordant = merge_count(ys, scratch, 0, n);

  for (std::size_t i = 0; i < n;) {
    std::size_t run = i;
    while (run < n && ys[run] == ys[i]) ++run;
    c.ties_b += tied_pairs(run - i);
    i = run;
  }
  c.concordant = c.pairs - c.ties_a - c.ties_b + c.ties_both - c.discordant;
  return c;
}

RankDisagreement rank_disagreement(std::span<const ModelRecord> records,
                                   std::string_view indicator_a, std::string_view indicator_b) {
  std::vector<const ModelRecord*> rows;
  std::vector<double> xs, ys;
  for (const auto& r : records) {
    const auto x = oriented_cost(r, indicator_a);
    const auto y = oriented_cost(r, indicator_b);
    if (x && y) {
      rows.push_back(&r);
      xs.push_back(*x);
      ys.push_back(*y);
    }
  }
  if (rows.size() < 2) {
    throw InsufficientDataError(fmt::format("need >= 2 records carrying both '{}' and '{}', have {}",
                                            indicator_a, indicator_b, rows.size()));
  }

  RankDisagreement out;
  out.indicator_a = std::string(indicator_a);
  out.indicator_b = std::string(indicator_b);
  out.counts = kendall_counts(xs, ys);
  out.tau = tau_b_from_counts(out.counts, &out.defined);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = i + 1; j < rows.size(); ++j) {
      const bool inverted = (xs[i] < xs[j] && ys[i] > ys[j]) || (xs[i] > xs[j] && ys[i] < ys[j]);
      if (inverted) {
        out.inverted_pairs.push_back({rows[i]->name, rows[j]->name, out.indicator_a, out.indicator_b});
      }
    }
  }
  return out;
}

std::vector<MatchedGroup> matched_sets(std::span<const ModelRecord> records,
                                       std::string_view indicator, double rel_tolerance) {
  if (!(rel_tolerance > 0.0 && rel_tolerance < 1.0)) {
    throw std::invalid_argument("rel_tolerance must lie in (0, 1)");
  }
  std::vector<std::pair<double, const ModelRecord*>> rows;
  for (const auto& r : records) {
    const auto it = r.indicators.find(std::string(indicator));
    if (it != r.indicators.end()) rows.emplace_back(it->second, &r);
  }
  std::stable_sort(rows.begin(), rows.end(),
                   [](const auto& x, const auto& y) { return x.first < y.first; });

  std::vector<MatchedGroup> groups;
  std::size_t furthest = 0;  // one past the end of the widest window so far
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const double lo = rows[i].first;
    std::size_t end = i + 1;
    while (end < rows.size() && rows[end].first - lo <= rel_tolerance * std::abs(lo)) ++end;
    if (end <= furthest) continue;  // contained in an earlier window
    furthest = end;
    if (end - i < 2) continue;
    MatchedGroup g;
    g.min_value = lo;
    g.max_value = rows[end - 1].first;
    for (std::size_t k = i; k < end; ++k) g.names.push_back(rows[k].second->name);
    groups.push_back(std::move(g));
  }
  return groups;
}

std::size_t MisnomerReport::inversion_count() const {
  std::size_t n = 0;
  for (const auto& p : pairs) n += p.inverted_pairs.size();
  return n;
}

MisnomerReport misnomer_report(std::span<const ModelRecord> records) {
  if (records.size() < 2) {
    throw InsufficientDataError(fmt::format("misnomer report needs >= 2 records, have {}", records.size()));
  }
  MisnomerReport report;
  std::set<std::string> keys;
  for (const auto& r : records) {
    for (const auto& [k, v] : r.indicators) keys.insert(k);
  }
  report.indicators.assign(keys.begin(), keys.end());

  for (const auto& r : records) {
    for (const auto& k : report.indicators) {
      if (!r.indicators.contains(k)) report.coverage_warnings.push_back({r.name, k});
    }
  }

  for (std::size_t i = 0; i < report.indicators.size(); ++i) {
    for (std::size_t j = i + 1; j < report.indicators.size(); ++j) {
      try {
        report.pairs.push_back(rank_disagreement(records, report.indicators[i], report.indicators[j]));
      } catch (const InsufficientDataError&) {
        report.skipped_pairs.emplace_back(report.indicators[i], report.indicators[j]);
      }
    }
  }

  std::map<std::string, ParetoInstability> per_model;
  for (const auto& key : report.indicators) {
    std::vector<ModelRecord> subset;
    for (const auto& r : records) {
      if (r.indicators.contains(key)) subset.push_back(r);
    }
    FrontierSummary summary;
    summary.indicator = key;
    const auto kept = pareto_indices(subset, "quality", key);
    std::vector<bool> on(subset.size(), false);
    for (std::size_t i : kept) {
      on[i] = true;
      summary.frontier.push_back(subset[i].name);
      per_model[subset[i].name].frontier_under.push_back(key);
    }
    for (std::size_t i = 0; i < subset.size(); ++i) {
      if (!on[i]) {
        summary.dominated.push_back(subset[i].name);
        per_model[subset[i].name].dominated_under.push_back(key);
      }
    }
    report.frontiers.push_back(std::move(summary));
  }
  // Report in input order.
  for (const auto& r : records) {
    auto it = per_model.find(r.name);
    if (it == per_model.end()) continue;
    if (!it->second.frontier_under.empty() && !it->second.dominated_under.empty()) {
      it->second.model = r.name;
      report.pareto_instability.push_back(std::move(it->second));
    }
    per_model.erase(it);
  }
  return report;
}

}  // namespace effcost
