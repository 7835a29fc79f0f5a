#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "effcost/checked.hpp"

namespace effcost {

// One model as seen by the cross-model analyses. Indicator values are
// lower-is-better except those is_higher_better() reports (throughput),
// which are negated internally.
struct ModelRecord {
  std::string name;
  std::optional<std::string> family;
  double quality = 0.0;
  std::map<std::string, double> indicators;

  bool operator==(const ModelRecord&) const = default;
};

[[nodiscard]] bool is_higher_better(std::string_view indicator);

// Throws std::invalid_argument: non-finite quality or indicator, or no
// indicators at all.
void check_record(const ModelRecord& record);

// Value on the "lower is better" axis, or nullopt when absent.
[[nodiscard]] std::optional<double> oriented_cost(const ModelRecord& record,
                                                  std::string_view indicator);

// Records not strictly dominated in (quality up, cost down). Ties in both
// coordinates are all kept. Result is ordered by cost ascending, ties in
// input order. `quality_key` is "quality" or an indicator name.
// Throws CoverageError naming every record missing a key.
[[nodiscard]] std::vector<std::size_t> pareto_indices(std::span<const ModelRecord> records,
                                                      std::string_view quality_key,
                                                      std::string_view cost_key);
[[nodiscard]] std::vector<ModelRecord> pareto_frontier(std::span<const ModelRecord> records,
                                                       std::string_view quality_key,
                                                       std::string_view cost_key);

struct InvertedPair {
  std::string model_a;
  std::string model_b;
  std::string indicator_1;
  std::string indicator_2;
  bool operator==(const InvertedPair&) const = default;
};

// Pair counts behind a tau-b value.
struct TauCounts {
  Count n = 0;
  Count pairs = 0;
  Count concordant = 0;
  Count discordant = 0;
  Count ties_a = 0;     // pairs tied in the first ranking (including joint ties)
  Count ties_b = 0;     // pairs tied in the second
  Count ties_both = 0;  // pairs tied in both
};

// tau-b from pair counts. Degenerate cases set `defined` false: both
// rankings entirely tied gives 1, only one of them tied gives 0.
[[nodiscard]] double tau_b_from_counts(const TauCounts& counts, bool* defined = nullptr);

// Kendall tau-b in O(n log n) (Knight's merge-sort method).
[[nodiscard]] TauCounts kendall_counts(std::span<const double> a, std::span<const double> b);

struct RankDisagreement {
  std::string indicator_a;
  std::string indicator_b;
  double tau = 0.0;
  bool defined = true;
  TauCounts counts;
  std::vector<InvertedPair> inverted_pairs;
};

// Kendall tau-b between two cost orderings over the records carrying both
// indicators, plus every discordant pair (model order follows input order).
// Throws InsufficientDataError with fewer than two comparable records.
[[nodiscard]] RankDisagreement rank_disagreement(std::span<const ModelRecord> records,
                                                 std::string_view indicator_a,
                                                 std::string_view indicator_b);

struct MatchedGroup {
  std::vector<std::string> names;
  double min_value = 0.0;
  double max_value = 0.0;
};

// Maximal groups (size >= 2) whose raw indicator values all lie within
// rel_tolerance of the group minimum. Records lacking the indicator are
// skipped. Throws std::invalid_argument unless 0 < rel_tolerance < 1.
[[nodiscard]] std::vector<MatchedGroup> matched_sets(std::span<const ModelRecord> records,
                                                     std::string_view indicator,
                                                     double rel_tolerance);

struct FrontierSummary {
  std::string indicator;
  std::vector<std::string> frontier;
  std::vector<std::string> dominated;
};

struct ParetoInstability {
  std::string model;
  std::vector<std::string> frontier_under;
  std::vector<std::string> dominated_under;
};

struct CoverageWarning {
  std::string model;
  std::string indicator;
  bool operator==(const CoverageWarning&) const = default;
};

struct MisnomerReport {
  std::string method = "kendall_tau_b";
  std::vector<std::string> indicators;
  std::vector<RankDisagreement> pairs;
  std::vector<std::pair<std::string, std::string>> skipped_pairs;  // < 2 comparable records
  std::vector<FrontierSummary> frontiers;
  std::vector<ParetoInstability> pareto_instability;
  std::vector<CoverageWarning> coverage_warnings;

  [[nodiscard]] std::size_t indicator_pairs_examined() const { return pairs.size(); }
  [[nodiscard]] std::size_t inversion_count() const;
};

// Throws InsufficientDataError with fewer than two records.
[[nodiscard]] MisnomerReport misnomer_report(std::span<const ModelRecord> records);

}  // namespace effcost
