#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "effcost/analysis.hpp"
#include "effcost/archlib.hpp"
#include "effcost/errors.hpp"
#include "effcost/indicators.hpp"
#include "support/oracles.hpp"

using namespace effcost;

namespace {

ModelRecord rec(std::string name, double quality, std::map<std::string, double> ind) {
  return ModelRecord{std::move(name), std::nullopt, quality, std::move(ind)};
}

std::vector<ModelRecord> vit_scaling_rows() {
  // name, accuracy, params (M), GFLOPs, msec/img
  const std::vector<std::tuple<const char*, double, double, double, double>> rows{
      {"D6", 37.5, 18.89, 0.61, 0.09},   {"D8", 42.4, 22.44, 0.79, 0.11},
      {"D16", 51.5, 36.63, 1.52, 0.22},  {"D24", 55.7, 50.83, 2.25, 0.32},
      {"D32", 58.8, 65.03, 2.98, 0.43},  {"D48", 61.8, 93.42, 4.43, 0.64},
      {"W768", 34.4, 9.47, 0.31, 0.11},  {"W1024", 45.2, 24.81, 0.92, 0.16},
      {"W1536", 50.3, 42.51, 1.70, 0.22}, {"W3072", 58.3, 101.52, 4.44, 0.35},
      {"W4096", 63.3, 173.10, 7.80, 0.68}};
  std::vector<ModelRecord> out;
  for (const auto& [n, q, p, f, l] : rows) out.push_back(rec(n, q, {{"params", p}, {"flops", f}, {"latency", l}}));
  return out;
}

std::vector<std::string> names_at(const std::vector<ModelRecord>& rs, const std::vector<std::size_t>& idx) {
  std::vector<std::string> out;
  for (auto i : idx) out.push_back(rs[i].name);
  return out;
}

}  // namespace

TEST(Pareto, DominatedPointDropped) {
  std::vector<ModelRecord> rs{rec("a", 1, {{"c", 1}}), rec("b", 2, {{"c", 2}}), rec("x", 1.5, {{"c", 3}})};
  EXPECT_EQ(names_at(rs, pareto_indices(rs, "quality", "c")), (std::vector<std::string>{"a", "b"}));
}

TEST(Pareto, SingleRecordAndTies) {
  std::vector<ModelRecord> one{rec("a", 1, {{"c", 1}})};
  EXPECT_EQ(pareto_indices(one, "quality", "c").size(), 1u);
  std::vector<ModelRecord> tied{rec("a", 1, {{"c", 1}}), rec("b", 1, {{"c", 1}}), rec("c", 0.5, {{"c", 1}})};
  EXPECT_EQ(names_at(tied, pareto_indices(tied, "quality", "c")), (std::vector<std::string>{"a", "b"}));
}

TEST(Pareto, ThroughputIsHigherBetter) {
  std::vector<ModelRecord> rs{rec("slow", 2, {{"throughput", 10}}), rec("fast", 2, {{"throughput", 100}})};
  EXPECT_EQ(names_at(rs, pareto_indices(rs, "quality", "throughput")), (std::vector<std::string>{"fast"}));
}

TEST(Pareto, MissingCostNamesOffenders) {
  std::vector<ModelRecord> rs{rec("a", 1, {{"c", 1}}), rec("b", 2, {{"d", 2}}), rec("e", 2, {{"d", 2}})};
  try {
    (void)pareto_indices(rs, "quality", "c");
    FAIL();
  } catch (const CoverageError& e) {
    EXPECT_EQ(e.offenders(), (std::vector<std::string>{"b", "e"}));
  }
}

TEST(Pareto, ScalingTableEndpoints) {
  const auto rs = vit_scaling_rows();
  const auto front = names_at(rs, pareto_indices(rs, "quality", "flops"));
  EXPECT_NE(std::find(front.begin(), front.end(), "W768"), front.end());
  EXPECT_NE(std::find(front.begin(), front.end(), "W4096"), front.end());
}

TEST(Pareto, MatchesBruteForceOnRandomSets) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const auto n = std::uniform_int_distribution<int>(0, 30)(rng);
    std::uniform_int_distribution<int> small(0, 6);  // coarse values force ties
    std::vector<ModelRecord> rs;
    std::vector<double> q, c;
    for (int i = 0; i < n; ++i) {
      q.push_back(small(rng));
      c.push_back(small(rng));
      rs.push_back(rec("m" + std::to_string(i), q.back(), {{"c", c.back()}}));
    }
    auto got = pareto_indices(rs, "quality", "c");
    std::sort(got.begin(), got.end());
    EXPECT_EQ(got, oracle::brute_pareto(q, c)) << trial;
  }
}

TEST(Kendall, IdenticalAndReversed) {
  const std::vector<double> a{1, 2, 3}, rev{3, 2, 1};
  EXPECT_DOUBLE_EQ(tau_b_from_counts(kendall_counts(a, a)), 1.0);
  EXPECT_DOUBLE_EQ(tau_b_from_counts(kendall_counts(a, rev)), -1.0);
}

TEST(Kendall, DegenerateTies) {
  const std::vector<double> flat{1, 1, 1}, a{1, 2, 3};
  bool defined = true;
  EXPECT_DOUBLE_EQ(tau_b_from_counts(kendall_counts(flat, flat), &defined), 1.0);
  EXPECT_FALSE(defined);
  EXPECT_DOUBLE_EQ(tau_b_from_counts(kendall_counts(flat, a), &defined), 0.0);
  EXPECT_FALSE(defined);
  EXPECT_THROW((void)kendall_counts(a, std::span<const double>(flat).subspan(0, 2)), std::invalid_argument);
}

TEST(Kendall, MatchesPairCountingOracle) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 400; ++trial) {
    const auto n = std::uniform_int_distribution<int>(2, 60)(rng);
    std::uniform_int_distribution<int> v(0, trial % 2 == 0 ? 5 : 1000);
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) {
      a.push_back(v(rng));
      b.push_back(v(rng));
    }
    const auto c = kendall_counts(a, b);
    const auto o = oracle::brute_pairs(a, b);
    EXPECT_EQ(c.concordant, o.concordant);
    EXPECT_EQ(c.discordant, o.discordant);
    EXPECT_EQ(c.ties_a, o.tied_a);
    EXPECT_EQ(c.ties_b, o.tied_b);
    bool defined = false;
    const double tau = tau_b_from_counts(c, &defined);
    if (defined) {
      EXPECT_EQ(tau, oracle::brute_tau_b(a, b)) << trial;
    }
  }
}

TEST(RankDisagreement, DeepVersusWideInversion) {
  const auto rs = vit_scaling_rows();
  const auto d = rank_disagreement(rs, "params", "latency");
  const InvertedPair want{"D48", "W3072", "params", "latency"};
  EXPECT_NE(std::find(d.inverted_pairs.begin(), d.inverted_pairs.end(), want), d.inverted_pairs.end());
  EXPECT_EQ(d.inverted_pairs.size(), d.counts.discordant);
  EXPECT_LT(d.tau, 1.0);
}

TEST(RankDisagreement, NeedsTwoComparable) {
  std::vector<ModelRecord> rs{rec("a", 1, {{"x", 1}, {"y", 1}}), rec("b", 1, {{"x", 2}})};
  EXPECT_THROW((void)rank_disagreement(rs, "x", "y"), InsufficientDataError);
}

TEST(Matched, VitFamilyByParams) {
  std::vector<ModelRecord> rs;
  for (Count p : {8, 16, 32}) {
    const ArchSpec s = build_vit(vit_base(p));
    rs.push_back(rec(s.name, 0, {{"params", double(count_params(s).total)}, {"flops", count_flops(s, 1).gflops()}}));
  }
  const ArchSpec b64 = build_vit(vit_base(64, PatchBoundary::kCrop));
  rs.push_back(rec(b64.name, 0, {{"params", double(count_params(b64).total)}, {"flops", count_flops(b64, 1).gflops()}}));

  // 95.3M sits just over 10% above 86.6M: two overlapping groups at 10%.
  const auto at10 = matched_sets(rs, "params", 0.10);
  ASSERT_EQ(at10.size(), 2u);
  EXPECT_EQ(at10[0].names, (std::vector<std::string>{"ViT-B/16", "ViT-B/8", "ViT-B/32"}));
  EXPECT_EQ(at10[1].names, (std::vector<std::string>{"ViT-B/32", "ViT-B/64"}));
  const auto at11 = matched_sets(rs, "params", 0.11);
  ASSERT_EQ(at11.size(), 1u);
  EXPECT_EQ(at11[0].names.size(), 4u);
  EXPECT_TRUE(matched_sets(rs, "flops", 0.10).empty());
}

TEST(Matched, EdgeCases) {
  EXPECT_TRUE(matched_sets({}, "params", 0.1).empty());
  std::vector<ModelRecord> rs{rec("a", 0, {{"p", 1}})};
  EXPECT_THROW((void)matched_sets(rs, "p", 0.0), std::invalid_argument);
  EXPECT_THROW((void)matched_sets(rs, "p", 1.0), std::invalid_argument);
}

TEST(Misnomer, ClearLeaderHasNoInstability) {
  std::vector<ModelRecord> rs{rec("best", 9, {{"params", 1}, {"flops", 1}, {"latency", 1}}),
                              rec("mid", 5, {{"params", 2}, {"flops", 2}, {"latency", 2}}),
                              rec("worst", 1, {{"params", 3}, {"flops", 3}, {"latency", 3}})};
  const auto r = misnomer_report(rs);
  EXPECT_EQ(r.method, "kendall_tau_b");
  EXPECT_EQ(r.indicator_pairs_examined(), 3u);
  for (const auto& p : r.pairs) EXPECT_DOUBLE_EQ(p.tau, 1.0);
  EXPECT_EQ(r.inversion_count(), 0u);
  EXPECT_TRUE(r.pareto_instability.empty());
  EXPECT_TRUE(r.coverage_warnings.empty());
}

TEST(Misnomer, SparseModelFlaggedAgainstSharedModel) {
  const VitConfig base = vit_base(16);
  const ArchSpec t = build_vit(base);
  const ArchSpec ut = build_universal_transformer(base, 2 * base.depth);
  const ArchSpec moe = build_moe_transformer(base, MoeConfig{8, 1, 2});
  auto as_record = [](const ArchSpec& s, const char* name, double q) {
    return rec(name, q, {{"params", double(count_params(s).total)}, {"flops", double(count_flops(s, 1).flops)}});
  };
  std::vector<ModelRecord> rs{as_record(t, "transformer", 70), as_record(ut, "universal", 75),
                              as_record(moe, "switch", 74)};
  const auto r = misnomer_report(rs);
  const auto it = std::find_if(r.pareto_instability.begin(), r.pareto_instability.end(),
                               [](const auto& s) { return s.model == "switch"; });
  ASSERT_NE(it, r.pareto_instability.end());
  EXPECT_EQ(it->frontier_under, (std::vector<std::string>{"flops"}));
  EXPECT_EQ(it->dominated_under, (std::vector<std::string>{"params"}));
  EXPECT_GT(r.inversion_count(), 0u);
}

TEST(Misnomer, CoverageWarningForMissingIndicator) {
  std::vector<ModelRecord> rs{rec("a", 1, {{"params", 1}, {"latency", 1}}), rec("b", 2, {{"params", 2}}),
                              rec("c", 3, {{"params", 3}, {"latency", 2}})};
  const auto r = misnomer_report(rs);
  ASSERT_EQ(r.coverage_warnings.size(), 1u);
  EXPECT_EQ(r.coverage_warnings[0], (CoverageWarning{"b", "latency"}));
  EXPECT_THROW((void)misnomer_report(std::vector<ModelRecord>{rs[0]}), InsufficientDataError);
}

TEST(Records, CheckRejectsNonFinite) {
  EXPECT_THROW(check_record(rec("a", std::nan(""), {{"p", 1}})), std::invalid_argument);
  EXPECT_THROW(check_record(rec("a", 1, {})), std::invalid_argument);
  EXPECT_NO_THROW(check_record(rec("a", 1, {{"p", 1}})));
}
