#include <gtest/gtest.h>

#include <limits>
#include <random>

#include "dsikit/evaluation.hpp"

using namespace dsikit;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ScoreRow row(const std::string& name, std::vector<double> scores) {
  auto d = find_index(name);
  return ScoreRow{*d, std::move(scores), {}};
}

const ScoreRow& wine_ari() {
  static const auto r = row("ARI", {0.913, 0.757, 0.880, 0.790, 0.897});
  return r;
}

}  // namespace

TEST(Quantize, WorkedExample) {
  EXPECT_EQ(quantize_to_ranks(std::vector<double>{9, 8, 6, 2, 1}, Direction::max_optimal),
            (RankVector{1, 1, 2, 4, 4}));
}

TEST(Quantize, CloseScoresAcrossBoundary) {
  EXPECT_EQ(quantize_to_ranks(std::vector<double>{9, 7.1, 6.9, 2, 1}, Direction::max_optimal),
            (RankVector{1, 1, 2, 4, 4}));
}

TEST(Quantize, BoundaryBelongsToLowerInterval) {
  // width 2: 7 sits on the boundary between (7,9] and (5,7]
  EXPECT_EQ(quantize_to_ranks(std::vector<double>{9, 7, 5, 3, 1}, Direction::max_optimal),
            (RankVector{1, 2, 3, 4, 4}));
}

TEST(Quantize, WineRows) {
  EXPECT_EQ(quantize_to_ranks(wine_ari().scores, Direction::max_optimal), (RankVector{1, 4, 1, 4, 1}));
  EXPECT_EQ(quantize_to_ranks(std::vector<double>{1.388, 1.390, 1.391, 1.419, 1.389}, Direction::min_optimal),
            (RankVector{1, 1, 1, 4, 1}));
}

TEST(Quantize, ConstantAndErrors) {
  EXPECT_EQ(quantize_to_ranks(std::vector<double>{3, 3, 3}, Direction::min_optimal), (RankVector{1, 1, 1}));
  EXPECT_THROW((void)quantize_to_ranks(std::vector<double>{1}, Direction::max_optimal), DomainError);
  EXPECT_THROW((void)quantize_to_ranks(std::vector<double>{1, kInf}, Direction::max_optimal), DomainError);
}

TEST(Quantize, PropertiesOnRandomRows) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5, 5);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 2 + rng() % 9;
    std::vector<double> s(n);
    for (auto& x : s) x = u(rng);
    for (auto dir : {Direction::max_optimal, Direction::min_optimal}) {
      const auto r = quantize_to_ranks(s, dir);
      const auto best = dir == Direction::max_optimal ? std::max_element(s.begin(), s.end())
                                                      : std::min_element(s.begin(), s.end());
      const auto worst = dir == Direction::max_optimal ? std::min_element(s.begin(), s.end())
                                                       : std::max_element(s.begin(), s.end());
      EXPECT_EQ(r[static_cast<std::size_t>(best - s.begin())], 1);
      EXPECT_EQ(r[static_cast<std::size_t>(worst - s.begin())], static_cast<int>(n) - 1);
      for (int v : r) {
        EXPECT_GE(v, 1);
        EXPECT_LE(v, static_cast<int>(n) - 1);
      }
    }
  }
}

TEST(Quantize, AffineInvarianceAwayFromBoundaries) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = 3 + rng() % 6;
    std::vector<double> s(n);
    for (auto& x : s) x = u(rng);
    // skip rows with a score within 1e-6 of an interval boundary
    const auto [lo, hi] = std::minmax_element(s.begin(), s.end());
    const double w = (*hi - *lo) / static_cast<double>(n - 1);
    bool near = false;
    for (double x : s) {
      const double pos = (*hi - x) / w;
      if (x != *hi && x != *lo && std::abs(pos - std::round(pos)) < 1e-6) near = true;
    }
    if (near) continue;
    const double alpha = 0.01 + 100 * u(rng);
    const double beta = -50 + 100 * u(rng);
    std::vector<double> t(s);
    for (auto& x : t) x = alpha * x + beta;
    EXPECT_EQ(quantize_to_ranks(s, Direction::max_optimal), quantize_to_ranks(t, Direction::max_optimal));
    ++checked;
  }
  EXPECT_GT(checked, 400);
}

TEST(RankDifference, Examples) {
  EXPECT_EQ(rank_difference(RankVector{4, 1, 4, 1, 2}, RankVector{1, 3, 2, 4, 4}), 12);
  EXPECT_EQ(rank_difference(RankVector{2, 1, 3}, RankVector{2, 1, 3}), 0);
  EXPECT_EQ(rank_difference(RankVector(5, 1), RankVector(5, 4)), 15);
  EXPECT_THROW((void)rank_difference(RankVector{1}, RankVector{1, 1}), DomainError);
}

TEST(RankDifference, SymmetricAndBounded) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 2 + static_cast<int>(rng() % 9);
    std::uniform_int_distribution<int> r(1, n - 1);
    RankVector a(static_cast<std::size_t>(n)), b(static_cast<std::size_t>(n));
    for (auto& x : a) x = r(rng);
    for (auto& x : b) x = r(rng);
    const int d = rank_difference(a, b);
    EXPECT_EQ(d, rank_difference(b, a));
    EXPECT_LE(d, n * (n - 2));
    EXPECT_EQ(d == 0, a == b);
  }
}

TEST(HitTheBest, WineRows) {
  EXPECT_EQ(hit_the_best(row("DSI", {0.635, 0.606, 0.629, 0.609, 0.634}), wine_ari()), 1);
  EXPECT_EQ(hit_the_best(row("Silhouette", {0.284, 0.275, 0.283, 0.277, 0.285}), wine_ari()), 0);
  EXPECT_EQ(hit_the_best(row("Dunn", {0.232, 0.220, 0.177, 0.229, 0.232}), wine_ari()), 1);
  EXPECT_EQ(hit_the_best(row("DB", {1.388, 1.390, 1.391, 1.419, 1.389}), wine_ari()), 1);
}

TEST(HitTheBest, SentinelNeverOptimal) {
  const auto truth = row("ARI", {0.9, 0.1, 0.2});
  EXPECT_EQ(hit_the_best(row("CH", {5, kInf, 1}), truth), 1);
  EXPECT_EQ(hit_the_best(row("CH", {1, kInf, 5}), truth), 0);
  EXPECT_EQ(hit_the_best(row("DB", {kInf, 0.5, 0.7}), truth), 0);
  EXPECT_THROW((void)hit_the_best(row("CH", {1, 2}), truth), DomainError);
}

TEST(HitTheBest, AffineInvariant) {
  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> u(0, 5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(5), c(5);
    for (auto& x : a) x = u(rng);
    for (auto& x : c) x = u(rng);
    const auto truth = row("ARI", a);
    const int base = hit_the_best(row("Dunn", c), truth);
    EXPECT_EQ(base == 0 || base == 1, true);
    std::vector<double> t(c);
    for (auto& x : t) x = 4.0 * x + 16.0;
    EXPECT_EQ(hit_the_best(row("Dunn", t), truth), base);
  }
}

TEST(CompareRow, WineRankDifferences) {
  EXPECT_EQ(compare_row(row("Dunn", {0.232, 0.220, 0.177, 0.229, 0.232}), wine_ari(), Plan::rank_diff), 9);
  EXPECT_EQ(compare_row(row("CH", {70.885, 68.346, 70.041, 67.647, 70.940}), wine_ari(), Plan::rank_diff), 1);
  EXPECT_EQ(compare_row(row("I", {5.421, 4.933, 5.326, 4.962, 5.421}), wine_ari(), Plan::rank_diff), 0);
  EXPECT_EQ(compare_row(wine_ari(), wine_ari(), Plan::rank_diff), 0);
}

TEST(CompareRow, SentinelsRankWorst) {
  const auto truth = row("ARI", {0.9, 0.5, 0.1});
  // +inf on a max-optimal row is clamped to the row minimum
  EXPECT_EQ(ranks_for(row("CH", {3, 2, kInf})), (RankVector{1, 2, 2}));
  EXPECT_EQ(compare_row(row("CH", {3, 2, kInf}), truth, Plan::rank_diff), 0);
  EXPECT_EQ(ranks_for(row("DB", {kInf, kInf, kInf})), (RankVector{1, 1, 1}));
}

TEST(Aggregate, CompetitionRanks) {
  std::vector<std::string> names{"Dunn", "CH", "DB", "Silhouette", "WB", "I", "CVNN", "CVDD", "DSI"};
  const std::vector<int> hits{3, 3, 3, 2, 4, 3, 5, 3, 5};
  auto r = aggregate(names, {{"all", hits}}, Plan::hit_best);
  EXPECT_EQ(r.final_ranks, (std::vector<int>{4, 4, 4, 9, 3, 4, 1, 4, 1}));
  EXPECT_EQ(r.totals, (std::vector<long>{3, 3, 3, 2, 4, 3, 5, 3, 5}));

  const std::vector<int> diffs{80, 82, 74, 83, 87, 88, 81, 75, 86};
  r = aggregate(names, {{"all", diffs}}, Plan::rank_diff);
  EXPECT_EQ(r.final_ranks, (std::vector<int>{3, 5, 1, 6, 8, 9, 4, 2, 7}));
}

TEST(Aggregate, TotalsAreColumnSums) {
  const auto r = aggregate({"A", "B"}, {{"x", {1, 0}}, {"y", {1, 1}}, {"z", {0, 1}}}, Plan::hit_best);
  EXPECT_EQ(r.totals, (std::vector<long>{2, 2}));
  EXPECT_EQ(r.final_ranks, (std::vector<int>{1, 1}));
  EXPECT_EQ(r.rows.size(), 3u);
}

TEST(Aggregate, Errors) {
  EXPECT_THROW((void)aggregate({"A"}, {}, Plan::hit_best), DomainError);
  EXPECT_THROW((void)aggregate({"A", "B"}, {{"x", {1}}}, Plan::hit_best), DomainError);
}

TEST(Plan, Parse) {
  EXPECT_EQ(parse_plan("hit"), Plan::hit_best);
  EXPECT_EQ(parse_plan("rankdiff"), Plan::rank_diff);
  EXPECT_THROW((void)parse_plan("best"), InputError);
}
