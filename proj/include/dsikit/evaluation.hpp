#pragma once

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsikit/indices.hpp"
#include "dsikit/types.hpp"

namespace dsikit {

/// How one CVI row is compared with the ground-truth (ARI) row.
enum class Plan { hit_best, rank_diff };

inline Plan parse_plan(std::string_view s) {
  if (s == "hit" || s == "hit_best" || s == "hit-the-best") return Plan::hit_best;
  if (s == "rankdiff" || s == "rank_diff" || s == "rank-difference") return Plan::rank_diff;
  throw InputError("unknown plan '" + std::string(s) + "' (expected hit or rankdiff)");
}

inline std::string_view plan_name(Plan p) { return p == Plan::hit_best ? "hit" : "rankdiff"; }

/// Scores of one index across N clustering methods.
struct ScoreRow {
  IndexDescriptor index;
  std::vector<double> scores;
  std::vector<std::string> method_names;

  friend bool operator==(const ScoreRow&, const ScoreRow&) = default;
};

/// Quantized ranks, each in 1..N-1; 1 marks the best interval.
using RankVector = std::vector<int>;

/// Replaces +-inf/NaN sentinels by the row's worst finite score so they rank
/// last. A row without finite values becomes all zeros (a constant row).
[[nodiscard]] inline std::vector<double> substitute_sentinels(std::span<const double> scores,
                                                              Direction direction) {
  std::optional<double> worst;
  for (double s : scores) {
    if (!std::isfinite(s)) continue;
    if (!worst) worst = s;
    worst = direction == Direction::max_optimal ? std::min(*worst, s) : std::max(*worst, s);
  }
  std::vector<double> out(scores.begin(), scores.end());
  for (auto& s : out)
    if (!std::isfinite(s)) s = worst.value_or(0.0);
  return out;
}

/// Maps N scores onto N-1 equal-width intervals of [min, max], numbered 1 at
/// the optimal end. Intervals are left-open, right-closed: a score exactly on
/// a boundary falls into the interval further from the optimum. The optimum
/// itself is rank 1 and the opposite extreme rank N-1. Min-optimal rows are
/// negated first so rank 1 always means best. A constant row is all 1s.
[[nodiscard]] inline RankVector quantize_to_ranks(std::span<const double> scores, Direction direction) {
  const std::size_t n = scores.size();
  if (n < 2) throw DomainError("rank quantization needs at least 2 scores");
  std::vector<double> v(scores.begin(), scores.end());
  for (double s : v)
    if (!std::isfinite(s)) throw DomainError("rank quantization needs finite scores");
  if (direction == Direction::min_optimal)
    for (auto& s : v) s = -s;

  const auto [lo_it, hi_it] = std::minmax_element(v.begin(), v.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  RankVector ranks(n, 1);
  if (hi == lo) return ranks;

  const int intervals = static_cast<int>(n) - 1;
  const double width = (hi - lo) / intervals;
  for (std::size_t i = 0; i < n; ++i) {
    int r = 1;
    while (r < intervals && !(v[i] > hi - r * width)) ++r;
    ranks[i] = r;
  }
  return ranks;
}

/// Sum of absolute rank differences.
[[nodiscard]] inline int rank_difference(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size()) throw DomainError("rank vectors differ in length");
  int sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a[i] - b[i]);
  return sum;
}

/// Positions holding the row's optimal finite score (exact equality).
[[nodiscard]] inline std::vector<std::size_t> optimal_set(std::span<const double> scores, Direction direction) {
  std::optional<double> best;
  for (double s : scores) {
    if (!std::isfinite(s)) continue;
    if (!best || (direction == Direction::max_optimal ? s > *best : s < *best)) best = s;
  }
  std::vector<std::size_t> out;
  if (!best) return out;
  for (std::size_t i = 0; i < scores.size(); ++i)
    if (scores[i] == *best) out.push_back(i);
  return out;
}

namespace detail {
inline void require_same_shape(const ScoreRow& a, const ScoreRow& b) {
  if (a.scores.size() != b.scores.size()) {
    throw DomainError("score rows '" + a.index.name + "' and '" + b.index.name + "' differ in length");
  }
  if (a.scores.size() < 2) throw DomainError("score rows need at least 2 methods");
}
}  // namespace detail

/// 1 if some method that is optimal under the truth row is also optimal under
/// the CVI row. Sentinel (non-finite) scores are never optimal.
[[nodiscard]] inline int hit_the_best(const ScoreRow& cvi, const ScoreRow& truth) {
  detail::require_same_shape(cvi, truth);
  const auto cvi_best = optimal_set(cvi.scores, cvi.index.direction);
  for (std::size_t i : optimal_set(truth.scores, truth.index.direction)) {
    if (std::find(cvi_best.begin(), cvi_best.end(), i) != cvi_best.end()) return 1;
  }
  return 0;
}

[[nodiscard]] inline RankVector ranks_for(const ScoreRow& row) {
  return quantize_to_ranks(substitute_sentinels(row.scores, row.index.direction), row.index.direction);
}

[[nodiscard]] inline int compare_row(const ScoreRow& cvi, const ScoreRow& truth, Plan plan) {
  detail::require_same_shape(cvi, truth);
  if (plan == Plan::hit_best) return hit_the_best(cvi, truth);
  return rank_difference(ranks_for(cvi), ranks_for(truth));
}

/// Standard competition ranking ("1224"): ties share a rank, the next rank skips.
[[nodiscard]] inline std::vector<int> competition_ranks(std::span<const long> totals, bool larger_is_better) {
  std::vector<int> ranks(totals.size());
  for (std::size_t i = 0; i < totals.size(); ++i) {
    int better = 0;
    for (long t : totals) better += larger_is_better ? (t > totals[i]) : (t < totals[i]);
    ranks[i] = better + 1;
  }
  return ranks;
}

struct ReportRow {
  std::string dataset;
  std::vector<int> outcomes;

  friend bool operator==(const ReportRow&, const ReportRow&) = default;
};

struct SkippedDataset {
  std::string dataset;
  std::string reason;

  friend bool operator==(const SkippedDataset&, const SkippedDataset&) = default;
};

struct Provenance {
  /// (path, FNV-1a 64-bit hex digest) per input file.
  std::vector<std::pair<std::string, std::string>> inputs;
  std::vector<std::string> methods;
  std::optional<std::uint64_t> seed;
  std::string version;

  friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Per-dataset outcomes plus the "Total (rank)" footer.
struct EvaluationReport {
  Plan plan = Plan::rank_diff;
  std::vector<std::string> indices;
  std::vector<ReportRow> rows;
  std::vector<long> totals;
  std::vector<int> final_ranks;
  std::vector<SkippedDataset> skipped;
  Provenance provenance;

  friend bool operator==(const EvaluationReport&, const EvaluationReport&) = default;
};

/// Column totals and their competition ranks (larger is better for hits,
/// smaller for rank differences).
[[nodiscard]] inline EvaluationReport aggregate(std::vector<std::string> indices,
                                                std::vector<ReportRow> rows, Plan plan) {
  if (indices.empty() || rows.empty()) throw DomainError("cannot aggregate an empty outcome matrix");
  EvaluationReport report;
  report.plan = plan;
  report.totals.assign(indices.size(), 0);
  for (const auto& row : rows) {
    if (row.outcomes.size() != indices.size()) {
      throw DomainError("outcome row '" + row.dataset + "' has " + std::to_string(row.outcomes.size()) +
                        " entries, expected " + std::to_string(indices.size()));
    }
    for (std::size_t j = 0; j < indices.size(); ++j) report.totals[j] += row.outcomes[j];
  }
  report.final_ranks = competition_ranks(report.totals, plan == Plan::hit_best);
  report.indices = std::move(indices);
  report.rows = std::move(rows);
  return report;
}

}  // namespace dsikit
