#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dsikit/pairwise.hpp"
#include "dsikit/types.hpp"

namespace dsikit {

/// Two-sample Kolmogorov-Smirnov statistic D = sup_t |F_a(t) - F_b(t)| for
/// samples already sorted ascending. Exact: the sweep visits every distinct
/// value once, consuming all ties on both sides before measuring the gap.
[[nodiscard]] inline double ks_statistic_sorted(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw DomainError("KS statistic needs two non-empty samples");
  if (!std::is_sorted(a.begin(), a.end()) || !std::is_sorted(b.begin(), b.end())) {
    throw DomainError("KS statistic expects sorted samples");
  }
  const auto na = static_cast<std::int64_t>(a.size());
  const auto nb = static_cast<std::int64_t>(b.size());
  std::int64_t i = 0;
  std::int64_t j = 0;
  // Gap scaled by na*nb so every comparison is on integers.
  std::int64_t best = 0;
  while (i < na && j < nb) {
    const double t = std::min(a[static_cast<std::size_t>(i)], b[static_cast<std::size_t>(j)]);
    while (i < na && a[static_cast<std::size_t>(i)] <= t) ++i;
    while (j < nb && b[static_cast<std::size_t>(j)] <= t) ++j;
    const std::int64_t gap = i * nb - j * na;
    best = std::max(best, gap < 0 ? -gap : gap);
  }
  return static_cast<double>(best) / (static_cast<double>(na) * static_cast<double>(nb));
}

[[nodiscard]] inline double ks_statistic(const DistanceSample& a, const DistanceSample& b) {
  return ks_statistic_sorted(a.values, b.values);
}

/// Unsorted convenience overload.
[[nodiscard]] inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return ks_statistic_sorted(a, b);
}

struct ClassSimilarity {
  int class_id = 0;
  double similarity = 0.0;

  friend bool operator==(const ClassSimilarity&, const ClassSimilarity&) = default;
};

struct DsiResult {
  double value = 0.0;
  std::vector<ClassSimilarity> per_class;
  /// Classes with fewer than two points (no intra-class distances), left out of the mean.
  std::vector<int> skipped_classes;
  /// True if any distance set was subsampled because it exceeded the pair budget.
  bool subsampled = false;
};

/// Distance-based separability index: for each class, the KS statistic
/// between its intra-class distances and its distances to all other points,
/// averaged over classes.
[[nodiscard]] inline DsiResult dsi(const PointMatrix& data, const LabelVector& labels,
                                   const PairwiseOptions& opt = {}) {
  require_matching(data, labels);
  if (labels.class_count() < 2) throw DomainError("single-class labeling: no BCD exists");

  const auto members = labels.members();
  DsiResult result;
  std::vector<std::size_t> outside;
  for (std::size_t c = 0; c < members.size(); ++c) {
    const int id = static_cast<int>(c);
    PairwiseOptions class_opt = opt;
    class_opt.seed = opt.seed + c;
    auto icd = icd_set(data, members[c], class_opt);
    if (!icd) {
      result.skipped_classes.push_back(id);
      continue;
    }
    outside.clear();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] != id) outside.push_back(i);
    }
    const auto bcd = bcd_set(data, members[c], outside, class_opt);
    result.subsampled = result.subsampled || icd->subsampled || bcd.subsampled;
    result.per_class.push_back({id, ks_statistic(*icd, bcd)});
  }
  if (result.per_class.empty()) {
    throw DomainError("every class is a singleton: no intra-class distances exist");
  }

  double sum = 0.0;
  for (const auto& s : result.per_class) sum += s.similarity;
  result.value = sum / static_cast<double>(result.per_class.size());
  return result;
}

}  // namespace dsikit
