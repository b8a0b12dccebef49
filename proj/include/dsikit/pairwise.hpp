#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dsikit/parallel.hpp"
#include "dsikit/types.hpp"

namespace dsikit {

/// Sorted multiset of Euclidean distances (an intra-class or between-class set).
///
/// `population` is the number of pairs the set is defined over. When it exceeds
/// the pair budget, `values` holds a seeded uniform subsample of pairs instead
/// and `subsampled` is set.
struct DistanceSample {
  std::vector<double> values;
  std::size_t population = 0;
  bool subsampled = false;

  [[nodiscard]] std::size_t count() const noexcept { return values.size(); }
  [[nodiscard]] bool empty() const noexcept { return values.empty(); }
};

struct PairwiseOptions {
  std::size_t pair_budget = 50'000'000;
  std::uint64_t seed = 0;
};

template <typename T>
  requires std::is_floating_point_v<T>
[[nodiscard]] T euclidean_distance(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw DomainError("dimension mismatch: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  }
  T sum = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const T diff = a[i] - b[i];
    sum += diff * diff;
  }
  return std::sqrt(sum);
}

[[nodiscard]] inline double euclidean_distance(const std::vector<double>& a,
                                               const std::vector<double>& b) {
  return euclidean_distance(std::span<const double>(a), std::span<const double>(b));
}

namespace detail {

inline std::vector<std::size_t> all_rows(const PointMatrix& m) {
  std::vector<std::size_t> rows(m.rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return rows;
}

inline DistanceSample finish(std::vector<double> values, std::size_t population, bool subsampled) {
  std::sort(values.begin(), values.end());
  return DistanceSample{std::move(values), population, subsampled};
}

}  // namespace detail

/// All distances between unordered pairs of the given rows. Returns nullopt for
/// fewer than two rows: such a class has no intra-class distances at all.
[[nodiscard]] inline std::optional<DistanceSample> icd_set(const PointMatrix& data,
                                                           std::span<const std::size_t> rows,
                                                           const PairwiseOptions& opt = {}) {
  const std::size_t n = rows.size();
  if (n < 2) return std::nullopt;
  const std::size_t pairs = n * (n - 1) / 2;

  if (pairs > opt.pair_budget) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    std::vector<double> values;
    values.reserve(opt.pair_budget);
    while (values.size() < opt.pair_budget) {
      const std::size_t i = pick(rng);
      const std::size_t j = pick(rng);
      if (i == j) continue;
      values.push_back(euclidean_distance(data.row(rows[i]), data.row(rows[j])));
    }
    return detail::finish(std::move(values), pairs, true);
  }

  std::vector<double> values(pairs);
  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          // pairs (i, j > i) start after all pairs of earlier rows
          std::size_t slot = i * n - i * (i + 1) / 2;
          const auto a = data.row(rows[i]);
          for (std::size_t j = i + 1; j < n; ++j) {
            values[slot++] = euclidean_distance(a, data.row(rows[j]));
          }
        }
      },
      64);
  return detail::finish(std::move(values), pairs, false);
}

[[nodiscard]] inline std::optional<DistanceSample> icd_set(const PointMatrix& points,
                                                           const PairwiseOptions& opt = {}) {
  const auto rows = detail::all_rows(points);
  return icd_set(points, rows, opt);
}

/// All distances between a row of `rows_a` and a row of `rows_b`.
[[nodiscard]] inline DistanceSample bcd_set(const PointMatrix& data,
                                            std::span<const std::size_t> rows_a,
                                            std::span<const std::size_t> rows_b,
                                            const PairwiseOptions& opt = {}) {
  if (rows_a.empty() || rows_b.empty()) {
    throw DomainError("between-class distances need two non-empty classes");
  }
  const std::size_t na = rows_a.size();
  const std::size_t nb = rows_b.size();
  const std::size_t pairs = na * nb;

  if (pairs > opt.pair_budget) {
    std::mt19937_64 rng(opt.seed);
    std::uniform_int_distribution<std::size_t> pick_a(0, na - 1);
    std::uniform_int_distribution<std::size_t> pick_b(0, nb - 1);
    std::vector<double> values(opt.pair_budget);
    for (auto& v : values) {
      const std::size_t i = pick_a(rng);
      const std::size_t j = pick_b(rng);
      v = euclidean_distance(data.row(rows_a[i]), data.row(rows_b[j]));
    }
    return detail::finish(std::move(values), pairs, true);
  }

  std::vector<double> values(pairs);
  parallel_for(
      na,
      [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
          const auto a = data.row(rows_a[i]);
          double* out = values.data() + i * nb;
          for (std::size_t j = 0; j < nb; ++j) out[j] = euclidean_distance(a, data.row(rows_b[j]));
        }
      },
      64);
  return detail::finish(std::move(values), pairs, false);
}

[[nodiscard]] inline DistanceSample bcd_set(const PointMatrix& points_a, const PointMatrix& points_b,
                                            const PairwiseOptions& opt = {}) {
  if (points_a.cols() != points_b.cols()) throw DomainError("dimension mismatch between classes");
  // Stack both classes so the row-index overload can be reused.
  std::vector<double> stacked(points_a.values());
  stacked.insert(stacked.end(), points_b.values().begin(), points_b.values().end());
  const PointMatrix both(points_a.rows() + points_b.rows(), points_a.cols(), std::move(stacked));
  std::vector<std::size_t> ra(points_a.rows());
  std::vector<std::size_t> rb(points_b.rows());
  std::iota(ra.begin(), ra.end(), std::size_t{0});
  std::iota(rb.begin(), rb.end(), points_a.rows());
  return bcd_set(both, ra, rb, opt);
}

/// Distances between class `class_id` and every point outside it.
[[nodiscard]] inline DistanceSample class_complement_bcd(const PointMatrix& data,
                                                         const LabelVector& labels, int class_id,
                                                         const PairwiseOptions& opt = {}) {
  require_matching(data, labels);
  if (class_id < 0 || static_cast<std::size_t>(class_id) >= labels.class_count()) {
    throw DomainError("unknown class id " + std::to_string(class_id));
  }
  if (labels.class_count() < 2) throw DomainError("single-class labeling: no BCD exists");
  std::vector<std::size_t> inside;
  std::vector<std::size_t> outside;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    (labels[i] == class_id ? inside : outside).push_back(i);
  }
  return bcd_set(data, inside, outside, opt);
}

}  // namespace dsikit
