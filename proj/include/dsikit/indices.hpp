#pragma once

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dsikit/pairwise.hpp"
#include "dsikit/separability.hpp"
#include "dsikit/types.hpp"

namespace dsikit {

enum class Direction { max_optimal, min_optimal };
enum class IndexKind { internal, external };

struct IndexDescriptor {
  std::string name;
  Direction direction = Direction::max_optimal;
  IndexKind kind = IndexKind::internal;
  /// Computed by this library. CVNN/CVDD only arrive through score-matrix files.
  bool native = true;

  friend bool operator==(const IndexDescriptor&, const IndexDescriptor&) = default;
};

inline std::string_view direction_name(Direction d) {
  return d == Direction::max_optimal ? "max" : "min";
}

/// Every index the toolkit knows, in report column order.
inline const std::vector<IndexDescriptor>& index_registry() {
  static const std::vector<IndexDescriptor> registry = {
      {"Dunn", Direction::max_optimal, IndexKind::internal, true},
      {"CH", Direction::max_optimal, IndexKind::internal, true},
      {"DB", Direction::min_optimal, IndexKind::internal, true},
      {"Silhouette", Direction::max_optimal, IndexKind::internal, true},
      {"WB", Direction::min_optimal, IndexKind::internal, true},
      {"I", Direction::max_optimal, IndexKind::internal, true},
      {"CVNN", Direction::min_optimal, IndexKind::internal, false},
      {"CVDD", Direction::max_optimal, IndexKind::internal, false},
      {"DSI", Direction::max_optimal, IndexKind::internal, true},
      {"ARI", Direction::max_optimal, IndexKind::external, true},
  };
  return registry;
}

/// Case-insensitive lookup by name or common alias.
inline std::optional<IndexDescriptor> find_index(std::string_view name) {
  std::string key;
  for (char c : name) key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  static const std::map<std::string, std::string, std::less<>> aliases = {
      {"calinski_harabasz", "ch"}, {"davies_bouldin", "db"}, {"i_index", "i"},
      {"adjusted_rand_index", "ari"}, {"silhouette_coefficient", "silhouette"}};
  if (auto it = aliases.find(key); it != aliases.end()) key = it->second;
  for (const auto& d : index_registry()) {
    std::string lower;
    for (char c : d.name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (lower == key) return d;
  }
  return std::nullopt;
}

/// An index value. Degenerate inputs (a zero denominator) give +inf with
/// `degenerate` set rather than throwing.
struct IndexScore {
  double value = 0.0;
  bool degenerate = false;

  static IndexScore infinite() { return {std::numeric_limits<double>::infinity(), true}; }
};

/// Per-cluster statistics shared by the centroid-based indices.
struct ClusterSummary {
  std::size_t dims = 0;
  std::vector<std::vector<double>> centroids;
  std::vector<std::size_t> sizes;
  /// Mean member-to-centroid Euclidean distance.
  std::vector<double> scatter;
  std::vector<double> global_centroid;

  [[nodiscard]] std::size_t cluster_count() const noexcept { return sizes.size(); }
};

namespace detail {

inline void require_partition(const PointMatrix& data, const LabelVector& labels) {
  require_matching(data, labels);
  if (labels.class_count() < 2) throw DomainError("index needs at least 2 clusters");
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

struct Scatter {
  double within = 0.0;   // SSW
  double between = 0.0;  // SSB
};

inline Scatter scatter_sums(const PointMatrix& data, const LabelVector& labels,
                            const ClusterSummary& s) {
  Scatter out;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    out.within += squared_distance(data.row(i), s.centroids[static_cast<std::size_t>(labels[i])]);
  }
  for (std::size_t c = 0; c < s.cluster_count(); ++c) {
    out.between += static_cast<double>(s.sizes[c]) *
                   squared_distance(s.centroids[c], s.global_centroid);
  }
  return out;
}

}  // namespace detail

[[nodiscard]] inline ClusterSummary summarize(const PointMatrix& data, const LabelVector& labels) {
  require_matching(data, labels);
  const std::size_t k = labels.class_count();
  const std::size_t d = data.cols();
  ClusterSummary s;
  s.dims = d;
  s.centroids.assign(k, std::vector<double>(d, 0.0));
  s.sizes = labels.class_sizes();
  s.scatter.assign(k, 0.0);
  s.global_centroid.assign(d, 0.0);

  for (std::size_t i = 0; i < data.rows(); ++i) {
    auto& c = s.centroids[static_cast<std::size_t>(labels[i])];
    for (std::size_t j = 0; j < d; ++j) {
      c[j] += data(i, j);
      s.global_centroid[j] += data(i, j);
    }
  }
  for (std::size_t c = 0; c < k; ++c)
    for (auto& v : s.centroids[c]) v /= static_cast<double>(s.sizes[c]);
  for (auto& v : s.global_centroid) v /= static_cast<double>(data.rows());

  for (std::size_t i = 0; i < data.rows(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    s.scatter[c] += euclidean_distance(data.row(i), std::span<const double>(s.centroids[c]));
  }
  for (std::size_t c = 0; c < k; ++c) s.scatter[c] /= static_cast<double>(s.sizes[c]);
  return s;
}

/// Dunn index: smallest distance between points of different clusters over
/// the largest cluster diameter.
[[nodiscard]] inline IndexScore dunn(const PointMatrix& data, const LabelVector& labels) {
  detail::require_partition(data, labels);
  const std::size_t n = data.rows();
  double min_between = std::numeric_limits<double>::infinity();
  double max_diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = euclidean_distance(data.row(i), data.row(j));
      if (labels[i] == labels[j]) {
        max_diameter = std::max(max_diameter, dist);
      } else {
        min_between = std::min(min_between, dist);
      }
    }
  }
  if (labels.class_count() == n) {
    throw DomainError("Dunn index undefined: every cluster is a singleton (zero diameter)");
  }
  if (max_diameter == 0.0) return IndexScore::infinite();
  return {min_between / max_diameter, false};
}

[[nodiscard]] inline IndexScore calinski_harabasz(const PointMatrix& data, const LabelVector& labels) {
  detail::require_partition(data, labels);
  const auto n = static_cast<double>(data.rows());
  const auto k = static_cast<double>(labels.class_count());
  if (data.rows() == labels.class_count()) {
    throw DomainError("Calinski-Harabasz undefined for n = k");
  }
  const auto sums = detail::scatter_sums(data, labels, summarize(data, labels));
  if (sums.within == 0.0) return IndexScore::infinite();
  return {(sums.between / (k - 1.0)) / (sums.within / (n - k)), false};
}

[[nodiscard]] inline IndexScore davies_bouldin(const PointMatrix& data, const LabelVector& labels) {
  detail::require_partition(data, labels);
  const auto s = summarize(data, labels);
  const std::size_t k = s.cluster_count();
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    double worst = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
      if (i == j) continue;
      const double gap = euclidean_distance(std::span<const double>(s.centroids[i]),
                                            std::span<const double>(s.centroids[j]));
      if (gap == 0.0) return IndexScore::infinite();
      worst = std::max(worst, (s.scatter[i] + s.scatter[j]) / gap);
    }
    total += worst;
  }
  return {total / static_cast<double>(k), false};
}

/// Mean silhouette width. Points in singleton clusters contribute 0.
[[nodiscard]] inline IndexScore silhouette(const PointMatrix& data, const LabelVector& labels) {
  detail::require_partition(data, labels);
  const std::size_t n = data.rows();
  const std::size_t k = labels.class_count();
  const auto sizes = labels.class_sizes();
  std::vector<double> widths(n, 0.0);

  parallel_for(
      n,
      [&](std::size_t begin, std::size_t end) {
        std::vector<double> sums(k);
        for (std::size_t i = begin; i < end; ++i) {
          const auto own = static_cast<std::size_t>(labels[i]);
          if (sizes[own] < 2) continue;
          std::fill(sums.begin(), sums.end(), 0.0);
          for (std::size_t j = 0; j < n; ++j) {
            if (j != i) sums[static_cast<std::size_t>(labels[j])] += euclidean_distance(data.row(i), data.row(j));
          }
          const double a = sums[own] / static_cast<double>(sizes[own] - 1);
          double b = std::numeric_limits<double>::infinity();
          for (std::size_t c = 0; c < k; ++c) {
            if (c != own) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
          }
          const double denom = std::max(a, b);
          widths[i] = denom > 0.0 ? (b - a) / denom : 0.0;
        }
      },
      16);

  double total = 0.0;
  for (double w : widths) total += w;
  return {total / static_cast<double>(n), false};
}

/// WB index: k * SSW / SSB.
[[nodiscard]] inline IndexScore wb_index(const PointMatrix& data, const LabelVector& labels) {
  detail::require_partition(data, labels);
  const auto sums = detail::scatter_sums(data, labels, summarize(data, labels));
  if (sums.between == 0.0) return IndexScore::infinite();
  return {static_cast<double>(labels.class_count()) * sums.within / sums.between, false};
}

inline constexpr double kIIndexPower = 2.0;

/// I index (Maulik-Bandyopadhyay) with power kIIndexPower.
[[nodiscard]] inline IndexScore i_index(const PointMatrix& data, const LabelVector& labels) {
  detail::require_partition(data, labels);
  const auto s = summarize(data, labels);
  const std::size_t k = s.cluster_count();

  double e1 = 0.0;
  double ek = 0.0;
  for (std::size_t i = 0; i < data.rows(); ++i) {
    e1 += euclidean_distance(data.row(i), std::span<const double>(s.global_centroid));
    ek += euclidean_distance(data.row(i),
                             std::span<const double>(s.centroids[static_cast<std::size_t>(labels[i])]));
  }
  double dk = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j)
      dk = std::max(dk, euclidean_distance(std::span<const double>(s.centroids[i]),
                                           std::span<const double>(s.centroids[j])));
  if (ek == 0.0) return IndexScore::infinite();
  return {std::pow((e1 / ek) * dk / static_cast<double>(k), kIIndexPower), false};
}

/// Adjusted Rand index from the contingency table of the two partitions.
[[nodiscard]] inline double adjusted_rand_index(const LabelVector& truth, const LabelVector& predicted) {
  if (truth.size() != predicted.size()) {
    throw DomainError("ARI needs partitions of equal length");
  }
  const std::size_t n = truth.size();
  if (n < 2) throw DomainError("ARI needs at least 2 points");

  const std::size_t kt = truth.class_count();
  const std::size_t kp = predicted.class_count();
  std::vector<std::size_t> table(kt * kp, 0);
  for (std::size_t i = 0; i < n; ++i) {
    ++table[static_cast<std::size_t>(truth[i]) * kp + static_cast<std::size_t>(predicted[i])];
  }
  auto pairs = [](std::size_t m) { return static_cast<double>(m) * (static_cast<double>(m) - 1.0) / 2.0; };

  double index = 0.0;
  for (std::size_t c : table) index += pairs(c);
  double rows = 0.0;
  for (std::size_t c : truth.class_sizes()) rows += pairs(c);
  double cols = 0.0;
  for (std::size_t c : predicted.class_sizes()) cols += pairs(c);

  const double expected = rows * cols / pairs(n);
  const double maximum = 0.5 * (rows + cols);
  // Zero only when both partitions are all-singletons or both a single cluster.
  if (maximum == expected) return 1.0;
  return (index - expected) / (maximum - expected);
}

/// Evaluates a native internal index by descriptor name.
[[nodiscard]] inline IndexScore compute_index(std::string_view name, const PointMatrix& data,
                                              const LabelVector& labels,
                                              const PairwiseOptions& opt = {}) {
  const auto desc = find_index(name);
  if (!desc) throw DomainError("unknown index '" + std::string(name) + "'");
  if (!desc->native) {
    throw DomainError("index not implemented natively; supply via score-matrix file");
  }
  const auto& n = desc->name;
  if (n == "Dunn") return dunn(data, labels);
  if (n == "CH") return calinski_harabasz(data, labels);
  if (n == "DB") return davies_bouldin(data, labels);
  if (n == "Silhouette") return silhouette(data, labels);
  if (n == "WB") return wb_index(data, labels);
  if (n == "I") return i_index(data, labels);
  if (n == "DSI") return {dsi(data, labels, opt).value, false};
  throw DomainError("'" + n + "' is an external index and needs ground-truth labels");
}

}  // namespace dsikit
