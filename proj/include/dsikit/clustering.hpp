#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "dsikit/dataset.hpp"
#include "dsikit/parallel.hpp"
#include "dsikit/types.hpp"

namespace dsikit {

struct KMeansOptions {
  std::size_t k = 2;
  std::uint64_t seed = 0;
  std::size_t max_iter = 300;
  /// Stop once no centroid moves farther than this.
  double tol = 1e-6;
  /// Called after every assignment step with (iteration, inertia).
  std::function<void(std::size_t, double)> on_iteration;
};

struct KMeansResult {
  LabelVector labels;
  std::vector<std::vector<double>> centroids;
  double inertia = 0.0;
  std::size_t iterations = 0;
};

namespace detail {

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline std::vector<std::vector<double>> kmeans_plus_plus(const PointMatrix& data, std::size_t k,
                                                         std::mt19937_64& rng) {
  const std::size_t n = data.rows();
  std::vector<std::vector<double>> centers;
  centers.reserve(k);
  std::vector<bool> chosen(n, false);

  std::uniform_int_distribution<std::size_t> first(0, n - 1);
  std::size_t pick = first(rng);
  std::vector<double> d2(n, std::numeric_limits<double>::infinity());
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  while (true) {
    chosen[pick] = true;
    const auto row = data.row(pick);
    centers.emplace_back(row.begin(), row.end());
    if (centers.size() == k) break;

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], sq_dist(data.row(i), row));
      total += d2[i];
    }
    if (total > 0.0) {
      const double target = unit(rng) * total;
      double acc = 0.0;
      pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (d2[i] <= 0.0) continue;
        acc += d2[i];
        pick = i;
        if (acc > target) break;
      }
    } else {
      // all remaining points coincide with a center
      pick = static_cast<std::size_t>(std::find(chosen.begin(), chosen.end(), false) - chosen.begin());
    }
  }
  return centers;
}

}  // namespace detail

/// Lloyd's k-means with k-means++ seeding. Deterministic for fixed
/// (data, k, seed) regardless of thread count. An empty cluster takes the
/// point farthest from its centroid (among clusters with more than one member).
[[nodiscard]] inline KMeansResult kmeans_fit(const PointMatrix& data, const KMeansOptions& opt) {
  const std::size_t n = data.rows();
  const std::size_t d = data.cols();
  const std::size_t k = opt.k;
  if (k < 1) throw DomainError("k-means needs k >= 1");
  if (k > n) throw DomainError("k-means needs k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");

  std::mt19937_64 rng(opt.seed);
  auto centroids = detail::kmeans_plus_plus(data, k, rng);
  std::vector<int> assign(n, 0);
  std::vector<double> cost(n, 0.0);
  KMeansResult result;

  for (std::size_t iter = 0; iter < std::max<std::size_t>(opt.max_iter, 1); ++iter) {
    parallel_for(n, [&](std::size_t begin, std::size_t end) {
      for (std::size_t i = begin; i < end; ++i) {
        double best = std::numeric_limits<double>::infinity();
        int best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
          const double dist = detail::sq_dist(data.row(i), centroids[c]);
          if (dist < best) {
            best = dist;
            best_c = static_cast<int>(c);
          }
        }
        assign[i] = best_c;
        cost[i] = best;
      }
    });

    std::vector<std::size_t> sizes(k, 0);
    for (int a : assign) ++sizes[static_cast<std::size_t>(a)];
    for (std::size_t c = 0; c < k; ++c) {
      if (sizes[c] != 0) continue;
      std::size_t donor = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (sizes[static_cast<std::size_t>(assign[i])] > 1 && (donor == n || cost[i] > cost[donor])) donor = i;
      }
      --sizes[static_cast<std::size_t>(assign[donor])];
      assign[donor] = static_cast<int>(c);
      sizes[c] = 1;
      cost[donor] = 0.0;
      const auto row = data.row(donor);
      centroids[c].assign(row.begin(), row.end());
    }

    double inertia = 0.0;
    for (double c : cost) inertia += c;
    result.inertia = inertia;
    result.iterations = iter + 1;
    if (opt.on_iteration) opt.on_iteration(iter, inertia);

    std::vector<std::vector<double>> next(k, std::vector<double>(d, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      auto& c = next[static_cast<std::size_t>(assign[i])];
      for (std::size_t j = 0; j < d; ++j) c[j] += data(i, j);
    }
    double shift = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      for (auto& v : next[c]) v /= static_cast<double>(sizes[c]);
      shift = std::max(shift, std::sqrt(detail::sq_dist(next[c], centroids[c])));
    }
    centroids = std::move(next);
    if (shift < opt.tol) break;
  }

  result.labels = LabelVector::canonicalize(assign);
  result.centroids = std::move(centroids);
  return result;
}

[[nodiscard]] inline LabelVector kmeans(const PointMatrix& data, std::size_t k, std::uint64_t seed,
                                        std::size_t max_iter = 300, double tol = 1e-6) {
  return kmeans_fit(data, {k, seed, max_iter, tol, {}}).labels;
}

/// Agglomerative clustering with Ward's criterion, cut at k clusters.
/// Merge distances follow the Lance-Williams update on squared Euclidean
/// distances. Equal merge costs go to the lexicographically smallest
/// (cluster, cluster) pair, where a cluster is identified by the smallest
/// slot it has absorbed.
[[nodiscard]] inline LabelVector ward(const PointMatrix& data, std::size_t k) {
  const std::size_t n = data.rows();
  if (k < 1) throw DomainError("Ward linkage needs k >= 1");
  if (k > n) throw DomainError("Ward linkage needs k <= n (k=" + std::to_string(k) + ", n=" + std::to_string(n) + ")");

  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      dist[i * n + j] = dist[j * n + i] = detail::sq_dist(data.row(i), data.row(j));

  std::vector<bool> active(n, true);
  std::vector<double> size(n, 1.0);
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i;

  constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> nn(n, none);
  std::vector<double> nnd(n, std::numeric_limits<double>::infinity());
  auto refresh = [&](std::size_t i) {
    nn[i] = none;
    nnd[i] = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || !active[j]) continue;
      if (dist[i * n + j] < nnd[i]) {
        nnd[i] = dist[i * n + j];
        nn[i] = j;
      }
    }
  };
  for (std::size_t i = 0; i < n; ++i) refresh(i);

  for (std::size_t clusters = n; clusters > k; --clusters) {
    std::size_t a = none;
    std::size_t b = none;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i] || nn[i] == none) continue;
      const std::size_t lo = std::min(i, nn[i]);
      const std::size_t hi = std::max(i, nn[i]);
      if (a == none || nnd[i] < best || (nnd[i] == best && (lo < a || (lo == a && hi < b)))) {
        best = nnd[i];
        a = lo;
        b = hi;
      }
    }

    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == a || x == b) continue;
      const double sx = size[x];
      const double merged = ((sx + size[a]) * dist[x * n + a] + (sx + size[b]) * dist[x * n + b] -
                             sx * dist[a * n + b]) /
                            (sx + size[a] + size[b]);
      dist[x * n + a] = dist[a * n + x] = merged;
    }
    active[b] = false;
    size[a] += size[b];
    for (auto& o : owner)
      if (o == b) o = a;

    refresh(a);
    for (std::size_t x = 0; x < n; ++x) {
      if (!active[x] || x == a) continue;
      if (nn[x] == a || nn[x] == b) {
        refresh(x);
      } else if (dist[x * n + a] < nnd[x] || (dist[x * n + a] == nnd[x] && a < nn[x])) {
        nnd[x] = dist[x * n + a];
        nn[x] = a;
      }
    }
  }
  return LabelVector::canonicalize(owner);
}

/// Reads one label token per line (integers or arbitrary strings) and
/// canonicalizes them by first appearance. Trailing blank lines are ignored.
[[nodiscard]] inline LabelVector load_external_labels(const std::filesystem::path& path,
                                                      std::size_t expected) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open label file '" + path.string() + "'");
  std::vector<std::string> tokens;
  std::size_t blank_run = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto tok = detail::trim(line);
    if (tok.empty()) {
      ++blank_run;
      continue;
    }
    if (blank_run) {
      throw InputError(path.string() + ": blank line before line " + std::to_string(line_no));
    }
    if (tok.find_first_of(" \t,;") != std::string_view::npos) {
      throw InputError(path.string() + ":" + std::to_string(line_no) + ": expected a single label token, got '" +
                       std::string(tok) + "'");
    }
    tokens.emplace_back(tok);
  }
  if (tokens.size() != expected) {
    throw InputError(path.string() + ": expected " + std::to_string(expected) + " labels, found " +
                     std::to_string(tokens.size()));
  }
  return LabelVector::canonicalize(tokens);
}

}  // namespace dsikit
