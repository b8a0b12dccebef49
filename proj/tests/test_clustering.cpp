#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "dsikit/clustering.hpp"
#include "dsikit/indices.hpp"
#include "support/oracles.hpp"

using namespace dsikit;

namespace {

double inertia(const PointMatrix& m, const LabelVector& l) {
  const auto s = summarize(m, l);
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const double diff = m(i, j) - s.centroids[static_cast<std::size_t>(l[i])][j];
      total += diff * diff;
    }
  return total;
}

/// Best 2-partition by exhaustive enumeration of all non-trivial splits.
LabelVector best_two_partition(const PointMatrix& m) {
  const std::size_t n = m.rows();
  double best = std::numeric_limits<double>::infinity();
  LabelVector best_labels;
  for (unsigned mask = 1; mask + 1 < (1u << n); ++mask) {
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = (mask >> i) & 1u;
    const auto l = LabelVector::canonicalize(raw);
    const double cost = inertia(m, l);
    if (cost < best) {
      best = cost;
      best_labels = l;
    }
  }
  return best_labels;
}

/// Ward by brute force: recompute every merge cost from cluster centroids.
LabelVector naive_ward(const PointMatrix& m, std::size_t k) {
  const std::size_t n = m.rows();
  std::vector<std::vector<std::size_t>> clusters(n);
  for (std::size_t i = 0; i < n; ++i) clusters[i] = {i};
  auto centroid = [&](const std::vector<std::size_t>& c) {
    std::vector<double> out(m.cols(), 0.0);
    for (auto i : c)
      for (std::size_t j = 0; j < m.cols(); ++j) out[j] += m(i, j);
    for (auto& v : out) v /= static_cast<double>(c.size());
    return out;
  };
  while (clusters.size() > k) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < clusters.size(); ++a)
      for (std::size_t b = a + 1; b < clusters.size(); ++b) {
        const auto ca = centroid(clusters[a]);
        const auto cb = centroid(clusters[b]);
        double d2 = 0.0;
        for (std::size_t j = 0; j < ca.size(); ++j) d2 += (ca[j] - cb[j]) * (ca[j] - cb[j]);
        const double na = static_cast<double>(clusters[a].size());
        const double nb = static_cast<double>(clusters[b].size());
        const double cost = na * nb / (na + nb) * d2;
        if (cost < best) {
          best = cost;
          ba = a;
          bb = b;
        }
      }
    clusters[ba].insert(clusters[ba].end(), clusters[bb].begin(), clusters[bb].end());
    clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bb));
  }
  std::vector<int> raw(n);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (auto i : clusters[c]) raw[i] = static_cast<int>(c);
  return LabelVector::canonicalize(raw);
}

}  // namespace

TEST(KMeans, TwoFarSegmentsForEverySeed) {
  const auto m = PointMatrix::from_rows({{0, 0}, {0, 1}, {20, 0}, {20, 1}});
  const auto oracle = best_two_partition(m);
  ASSERT_EQ(oracle.values(), (std::vector<int>{0, 0, 1, 1}));
  for (std::uint64_t seed = 0; seed < 50; ++seed) EXPECT_EQ(kmeans(m, 2, seed), oracle) << "seed " << seed;
}

TEST(KMeans, KEqualsN) {
  std::mt19937_64 rng(4);
  const auto m = oracle::random_points(rng, 12, 2);
  const auto r = kmeans_fit(m, {12, 3, 300, 1e-6, {}});
  EXPECT_EQ(r.labels.class_count(), 12u);
  EXPECT_EQ(r.inertia, 0.0);
}

TEST(KMeans, DuplicatePointsStillFillEveryCluster) {
  const auto m = PointMatrix::from_rows({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
  const auto l = kmeans(m, 3, 9);
  EXPECT_EQ(l.class_count(), 3u);
}

TEST(KMeans, DeterministicPerSeed) {
  std::mt19937_64 rng(6);
  const auto m = oracle::random_points(rng, 300, 3);
  EXPECT_EQ(kmeans(m, 5, 17), kmeans(m, 5, 17));
  set_thread_count(3);
  const auto threaded = kmeans(m, 5, 17);
  set_thread_count(0);
  EXPECT_EQ(threaded, kmeans(m, 5, 17));
}

TEST(KMeans, InertiaNonIncreasing) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto m = oracle::random_points(rng, 200, 2);
    std::vector<double> trace;
    KMeansOptions opt{6, static_cast<std::uint64_t>(trial), 300, 0.0, {}};
    opt.on_iteration = [&](std::size_t, double v) { trace.push_back(v); };
    const auto r = kmeans_fit(m, opt);
    ASSERT_FALSE(trace.empty());
    for (std::size_t i = 1; i < trace.size(); ++i) EXPECT_LE(trace[i], trace[i - 1] * (1 + 1e-12));
    EXPECT_EQ(r.labels.class_count(), 6u);
  }
}

TEST(KMeans, Errors) {
  const auto m = PointMatrix::from_rows({{0}, {1}});
  EXPECT_THROW((void)kmeans(m, 3, 0), DomainError);
  EXPECT_THROW((void)kmeans(m, 0, 0), DomainError);
}

TEST(Ward, TwoFarPairs) {
  const auto m = PointMatrix::from_rows({{0, 0}, {30, 0}, {0, 1}, {30, 1}});
  EXPECT_EQ(ward(m, 2).values(), (std::vector<int>{0, 1, 0, 1}));
  EXPECT_EQ(ward(m, 2), naive_ward(m, 2));
}

TEST(Ward, TrivialCuts) {
  std::mt19937_64 rng(2);
  const auto m = oracle::random_points(rng, 9, 2);
  EXPECT_EQ(ward(m, 9).class_count(), 9u);
  EXPECT_EQ(ward(m, 1).values(), std::vector<int>(9, 0));
  EXPECT_THROW((void)ward(m, 10), DomainError);
  EXPECT_THROW((void)ward(m, 0), DomainError);
}

TEST(Ward, MatchesNaiveCentroidRecomputation) {
  std::mt19937_64 rng(10);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 5 + rng() % 35;
    const auto m = oracle::random_points(rng, n, 2);
    for (std::size_t k : {std::size_t{1}, std::size_t{2}, std::size_t{3}, n / 2}) {
      EXPECT_EQ(ward(m, k), naive_ward(m, k)) << "n=" << n << " k=" << k;
    }
  }
}

TEST(Ward, TiesGoToSmallestPair) {
  // equally spaced points: the first merge must be (0, 1)
  const auto m = PointMatrix::from_rows({{0}, {1}, {2}, {3}});
  EXPECT_EQ(ward(m, 3).values(), (std::vector<int>{0, 0, 1, 2}));
}

TEST(Ward, RowPermutationInvariantUpToRenaming) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 30;
    const auto m = oracle::random_points(rng, n, 2);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    const auto base = ward(m, 4);
    const auto shuffled = ward(m.select(perm), 4);
    std::vector<int> back(n);
    for (std::size_t i = 0; i < n; ++i) back[perm[i]] = shuffled[i];
    EXPECT_EQ(LabelVector::canonicalize(back), base);
  }
}

class ExternalLabels : public ::testing::Test {
 protected:
  std::filesystem::path write(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::path(DSIKIT_TEST_TMP);
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << text;
    return p;
  }
};

TEST_F(ExternalLabels, Integers) {
  EXPECT_EQ(load_external_labels(write("a.labels", "0\n0\n1\n"), 3).values(), (std::vector<int>{0, 0, 1}));
}

TEST_F(ExternalLabels, TokensCanonicalized) {
  EXPECT_EQ(load_external_labels(write("b.labels", "B\nB\nA\n\n"), 3).values(), (std::vector<int>{0, 0, 1}));
}

TEST_F(ExternalLabels, LengthMismatch) {
  EXPECT_THROW((void)load_external_labels(write("c.labels", "0\n1\n"), 3), InputError);
}

TEST_F(ExternalLabels, MalformedContent) {
  EXPECT_THROW((void)load_external_labels(write("d.labels", "0\n\n1\n2\n"), 3), InputError);
  EXPECT_THROW((void)load_external_labels(write("e.labels", "0,1\n1\n2\n"), 3), InputError);
  EXPECT_THROW((void)load_external_labels("/no/such/file", 3), InputError);
}
