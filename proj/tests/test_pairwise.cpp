#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "dsikit/pairwise.hpp"
#include "support/oracles.hpp"

using namespace dsikit;

TEST(Euclidean, KnownValues) {
  EXPECT_DOUBLE_EQ(euclidean_distance({0, 0}, {3, 4}), 5.0);
  EXPECT_DOUBLE_EQ(euclidean_distance({1.5, -2}, {1.5, -2}), 0.0);
  EXPECT_DOUBLE_EQ(euclidean_distance({1, 1, 1}, {2, 2, 2}), std::sqrt(3.0));
  EXPECT_THROW((void)euclidean_distance({1, 2}, {1, 2, 3}), DomainError);
}

TEST(Euclidean, FloatInstantiation) {
  const std::vector<float> a{0.f, 0.f};
  const std::vector<float> b{6.f, 8.f};
  EXPECT_FLOAT_EQ(euclidean_distance(std::span<const float>(a), std::span<const float>(b)), 10.f);
}

TEST(IcdSet, HandEnumeratedExamples) {
  auto two = icd_set(PointMatrix::from_rows({{0, 0}, {0, 2}}));
  ASSERT_TRUE(two);
  EXPECT_EQ(two->values, (std::vector<double>{2}));

  auto line = icd_set(PointMatrix::from_rows({{0}, {1}, {3}}));
  EXPECT_EQ(line->values, (std::vector<double>{1, 2, 3}));

  auto four = icd_set(PointMatrix::from_rows({{0, 0}, {1, 0}, {0, 1}, {5, 5}}));
  EXPECT_EQ(four->count(), 6u);
  EXPECT_EQ(four->population, 6u);
  EXPECT_FALSE(four->subsampled);
}

TEST(IcdSet, SingletonIsEmptySignal) {
  EXPECT_FALSE(icd_set(PointMatrix::from_rows({{1, 2}})).has_value());
}

TEST(BcdSet, HandEnumeratedExamples) {
  EXPECT_EQ(bcd_set(PointMatrix::from_rows({{0, 0}}), PointMatrix::from_rows({{0, 5}})).values,
            (std::vector<double>{5}));
  EXPECT_EQ(bcd_set(PointMatrix::from_rows({{0}, {1}}), PointMatrix::from_rows({{10}, {11}})).values,
            (std::vector<double>{9, 10, 10, 11}));
  const auto twelve = bcd_set(PointMatrix::from_rows({{0}, {1}, {2}}),
                              PointMatrix::from_rows({{5}, {6}, {7}, {8}}));
  EXPECT_EQ(twelve.count(), 12u);
}

TEST(BcdSet, EmptyClassFails) {
  const auto m = PointMatrix::from_rows({{0}, {1}});
  const std::vector<std::size_t> a{0};
  const std::vector<std::size_t> none;
  EXPECT_THROW((void)bcd_set(m, a, none), DomainError);
}

TEST(ComplementBcd, Examples) {
  const auto m = PointMatrix::from_rows({{0}, {1}, {10}});
  const LabelVector l(std::vector<int>{0, 0, 1});
  EXPECT_EQ(class_complement_bcd(m, l, 1).values, (std::vector<double>{9, 10}));
  // two classes: same as the plain BCD
  EXPECT_EQ(class_complement_bcd(m, l, 0).values,
            bcd_set(PointMatrix::from_rows({{0}, {1}}), PointMatrix::from_rows({{10}})).values);
}

TEST(ComplementBcd, Cardinality) {
  std::mt19937_64 rng(5);
  const auto pts = oracle::random_points(rng, 10, 2);
  const LabelVector l(std::vector<int>{0, 0, 1, 1, 1, 2, 2, 2, 2, 2});
  EXPECT_EQ(class_complement_bcd(pts, l, 0).count(), 16u);
  EXPECT_EQ(class_complement_bcd(pts, l, 2).count(), 25u);
}

TEST(ComplementBcd, Errors) {
  const auto m = PointMatrix::from_rows({{0}, {1}});
  EXPECT_THROW((void)class_complement_bcd(m, LabelVector(std::vector<int>{0, 0}), 0), DomainError);
  EXPECT_THROW((void)class_complement_bcd(m, LabelVector(std::vector<int>{0, 1}), 2), DomainError);
}

TEST(PairwiseProperties, CardinalityLaws) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 25; ++trial) {
    const std::size_t nx = 2 + rng() % 299;
    const std::size_t ny = 1 + rng() % 300;
    const auto x = oracle::random_points(rng, nx, 3);
    const auto y = oracle::random_points(rng, ny, 3);
    EXPECT_EQ(icd_set(x)->count(), nx * (nx - 1) / 2);
    EXPECT_EQ(bcd_set(x, y).count(), nx * ny);
  }
}

TEST(PairwiseProperties, MatchesBruteForceEnumeration) {
  std::mt19937_64 rng(3);
  const auto pts = oracle::random_points(rng, 40, 3);
  std::vector<double> expected;
  for (std::size_t i = 0; i < 40; ++i)
    for (std::size_t j = i + 1; j < 40; ++j) expected.push_back(oracle::plain_distance(pts, i, j));
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(icd_set(pts)->values, expected);
}

TEST(PairwiseProperties, RigidMotionAndScale) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t d = 2 + trial % 3;
    const auto pts = oracle::random_points(rng, 30, d);
    const auto rot = oracle::random_rotation(rng, d);
    std::vector<double> shift(d);
    for (auto& s : shift) s = std::normal_distribution<double>(0, 50)(rng);
    const double c = 0.1 + 10.0 * std::uniform_real_distribution<double>()(rng);

    const auto base = icd_set(pts)->values;
    const auto moved = icd_set(oracle::transform(pts, rot, 1.0, shift))->values;
    const auto grown = icd_set(oracle::scaled(pts, c))->values;
    ASSERT_EQ(base.size(), moved.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      EXPECT_TRUE(oracle::rel_close(base[i], moved[i], 1e-9)) << base[i] << " vs " << moved[i];
      EXPECT_TRUE(oracle::rel_close(base[i] * c, grown[i], 1e-9));
    }
  }
}

TEST(PairwiseProperties, RowOrderIndependent) {
  std::mt19937_64 rng(23);
  const auto pts = oracle::random_points(rng, 50, 2);
  std::vector<std::size_t> perm(50);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::shuffle(perm.begin(), perm.end(), rng);
  EXPECT_EQ(icd_set(pts)->values, icd_set(pts.select(perm))->values);
}

TEST(PairwiseProperties, ThreadCountDoesNotChangeResult) {
  std::mt19937_64 rng(29);
  const auto pts = oracle::random_points(rng, 400, 3);
  set_thread_count(1);
  const auto serial = icd_set(pts)->values;
  set_thread_count(4);
  const auto parallel = icd_set(pts)->values;
  set_thread_count(0);
  EXPECT_EQ(serial, parallel);
}

TEST(PairBudget, SubsamplesAboveBudget) {
  std::mt19937_64 rng(31);
  const auto pts = oracle::random_points(rng, 100, 2);
  const PairwiseOptions opt{1000, 7};
  const auto s = icd_set(pts, opt);
  EXPECT_TRUE(s->subsampled);
  EXPECT_EQ(s->count(), 1000u);
  EXPECT_EQ(s->population, 4950u);
  EXPECT_TRUE(std::is_sorted(s->values.begin(), s->values.end()));
  EXPECT_EQ(s->values, icd_set(pts, opt)->values);

  const std::vector<std::size_t> a{0, 1, 2, 3, 4, 5, 6, 7, 8, 9};
  std::vector<std::size_t> b(90);
  std::iota(b.begin(), b.end(), std::size_t{10});
  const auto bcd = bcd_set(pts, a, b, PairwiseOptions{500, 1});
  EXPECT_TRUE(bcd.subsampled);
  EXPECT_EQ(bcd.count(), 500u);
  EXPECT_EQ(bcd.population, 900u);
}
