#include <gtest/gtest.h>

#include <obboost/core.hpp>

#include <cmath>
#include <limits>
#include <vector>

using namespace obboost;

TEST(Sign, NonNegativeIsPositive) {
  EXPECT_EQ(sign(0.0), Label::positive());
  EXPECT_EQ(sign(-0.0), Label::positive());
  EXPECT_EQ(sign(-3.2), Label::negative());
  EXPECT_EQ(sign(1e-12), Label::positive());
}

TEST(Label, OnlyPlusMinusOne) {
  EXPECT_EQ(Label::from_int(1).value(), 1);
  EXPECT_EQ(Label::from_int(-1).value(), -1);
  EXPECT_THROW(Label::from_int(0), InvalidExample);
  EXPECT_THROW(Label::from_int(2), InvalidExample);
  EXPECT_EQ(-Label::positive(), Label::negative());
  EXPECT_EQ(agreement(Label::positive(), Label::negative()), -1);
  EXPECT_EQ(agreement(Label::negative(), Label::negative()), 1);
}

TEST(Example, SortsAndRejectsBadFeatures) {
  Example ex({{7, 1.0}, {3, 0.5}}, Label::positive());
  ASSERT_EQ(ex.features().size(), 2u);
  EXPECT_EQ(ex.features()[0].index, 3u);
  EXPECT_DOUBLE_EQ(ex.value_at(7), 1.0);
  EXPECT_DOUBLE_EQ(ex.value_at(4), 0.0);
  EXPECT_THROW(Example({{1, 1.0}, {1, 2.0}}, Label::positive()), InvalidExample);
  EXPECT_THROW(Example({{1, std::numeric_limits<double>::infinity()}}, Label::positive()), InvalidExample);
  EXPECT_THROW(Example({{1, std::nan("")}}, Label::positive()), InvalidExample);
}

TEST(LogisticWeight, SaturatesWithoutOverflow) {
  EXPECT_DOUBLE_EQ(logistic_weight(0.0), 0.5);
  EXPECT_NEAR(logistic_weight(std::log(3.0)), 0.25, 1e-15);
  const double big = logistic_weight(1000.0);
  EXPECT_TRUE(std::isfinite(big));
  EXPECT_GE(big, 0.0);
  EXPECT_LE(big, 1e-300);
  EXPECT_DOUBLE_EQ(logistic_weight(-1000.0), 1.0);
}

TEST(Bernoulli, DegenerateProbabilities) {
  Rng rng(7, 0);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_FALSE(bernoulli(0.0, rng));
    EXPECT_TRUE(bernoulli(1.0, rng));
  }
}

TEST(Bernoulli, RejectsOutOfRange) {
  Rng rng(7, 0);
  EXPECT_THROW(bernoulli(-0.1, rng), InvalidProbability);
  EXPECT_THROW(bernoulli(1.5, rng), InvalidProbability);
  EXPECT_THROW(bernoulli(std::nan(""), rng), InvalidProbability);
}

TEST(Bernoulli, EmpiricalMeanConcentrates) {
  Rng rng(2024, 5);
  const int n = 100000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += bernoulli(0.3, rng) ? 1 : 0;
  const double mean = static_cast<double>(hits) / n;
  EXPECT_LE(std::abs(mean - 0.3), 3.0 * std::sqrt(0.3 * 0.7 / n));
}

TEST(Rng, EqualHandlesGiveIdenticalSequences) {
  for (std::uint64_t seed : {0ULL, 1ULL, 0xdeadbeefcafeULL}) {
    Rng a(seed, 3), b(seed, 3);
    for (int i = 0; i < 5000; ++i) ASSERT_EQ(bernoulli(0.5, a), bernoulli(0.5, b));
  }
}

TEST(Rng, DistinctStreamsDiffer) {
  Rng a(1, 1), b(1, 2);
  int same = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) same += bernoulli(0.5, a) == bernoulli(0.5, b) ? 1 : 0;
  // Independent fair bits agree about half the time.
  EXPECT_LE(std::abs(same - n / 2), 4 * std::sqrt(n * 0.25));
}

TEST(Rng, BelowIsInRangeAndShuffleIsPermutation) {
  Rng rng(9, 9);
  for (int i = 0; i < 1000; ++i) EXPECT_LT(rng.below(7), 7u);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  shuffle(std::span<int>(v), rng);
  std::vector<int> sorted = v;
  std::sort(sorted.begin(), sorted.end());
  for (int i = 0; i < 50; ++i) EXPECT_EQ(sorted[i], i);
}

TEST(CounterUniform, PureAndInUnitInterval) {
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const double u = counter_uniform(5, 6, t);
    EXPECT_EQ(u, counter_uniform(5, 6, t));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}
