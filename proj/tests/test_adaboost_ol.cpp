#include <gtest/gtest.h>

#include <obboost/adaboost_ol.hpp>
#include <obboost/experiment.hpp>

#include "oracles.hpp"

#include <cmath>
#include <memory>
#include <vector>

using namespace obboost;

namespace {

struct Rig {
  std::vector<oracle::Recorder*> learners;
  std::unique_ptr<AdaBoostOL> booster;
};

Rig make_rig(std::size_t n, FeedMode mode = FeedMode::weighted, std::uint64_t seed = 1) {
  Rig rig;
  LearnerSet set;
  for (std::size_t i = 0; i < n; ++i) {
    auto r = std::make_unique<oracle::Recorder>();
    rig.learners.push_back(r.get());
    set.push_back(std::move(r));
  }
  rig.booster = std::make_unique<AdaBoostOL>(std::move(set), mode, seed);
  return rig;
}

const std::vector<Feature> kNoFeatures;

void play(AdaBoostOL& b, Label y) {
  b.predict(kNoFeatures);
  b.observe(kNoFeatures, y);
}

}  // namespace

TEST(Project, ClipsToBox) {
  EXPECT_EQ(project(3.0), 2.0);
  EXPECT_EQ(project(-5.0), -2.0);
  EXPECT_EQ(project(0.5), 0.5);
}

TEST(OgdStep, HandValues) {
  EXPECT_DOUBLE_EQ(ogd_step(0.0, 0.0, +1, 1), 2.0);
  // 4/sqrt(4) * -1 * 1/2
  EXPECT_DOUBLE_EQ(ogd_step(0.0, 0.0, -1, 4), -1.0);
  EXPECT_DOUBLE_EQ(ogd_step(2.0, 0.0, +1, 1), 2.0);
  EXPECT_THROW(ogd_step(0.0, 0.0, 1, 0), Error);
}

TEST(HedgeProbs, UniformAndShiftInvariant) {
  const std::vector<std::uint64_t> even{3, 3, 3, 3};
  for (double p : hedge_probs(even)) EXPECT_DOUBLE_EQ(p, 0.25);

  const std::vector<std::uint64_t> a{0, 1};
  const auto pa = hedge_probs(a);
  EXPECT_NEAR(pa[0], 0.7310585786300049, 1e-15);
  EXPECT_NEAR(pa[1], 0.2689414213699951, 1e-15);

  const std::vector<std::uint64_t> b{1000, 1001};
  const auto pb = hedge_probs(b);
  EXPECT_NEAR(pb[0], pa[0], 1e-15);
  EXPECT_NEAR(pb[1], pa[1], 1e-15);

  const std::vector<std::uint64_t> spread{0, 5, 40, 900, 2};
  const auto ps = hedge_probs(spread);
  double total = 0.0;
  for (double p : ps) total += p;
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_THROW(hedge_probs(std::span<const std::uint64_t>{}), Error);
}

TEST(AdaBoostOL, ColdStartPredictsPositive) {
  auto rig = make_rig(4);
  for (auto* l : rig.learners) l->set(Label::negative());
  // Every alpha is 0, so every expert's margin is 0.
  EXPECT_EQ(rig.booster->predict(kNoFeatures), Label::positive());
}

TEST(AdaBoostOL, HandTraceSingleLearner) {
  auto rig = make_rig(1);
  play(*rig.booster, Label::positive());
  ASSERT_EQ(rig.learners[0]->calls.size(), 1u);
  EXPECT_DOUBLE_EQ(rig.learners[0]->calls[0].p, 0.5);
  EXPECT_DOUBLE_EQ(rig.booster->alphas()[0], 2.0);
  EXPECT_EQ(rig.booster->mistakes(), 0u);

  // Round 2: vote + but y = -, margin -2, step 4/sqrt(2).
  EXPECT_EQ(rig.booster->predict(kNoFeatures), Label::positive());
  rig.booster->observe(kNoFeatures, Label::negative());
  const double want = 2.0 - 4.0 / std::sqrt(2.0) / (1.0 + std::exp(-2.0));
  EXPECT_NEAR(rig.booster->alphas()[0], want, 1e-15);
  EXPECT_EQ(rig.booster->mistakes(), 1u);
  EXPECT_EQ(rig.booster->expert_mistakes()[0], 1u);
}

TEST(AdaBoostOL, SecondLearnerWeightUsesPriorMargin) {
  auto rig = make_rig(2);
  rig.learners[0]->set(Label::negative());
  play(*rig.booster, Label::positive());
  // Both learners start at alpha 0, so both see s = 0 on round 1.
  EXPECT_DOUBLE_EQ(rig.learners[1]->calls[0].p, 0.5);
  const double a0 = rig.booster->alphas()[0];
  EXPECT_DOUBLE_EQ(a0, -2.0);
  play(*rig.booster, Label::positive());
  // s^1 = a0 * z = -2 * -1 = 2 before learner 1's update on round 2.
  const double s1 = a0 * -1.0;
  EXPECT_NEAR(rig.learners[1]->calls[1].p, 1.0 / (1.0 + std::exp(s1)), 1e-15);
}

TEST(AdaBoostOL, AlphasStayInBox) {
  Rng rng(3, 3);
  auto rig = make_rig(6);
  for (int t = 0; t < 2000; ++t) {
    for (auto* l : rig.learners) l->set(rng.uniform() < 0.7 ? Label::positive() : Label::negative());
    play(*rig.booster, rng.uniform() < 0.5 ? Label::positive() : Label::negative());
    for (double a : rig.booster->alphas()) {
      ASSERT_GE(a, -2.0);
      ASSERT_LE(a, 2.0);
    }
  }
}

TEST(AdaBoostOL, EdgeReport) {
  {
    auto rig = make_rig(1);
    for (int t = 0; t < 10; ++t) play(*rig.booster, Label::positive());
    EXPECT_DOUBLE_EQ(rig.booster->edge_report()[0], 0.5);
  }
  {
    auto rig = make_rig(1);
    for (int t = 0; t < 10; ++t) play(*rig.booster, Label::negative());
    EXPECT_DOUBLE_EQ(rig.booster->edge_report()[0], -0.5);
  }
  {
    // The first learner always sees s = 0, so its weight is constant.
    auto rig = make_rig(1);
    for (int t = 0; t < 10; ++t) play(*rig.booster, t % 2 ? Label::positive() : Label::negative());
    EXPECT_NEAR(rig.booster->edge_report()[0], 0.0, 1e-15);
  }
  {
    auto rig = make_rig(3);
    EXPECT_THROW(rig.booster->edge_report(), UndefinedEdge);
    for (const auto& e : rig.booster->edges()) EXPECT_FALSE(e.has_value());
  }
}

TEST(AdaBoostOL, ObserveWithoutPredictIsProtocolViolation) {
  auto rig = make_rig(2);
  EXPECT_THROW(rig.booster->observe(kNoFeatures, Label::positive()), ProtocolViolation);
}

TEST(AdaBoostOL, SampledVariantFeedsUnitWeight) {
  auto rig = make_rig(3, FeedMode::sampled);
  EXPECT_EQ(rig.booster->name(), "adaboost-ol-s");
  for (int t = 0; t < 400; ++t) play(*rig.booster, t % 3 ? Label::positive() : Label::negative());
  std::size_t total = 0;
  for (auto* l : rig.learners) {
    for (const auto& c : l->calls) EXPECT_EQ(c.p, 1.0);
    total += l->calls.size();
  }
  EXPECT_GT(total, 0u);
  EXPECT_LT(total, 3u * 400u);
}

TEST(AdaBoostOL, HedgeDrawsAreSeeded) {
  auto trace = [](std::uint64_t seed) {
    auto rig = make_rig(5, FeedMode::weighted, seed);
    Rng rng(11, 11);
    std::vector<std::size_t> chosen;
    for (int t = 0; t < 300; ++t) {
      for (auto* l : rig.learners) l->set(rng.uniform() < 0.6 ? Label::positive() : Label::negative());
      rig.booster->predict(kNoFeatures);
      chosen.push_back(rig.booster->chosen_expert());
      rig.booster->observe(kNoFeatures, rng.uniform() < 0.5 ? Label::positive() : Label::negative());
    }
    return chosen;
  };
  EXPECT_EQ(trace(1), trace(1));
  EXPECT_NE(trace(1), trace(2));
}

TEST(AdaBoostOL, MistakesWithinHedgeBound) {
  const std::uint64_t T = 2000;
  const std::size_t n = 10;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto r = run_lower_bound_sim(LowerBoundKind::constant_edge, 0.1, 0.0, n, T, seed, Algorithm::adaboost_ol);
    ASSERT_EQ(r.expert_mistakes.size(), n);
    const auto best = *std::min_element(r.expert_mistakes.begin(), r.expert_mistakes.end());
    const double bound = 2.0 * best + 2.0 * std::log(n) + 10.0 * std::sqrt(T * std::log(1000.0));
    EXPECT_LE(static_cast<double>(r.booster_mistakes), bound) << "seed " << seed;
  }
}

TEST(AdaBoostOL, NeedsNoEdgeParameter) {
  LearnerSet set;
  for (int i = 0; i < 3; ++i) set.push_back(std::make_unique<Stump>());
  AdaBoostOL booster(std::move(set), FeedMode::weighted, 0);
  EXPECT_EQ(booster.name(), "adaboost-ol");
  EXPECT_EQ(booster.size(), 3u);
}
