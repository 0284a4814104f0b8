// adaboost_ol.hpp
//
// Adaptive, parameter-free online boosting with logistic loss.
#pragma once

#include <obboost/booster.hpp>
#include <obboost/core.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace obboost {

inline constexpr double kVoteWeightBound = 2.0;

/// Projection onto [-2, 2].
constexpr double project(double a) noexcept {
  return std::max(-kVoteWeightBound, std::min(kVoteWeightBound, a));
}

/// One projected gradient step on f(a) = ln(1 + exp(-(s_prev + a z))) with
/// step 4/sqrt(t). `margin` is the post-update margin s_prev + alpha z.
inline double ogd_step(double alpha, double margin, int z, std::uint64_t t) {
  if (t == 0) throw Error("ogd_step: rounds are 1-based");
  const double eta = 4.0 / std::sqrt(static_cast<double>(t));
  return project(alpha + eta * static_cast<double>(z) * logistic_weight(margin));
}

/// Normalized exp(-M_i), shifted by min M so nothing underflows.
inline std::vector<double> hedge_probs(std::span<const std::uint64_t> mistakes) {
  if (mistakes.empty()) throw Error("hedge_probs: no experts");
  const std::uint64_t low = *std::min_element(mistakes.begin(), mistakes.end());
  std::vector<double> p(mistakes.size());
  double total = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(-static_cast<double>(mistakes[i] - low));
    total += p[i];
  }
  for (double& v : p) v /= total;
  return p;
}

/// AdaBoost.OL. Expert i predicts with the first i learners' weighted vote;
/// Hedge over the experts' 0-1 mistakes picks the emitted prediction. Vote
/// weights are learned by projected online gradient descent, and learner i
/// is fed with weight 1/(1 + exp(s^{i-1})).
///
/// In sampled mode (AdaBoost.OL.S) that weight is used directly as the
/// sampling probability; it never exceeds 1.
class AdaBoostOL final : public Booster {
 public:
  AdaBoostOL(LearnerSet learners, FeedMode mode, std::uint64_t seed)
      : Booster(std::move(learners), mode, seed),
        hedge_rng_(seed, streams::hedge),
        alpha_(size(), 0.0),
        expert_mistakes_(size(), 0),
        expert_predictions_(size(), Label::positive()) {}

  std::string_view name() const noexcept override {
    return feed_mode() == FeedMode::weighted ? "adaboost-ol" : "adaboost-ol-s";
  }

  Label predict(FeatureView x) override {
    cache_votes(x);
    double margin = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
      margin += alpha_[i] * vote(i).value();
      expert_predictions_[i] = sign(margin);
    }
    const std::vector<double> probs = hedge_probs(expert_mistakes_);
    const double u = hedge_rng_.uniform();
    double acc = 0.0;
    chosen_ = size() - 1;
    for (std::size_t i = 0; i < size(); ++i) {
      acc += probs[i];
      if (u < acc) {
        chosen_ = i;
        break;
      }
    }
    return expert_predictions_[chosen_];
  }

  void observe(FeatureView x, Label y) override {
    begin_observe(x);
    const std::uint64_t t = rounds() + 1;
    double prev = 0.0;  // s^{i-1}
    for (std::size_t i = 0; i < size(); ++i) {
      const int z = agreement(y, vote(i));
      const double margin = prev + alpha_[i] * z;
      const double w = logistic_weight(prev);
      alpha_[i] = ogd_step(alpha_[i], margin, z, t);
      feed(i, x, y, w);
      if (expert_predictions_[i] != y) ++expert_mistakes_[i];
      record_edge(i, w, z);
      prev = margin;
    }
    end_observe(expert_predictions_[chosen_], y);
  }

  std::span<const double> alphas() const noexcept { return alpha_; }
  std::span<const std::uint64_t> expert_mistakes() const noexcept { return expert_mistakes_; }
  /// Expert chosen by Hedge in the last predict().
  std::size_t chosen_expert() const noexcept { return chosen_; }

 private:
  Rng hedge_rng_;
  std::vector<double> alpha_;
  std::vector<std::uint64_t> expert_mistakes_;
  std::vector<Label> expert_predictions_;
  std::size_t chosen_ = 0;
};

}  // namespace obboost
