// weak_learners.hpp
//
// Weak online learners behind a predict/update contract with importance
// weights, plus the label-coupled coin learners used to simulate the
// lower-bound adversary.
#pragma once

#include <obboost/core.hpp>

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <vector>

namespace obboost {

/// Behavioral contract of a weak online learner.
///
/// predict() must not change state. update(x, y, p) scales the example's
/// loss by the importance weight p in [0,1]; p = 0 leaves every later
/// prediction unchanged.
class WeakLearner {
 public:
  virtual ~WeakLearner() = default;
  virtual Label predict(FeatureView x) const = 0;
  virtual void update(FeatureView x, Label y, double p) = 0;
};

using LearnerSet = std::vector<std::unique_ptr<WeakLearner>>;

/// Rejection-sampling feed: with probability p, pass (x, y) with weight 1.
/// Returns whether the learner was fed.
inline bool sampled_feed(WeakLearner& wl, FeatureView x, Label y, double p, Rng& rng) {
  if (bernoulli(p, rng)) {
    wl.update(x, y, 1.0);
    return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Decision stump
// ---------------------------------------------------------------------------

/// Single-feature threshold learner.
///
/// For every feature it keeps the class-conditional weighted means and puts
/// the threshold at their midpoint; the prediction points toward the class
/// whose mean lies on the same side. Absent features count as 0. The stump
/// follows the feature with the lowest running weighted mistake count (each
/// candidate rule is scored on an example before the example is absorbed),
/// ties going to the lowest index.
class Stump final : public WeakLearner {
 public:
  Label predict(FeatureView x) const override {
    if (!best_) return Label::positive();
    const std::uint32_t j = *best_;
    double v = 0.0;
    for (const Feature& f : x) {
      if (f.index == j) {
        v = f.value;
        break;
      }
      if (f.index > j) break;
    }
    return rule(j, v);
  }

  void update(FeatureView x, Label y, double p) override {
    check_probability(p);
    if (p == 0.0) return;

    if (!x.empty() && x.back().index >= seen_.size()) grow(x.back().index + 1);
    for (const Feature& f : x) {
      if (!seen_[f.index]) {
        // A feature that was absent so far behaved like the all-zero rule,
        // which predicts +1; it was wrong on exactly the negative weight.
        seen_[f.index] = 1;
        mistakes_[f.index] = weight_[0];
      }
    }

    auto xi = x.begin();
    std::optional<std::uint32_t> best;
    for (std::uint32_t j = 0; j < seen_.size(); ++j) {
      double v = 0.0;
      if (xi != x.end() && xi->index == j) v = (xi++)->value;
      if (!seen_[j]) continue;
      if (rule(j, v) != y) mistakes_[j] += p;
      if (!best || mistakes_[j] < mistakes_[*best]) best = j;
    }
    best_ = best;

    const int c = y.is_positive() ? 1 : 0;
    weight_[c] += p;
    auto& sums = c == 1 ? sum_pos_ : sum_neg_;
    for (const Feature& f : x) sums[f.index] += p * f.value;
  }

  std::optional<std::uint32_t> best_feature() const noexcept { return best_; }

  /// Class-conditional weighted mean of feature j (0 when the class is empty).
  double class_mean(std::uint32_t j, Label c) const noexcept {
    if (j >= seen_.size()) return 0.0;
    const double w = weight_[c.is_positive() ? 1 : 0];
    if (w <= 0.0) return 0.0;
    return (c.is_positive() ? sum_pos_[j] : sum_neg_[j]) / w;
  }

  double mistakes(std::uint32_t j) const noexcept { return j < seen_.size() ? mistakes_[j] : 0.0; }

 private:
  Label rule(std::uint32_t j, double v) const noexcept {
    const double mp = class_mean(j, Label::positive());
    const double mn = class_mean(j, Label::negative());
    const double threshold = 0.5 * (mp + mn);
    return sign((v - threshold) * (mp - mn));
  }

  void grow(std::size_t n) {
    seen_.resize(n, 0);
    mistakes_.resize(n, 0.0);
    sum_pos_.resize(n, 0.0);
    sum_neg_.resize(n, 0.0);
  }

  std::vector<std::uint8_t> seen_;
  std::vector<double> mistakes_;
  std::vector<double> sum_pos_;
  std::vector<double> sum_neg_;
  double weight_[2] = {0.0, 0.0};  // [negative, positive]
  std::optional<std::uint32_t> best_;
};

// ---------------------------------------------------------------------------
// Linear learner
// ---------------------------------------------------------------------------

/// Online logistic regression without bias. Each update with p > 0 takes one
/// importance-weighted gradient step of size eta0 / sqrt(n), n counting the
/// updates with p > 0 so far.
class LinearLearner final : public WeakLearner {
 public:
  static constexpr double default_learning_rate = 0.5;

  explicit LinearLearner(double learning_rate = default_learning_rate) : eta0_(learning_rate) {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
      throw Error("linear learner: learning rate must be positive");
  }

  Label predict(FeatureView x) const override { return sign(score(x)); }

  void update(FeatureView x, Label y, double p) override {
    check_probability(p);
    if (p == 0.0) return;
    ++updates_;
    const double yv = y.value();
    // d/dw ln(1 + exp(-y w.x)) = -y x / (1 + exp(y w.x))
    const double g = p * yv * logistic_weight(yv * score(x));
    const double eta = eta0_ / std::sqrt(static_cast<double>(updates_));
    if (!x.empty() && x.back().index >= weights_.size()) weights_.resize(x.back().index + 1, 0.0);
    for (const Feature& f : x) weights_[f.index] += eta * g * f.value;
  }

  double score(FeatureView x) const noexcept {
    double s = 0.0;
    for (const Feature& f : x)
      if (f.index < weights_.size()) s += weights_[f.index] * f.value;
    return s;
  }

  double weight(std::uint32_t j) const noexcept { return j < weights_.size() ? weights_[j] : 0.0; }
  std::uint64_t updates() const noexcept { return updates_; }

 private:
  double eta0_;
  std::uint64_t updates_ = 0;
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Simulated coin learners
// ---------------------------------------------------------------------------

/// Round index and true label of the round being simulated. Coin learners
/// read it at prediction time; outside an active round they refuse to predict.
class SimulationContext {
 public:
  void begin_round(std::uint64_t t, Label y) {
    round_ = t;
    label_ = y;
  }
  void end_round() { label_.reset(); }

  bool active() const noexcept { return label_.has_value(); }
  std::uint64_t round() const noexcept { return round_; }
  Label label() const {
    if (!label_) throw ContractViolation("coin learner used outside a simulated round");
    return *label_;
  }

 private:
  std::uint64_t round_ = 0;
  std::optional<Label> label_;
};

/// Probability p_t of emitting the true label on round t (1-based).
using CoinSchedule = std::function<double(std::uint64_t)>;

inline CoinSchedule constant_schedule(double p) {
  check_probability(p);
  return [p](std::uint64_t) { return p; };
}

/// p_t = 1/2 for t <= phase1_rounds, then p.
inline CoinSchedule two_phase_schedule(std::uint64_t phase1_rounds, double p) {
  check_probability(p);
  return [phase1_rounds, p](std::uint64_t t) { return t <= phase1_rounds ? 0.5 : p; };
}

/// Emits the true label with scheduled probability, independently across
/// rounds and instances. Each round's outcome is a pure function of
/// (seed, stream, t), so repeated predictions within a round agree and
/// update() is ignored.
class CoinLearner final : public WeakLearner {
 public:
  CoinLearner(std::shared_ptr<const SimulationContext> context, CoinSchedule schedule,
              std::uint64_t seed, std::uint64_t stream)
      : context_(std::move(context)), schedule_(std::move(schedule)), seed_(seed), stream_(stream) {
    if (!context_) throw ContractViolation("coin learner requires a simulation context");
  }

  Label predict(FeatureView) const override { return draw(context_->round(), context_->label()); }

  void update(FeatureView, Label, double p) override { check_probability(p); }

  /// Returns y_true with probability p_t, -y_true otherwise.
  Label draw(std::uint64_t t, Label y_true) const {
    const double p = schedule_(t);
    check_probability(p);
    return counter_uniform(seed_, stream_, t) < p ? y_true : -y_true;
  }

 private:
  std::shared_ptr<const SimulationContext> context_;
  CoinSchedule schedule_;
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace obboost
