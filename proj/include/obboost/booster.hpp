// booster.hpp
#pragma once

#include <obboost/core.hpp>
#include <obboost/weak_learners.hpp>

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace obboost {

enum class FeedMode { weighted, sampled };

inline std::string_view to_string(FeedMode m) noexcept {
  return m == FeedMode::weighted ? "weighted" : "sampled";
}

class UndefinedEdge : public Error {
 public:
  using Error::Error;
};

/// Online strong learner over N weak learners.
///
/// Rounds alternate predict(x) then observe(x, y) with the same x. predict()
/// may be called repeatedly without observe() (test-set evaluation); each
/// call replaces the cached round.
class Booster {
 public:
  virtual ~Booster() = default;

  virtual Label predict(FeatureView x) = 0;
  virtual void observe(FeatureView x, Label y) = 0;
  virtual std::string_view name() const noexcept = 0;

  std::size_t size() const noexcept { return learners_.size(); }
  FeedMode feed_mode() const noexcept { return mode_; }
  std::uint64_t rounds() const noexcept { return rounds_; }
  std::uint64_t mistakes() const noexcept { return mistakes_; }
  const WeakLearner& learner(std::size_t i) const { return *learners_.at(i); }

  /// gamma_i = sum(w z) / (2 sum(w)) over the rounds seen, or nullopt when
  /// learner i has accumulated no weight.
  std::vector<std::optional<double>> edges() const {
    std::vector<std::optional<double>> out(learners_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
      if (weight_sum_[i] > 0.0) out[i] = weighted_agreement_[i] / (2.0 * weight_sum_[i]);
    return out;
  }

  /// As edges(), but every edge must be defined.
  std::vector<double> edge_report() const {
    std::vector<double> out;
    out.reserve(learners_.size());
    for (std::size_t i = 0; i < learners_.size(); ++i) {
      if (!(weight_sum_[i] > 0.0))
        throw UndefinedEdge("edge of learner " + std::to_string(i) + " undefined: zero accumulated weight");
      out.push_back(weighted_agreement_[i] / (2.0 * weight_sum_[i]));
    }
    return out;
  }

 protected:
  Booster(LearnerSet learners, FeedMode mode, std::uint64_t seed) : learners_(std::move(learners)), mode_(mode) {
    if (learners_.empty()) throw Error("booster needs at least one weak learner");
    for (const auto& wl : learners_)
      if (!wl) throw Error("null weak learner");
    feed_rng_.reserve(learners_.size());
    for (std::size_t i = 0; i < learners_.size(); ++i) feed_rng_.emplace_back(seed, streams::feed_base + i);
    votes_.resize(learners_.size(), Label::positive());
    weight_sum_.assign(learners_.size(), 0.0);
    weighted_agreement_.assign(learners_.size(), 0.0);
  }

  /// Queries every weak learner once and caches the votes for observe().
  void cache_votes(FeatureView x) {
    for (std::size_t i = 0; i < learners_.size(); ++i) votes_[i] = learners_[i]->predict(x);
    pending_.assign(x.begin(), x.end());
    has_pending_ = true;
  }

  void begin_observe(FeatureView x) {
    if (!has_pending_) throw ProtocolViolation(std::string(name()) + ": observe without a matching predict");
    if (!std::equal(x.begin(), x.end(), pending_.begin(), pending_.end()))
      throw ProtocolViolation(std::string(name()) + ": observe called with a different example than predict");
    has_pending_ = false;
  }

  void end_observe(Label prediction, Label y) {
    if (prediction != y) ++mistakes_;
    ++rounds_;
  }

  /// Passes (x, y) to learner i: as importance weight p (weighted mode) or
  /// with probability p (sampled mode).
  void feed(std::size_t i, FeatureView x, Label y, double p) {
    if (mode_ == FeedMode::weighted)
      learners_[i]->update(x, y, p);
    else
      sampled_feed(*learners_[i], x, y, p, feed_rng_[i]);
  }

  void record_edge(std::size_t i, double w, int z) {
    weight_sum_[i] += w;
    weighted_agreement_[i] += w * z;
  }

  Label vote(std::size_t i) const { return votes_[i]; }

 private:
  LearnerSet learners_;
  FeedMode mode_;
  std::vector<Rng> feed_rng_;
  std::vector<Label> votes_;
  std::vector<Feature> pending_;
  bool has_pending_ = false;
  std::uint64_t rounds_ = 0;
  std::uint64_t mistakes_ = 0;
  std::vector<double> weight_sum_;
  std::vector<double> weighted_agreement_;
};

}  // namespace obboost
