// protocol.hpp
//
// Progressive validation over a stream and held-out evaluation.
#pragma once

#include <obboost/booster.hpp>
#include <obboost/core.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace obboost {

struct Checkpoint {
  std::size_t examples;
  double loss;  // cumulative mistake fraction over the first `examples`
  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

struct LossCurve {
  std::vector<Checkpoint> checkpoints;
  std::vector<std::uint8_t> outcomes;  // 1 where the online prediction was wrong
  std::size_t mistakes = 0;

  std::size_t seen() const noexcept { return outcomes.size(); }
  double loss() const noexcept {
    return outcomes.empty() ? 0.0 : static_cast<double>(mistakes) / static_cast<double>(outcomes.size());
  }
};

/// Default checkpoint spacing: ceil(n / 100), at least 1.
constexpr std::size_t default_checkpoint_interval(std::size_t n) noexcept {
  return n < 100 ? 1 : (n + 99) / 100;
}

/// Called before each prediction with the 1-based round and the example.
using RoundHook = std::function<void(std::uint64_t, const Example&)>;

/// Predict, score, then observe, one example at a time. Checkpoints are
/// taken every `interval` examples and after the last one.
inline LossCurve progressive_validate(Booster& booster, std::span<const Example> stream, std::size_t interval,
                                      const RoundHook& before_predict = {}) {
  if (interval == 0) throw Error("checkpoint interval must be positive");
  LossCurve curve;
  curve.outcomes.reserve(stream.size());
  for (std::size_t t = 0; t < stream.size(); ++t) {
    const Example& ex = stream[t];
    if (before_predict) before_predict(t + 1, ex);
    const Label yhat = booster.predict(ex.features());
    const bool wrong = yhat != ex.label();
    curve.outcomes.push_back(wrong ? 1 : 0);
    curve.mistakes += wrong ? 1 : 0;
    booster.observe(ex.features(), ex.label());
    const std::size_t k = t + 1;
    if (k % interval == 0 || k == stream.size()) curve.checkpoints.push_back({k, curve.loss()});
  }
  return curve;
}

/// Predict-only pass; returns the mistake fraction.
inline double evaluate(Booster& booster, std::span<const Example> test, const RoundHook& before_predict = {}) {
  if (test.empty()) throw Error("evaluate: empty test set");
  std::size_t wrong = 0;
  for (std::size_t t = 0; t < test.size(); ++t) {
    if (before_predict) before_predict(t + 1, test[t]);
    if (booster.predict(test[t].features()) != test[t].label()) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(test.size());
}

}  // namespace obboost
