// core.hpp
//
// Domain types shared by every booster: labels, sparse examples, the sign
// convention, and seeded random streams.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace obboost {

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidProbability : public Error {
 public:
  explicit InvalidProbability(double p)
      : Error("invalid probability " + std::to_string(p) + " (must lie in [0,1])"), value_(p) {}
  double value() const noexcept { return value_; }

 private:
  double value_;
};

// predict/observe alternation broken.
class ProtocolViolation : public Error {
 public:
  using Error::Error;
};

// A simulation-only device used outside a simulation.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

class InvalidExample : public Error {
 public:
  using Error::Error;
};

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability(p);
}

// ---------------------------------------------------------------------------
// Label
// ---------------------------------------------------------------------------

/// Binary label in {-1, +1}. There is no zero label.
class Label {
 public:
  static constexpr Label positive() noexcept { return Label(1); }
  static constexpr Label negative() noexcept { return Label(-1); }

  /// Accepts -1 or +1 only.
  static Label from_int(int v) {
    if (v == 1) return positive();
    if (v == -1) return negative();
    throw InvalidExample("label must be -1 or +1, got " + std::to_string(v));
  }

  constexpr int value() const noexcept { return value_; }
  constexpr bool is_positive() const noexcept { return value_ > 0; }
  constexpr Label operator-() const noexcept { return Label(-value_); }
  friend constexpr bool operator==(Label, Label) = default;

 private:
  explicit constexpr Label(int v) noexcept : value_(static_cast<std::int8_t>(v)) {}
  std::int8_t value_;
};

/// z = y * h, the +-1 agreement indicator.
constexpr int agreement(Label y, Label h) noexcept { return y.value() * h.value(); }

/// +1 for non-negative arguments, -1 otherwise.
constexpr Label sign(double margin) noexcept {
  return margin >= 0.0 ? Label::positive() : Label::negative();
}

/// 1 / (1 + e^s) without overflow for large |s|.
inline double logistic_weight(double s) noexcept {
  if (s >= 0.0) {
    const double e = std::exp(-s);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(s));
}

// ---------------------------------------------------------------------------
// Example
// ---------------------------------------------------------------------------

struct Feature {
  std::uint32_t index;
  double value;
  friend constexpr bool operator==(const Feature&, const Feature&) = default;
};

using FeatureView = std::span<const Feature>;

/// Sparse feature vector plus label. Features are kept sorted by index.
class Example {
 public:
  Example(std::vector<Feature> features, Label label) : features_(std::move(features)), label_(label) {
    std::sort(features_.begin(), features_.end(),
              [](const Feature& a, const Feature& b) { return a.index < b.index; });
    for (std::size_t i = 0; i < features_.size(); ++i) {
      if (!std::isfinite(features_[i].value))
        throw InvalidExample("non-finite value for feature " + std::to_string(features_[i].index));
      if (i > 0 && features_[i].index == features_[i - 1].index)
        throw InvalidExample("duplicate feature index " + std::to_string(features_[i].index));
    }
  }

  FeatureView features() const noexcept { return features_; }
  Label label() const noexcept { return label_; }

  /// Value of a feature, 0 when absent.
  double value_at(std::uint32_t index) const noexcept {
    auto it = std::lower_bound(features_.begin(), features_.end(), index,
                               [](const Feature& f, std::uint32_t i) { return f.index < i; });
    return (it != features_.end() && it->index == index) ? it->value : 0.0;
  }

 private:
  std::vector<Feature> features_;
  Label label_;
};

// ---------------------------------------------------------------------------
// Randomness
// ---------------------------------------------------------------------------

/// Stream ids. Each consumer of randomness draws from its own stream so that
/// changing one component (e.g. the learner count) leaves the others intact.
namespace streams {
inline constexpr std::uint64_t data_shuffle = 1;
inline constexpr std::uint64_t hedge = 2;
inline constexpr std::uint64_t labels = 3;
inline constexpr std::uint64_t synthetic = 4;
inline constexpr std::uint64_t feed_base = std::uint64_t{1} << 20;  // + learner index
inline constexpr std::uint64_t coin_base = std::uint64_t{1} << 21;  // + learner index
}  // namespace streams

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in [0,1) from the top 53 bits of a 64-bit word.
inline constexpr double to_unit(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

/// Stateless uniform draw keyed by (seed, stream, counter).
inline constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t counter) noexcept {
  return to_unit(splitmix64(splitmix64(splitmix64(seed) ^ stream) ^ counter));
}

/// Seeded random stream. Equal (seed, stream) pairs give identical sequences
/// on every platform: mt19937_64 and seed_seq are both fully specified, and
/// no std distribution is used.
class Rng {
 public:
  Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream() const noexcept { return stream_; }

  std::uint64_t next() { return engine_(); }
  double uniform() { return to_unit(engine_()); }

  /// Unbiased integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % n;
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

inline bool bernoulli(double p, Rng& rng) {
  check_probability(p);
  return rng.uniform() < p;
}

/// Fisher-Yates with Rng::below; std::shuffle is not reproducible across
/// standard libraries.
template <typename T>
void shuffle(std::span<T> items, Rng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace obboost
