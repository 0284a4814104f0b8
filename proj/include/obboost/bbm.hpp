// bbm.hpp
//
// Boost-by-majority potentials and weights, and the Online BBM booster.
//
// With m = N - i weak learners still to vote and a walk that steps +1 with
// probability (1+gamma)/2, the potential Phi_i(s) is the probability of at
// most floor((m - s)/2) up-steps, i.e. of ending at or below -s. The weight
// of learner i on margin s is the binomial mass at k = floor((m - s + 1)/2),
// which equals Phi_i(s-1) - Phi_i(s+1).
//
// Weights are in the un-halved form the booster actually executes; since
// only w / sup(w) feeds the learners, the factor of 1/2 in the textbook
// weight cancels.
#pragma once

#include <obboost/booster.hpp>
#include <obboost/core.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace obboost {

namespace detail {

/// floor(a / 2), rounding toward -inf (C++20 right shift is arithmetic).
constexpr std::int64_t floor_half(std::int64_t a) noexcept { return a >> 1; }

/// Kahan-Babuska-Neumaier running sum.
class CompensatedSum {
 public:
  void add(double x) noexcept {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const noexcept { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void check_gamma(double gamma) {
  if (!(gamma >= 0.0 && gamma < 1.0))
    throw Error("potential: gamma must lie in [0,1), got " + std::to_string(gamma));
}

/// log C(m,k) p^k q^(m-k) with p = (1+gamma)/2, for 0 <= k <= m.
inline double log_binomial_mass(std::int64_t m, std::int64_t k, double gamma) {
  const double log_up = std::log(0.5 + 0.5 * gamma);
  const double log_down = std::log(0.5 - 0.5 * gamma);
  const double md = static_cast<double>(m), kd = static_cast<double>(k);
  return std::lgamma(md + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(md - kd + 1.0) + kd * log_up +
         (md - kd) * log_down;
}

}  // namespace detail

/// Phi for m remaining learners at margin s. Empty sums give 0.
inline double potential(std::int64_t m, std::int64_t s, double gamma) {
  if (m < 0) throw Error("potential: negative remaining-learner count");
  detail::check_gamma(gamma);
  const std::int64_t top = detail::floor_half(m - s);
  if (top < 0) return 0.0;
  if (top >= m) return 1.0;
  detail::CompensatedSum sum;
  for (std::int64_t k = 0; k <= top; ++k) sum.add(std::exp(detail::log_binomial_mass(m, k, gamma)));
  return std::min(1.0, sum.value());
}

/// Weight for m remaining learners given the margin of the learners before.
/// C(m,k) is 0 outside 0 <= k <= m.
inline double bbm_weight(std::int64_t m, std::int64_t s_prev, double gamma) {
  if (m < 0) throw Error("bbm_weight: negative remaining-learner count");
  detail::check_gamma(gamma);
  const std::int64_t k = detail::floor_half(m - s_prev + 1);
  if (k < 0 || k > m) return 0.0;
  return std::exp(detail::log_binomial_mass(m, k, gamma));
}

/// Max of bbm_weight(m, s, gamma) over the margins reachable after
/// prev_depth votes: s in [-prev_depth, prev_depth] with the parity of
/// prev_depth.
inline double weight_sup(std::int64_t m, std::int64_t prev_depth, double gamma) {
  if (prev_depth < 0) throw Error("weight_sup: negative depth");
  double best = 0.0;
  for (std::int64_t s = -prev_depth; s <= prev_depth; s += 2) best = std::max(best, bbm_weight(m, s, gamma));
  return best;
}

/// Potentials, weights and per-layer weight suprema for a fixed (N, gamma).
/// Immutable after construction.
class PotentialTable {
 public:
  PotentialTable(std::size_t n, double gamma) : n_(static_cast<std::int64_t>(n)), gamma_(gamma) {
    detail::check_gamma(gamma);
    if (n == 0) throw Error("PotentialTable: need at least one learner");
    log_factorial_.resize(n + 1);
    for (std::size_t j = 0; j <= n; ++j) log_factorial_[j] = std::lgamma(static_cast<double>(j) + 1.0);
    const double log_up = std::log(0.5 + 0.5 * gamma);
    const double log_down = std::log(0.5 - 0.5 * gamma);

    mass_.resize(n + 1);
    cdf_.resize(n + 1);
    for (std::int64_t m = 0; m <= n_; ++m) {
      auto& mass = mass_[m];
      auto& cdf = cdf_[m];
      mass.resize(m + 1);
      cdf.resize(m + 1);
      detail::CompensatedSum running;
      for (std::int64_t k = 0; k <= m; ++k) {
        const double lg = log_factorial_[m] - log_factorial_[k] - log_factorial_[m - k] +
                          static_cast<double>(k) * log_up + static_cast<double>(m - k) * log_down;
        mass[k] = std::exp(lg);
        running.add(mass[k]);
        cdf[k] = std::min(1.0, running.value());
      }
      cdf[m] = 1.0;
    }

    // Learner i (1-based) sees s^{i-1}: i-1 votes, parity of i-1.
    sup_.resize(n);
    for (std::int64_t i = 1; i <= n_; ++i) {
      const std::int64_t m = n_ - i;
      double best = 0.0;
      for (std::int64_t s = -(i - 1); s <= i - 1; s += 2) best = std::max(best, weight(m, s));
      sup_[i - 1] = best;
    }
  }

  std::size_t size() const noexcept { return static_cast<std::size_t>(n_); }
  double gamma() const noexcept { return gamma_; }

  /// Phi for m remaining learners, any integer margin.
  double phi(std::int64_t m, std::int64_t s) const {
    check_m(m);
    const std::int64_t top = detail::floor_half(m - s);
    if (top < 0) return 0.0;
    if (top >= m) return 1.0;
    return cdf_[m][top];
  }

  /// Phi_i(s) indexed by layer i in [0, N].
  double phi_layer(std::int64_t i, std::int64_t s) const { return phi(n_ - i, s); }

  double weight(std::int64_t m, std::int64_t s_prev) const {
    check_m(m);
    const std::int64_t k = detail::floor_half(m - s_prev + 1);
    if (k < 0 || k > m) return 0.0;
    return mass_[m][k];
  }

  /// Supremum of learner i's weight (i in [1, N]) over reachable margins.
  double weight_sup_layer(std::int64_t i) const {
    if (i < 1 || i > n_) throw Error("PotentialTable: layer out of range");
    return sup_[i - 1];
  }

 private:
  void check_m(std::int64_t m) const {
    if (m < 0 || m > n_) throw Error("PotentialTable: remaining count " + std::to_string(m) + " out of range");
  }

  std::int64_t n_;
  double gamma_;
  std::vector<double> log_factorial_;
  std::vector<std::vector<double>> mass_;
  std::vector<std::vector<double>> cdf_;
  std::vector<double> sup_;
};

/// Online boost-by-majority. Non-adaptive: gamma is required up front.
///
/// Every vote has weight 1. After the label arrives, learner i is passed the
/// example with probability (or importance weight) w_i / sup(w_i), where w_i
/// depends on the margin of learners 1..i-1.
class OnlineBbm final : public Booster {
 public:
  OnlineBbm(LearnerSet learners, double gamma, FeedMode mode, std::uint64_t seed)
      : Booster(std::move(learners), mode, seed), table_(checked_size(size(), gamma), gamma) {}

  std::string_view name() const noexcept override { return "online-bbm"; }
  const PotentialTable& table() const noexcept { return table_; }
  double gamma() const noexcept { return table_.gamma(); }

  Label predict(FeatureView x) override {
    cache_votes(x);
    std::int64_t total = 0;
    for (std::size_t i = 0; i < size(); ++i) total += vote(i).value();
    prediction_ = sign(static_cast<double>(total));
    return prediction_;
  }

  void observe(FeatureView x, Label y) override {
    begin_observe(x);
    const auto n = static_cast<std::int64_t>(size());
    std::int64_t margin = 0;  // s^{i-1}
    last_feed_.resize(size());
    for (std::int64_t i = 1; i <= n; ++i) {
      const auto idx = static_cast<std::size_t>(i - 1);
      const int z = agreement(y, vote(idx));
      const double w = table_.weight(n - i, margin);
      const double p = std::min(1.0, w / table_.weight_sup_layer(i));
      last_feed_[idx] = p;
      record_edge(idx, w, z);
      feed(idx, x, y, p);
      margin += z;
    }
    end_observe(prediction_, y);
  }

  /// Feed probabilities of the last observed round.
  const std::vector<double>& last_feed_probabilities() const noexcept { return last_feed_; }

 private:
  static std::size_t checked_size(std::size_t n, double gamma) {
    if (!(gamma > 0.0 && gamma < 0.5))
      throw Error("online-bbm: gamma must lie in (0, 1/2), got " + std::to_string(gamma));
    return n;
  }

  PotentialTable table_;
  Label prediction_ = Label::positive();
  std::vector<double> last_feed_;
};

}  // namespace obboost
