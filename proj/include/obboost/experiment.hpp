// experiment.hpp
//
// Experiment configuration, the train/test protocol, the coin-learner
// lower-bound simulations, and versioned JSON reports.
#pragma once

#include <obboost/adaboost_ol.hpp>
#include <obboost/bbm.hpp>
#include <obboost/booster.hpp>
#include <obboost/core.hpp>
#include <obboost/dataset.hpp>
#include <obboost/protocol.hpp>
#include <obboost/weak_learners.hpp>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace obboost {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchema = 1;
inline constexpr std::string_view kUniformSource = "uniform";

class ConfigError : public Error {
 public:
  using Error::Error;
};

enum class Algorithm { online_bbm, adaboost_ol, adaboost_ol_s };
enum class LearnerKind { stump, linear, coin };

inline std::string_view to_string(Algorithm a) noexcept {
  switch (a) {
    case Algorithm::online_bbm: return "online-bbm";
    case Algorithm::adaboost_ol: return "adaboost-ol";
    case Algorithm::adaboost_ol_s: return "adaboost-ol-s";
  }
  return "?";
}

inline std::string_view to_string(LearnerKind k) noexcept {
  switch (k) {
    case LearnerKind::stump: return "stump";
    case LearnerKind::linear: return "linear";
    case LearnerKind::coin: return "coin";
  }
  return "?";
}

inline std::string_view to_string(DataFormat f) noexcept { return f == DataFormat::svmlight ? "svmlight" : "csv"; }

struct ExperimentConfig {
  Algorithm algorithm = Algorithm::online_bbm;
  LearnerKind weak_learner = LearnerKind::stump;
  std::size_t num_learners = 1;
  std::optional<double> gamma;  // online-bbm only
  std::optional<FeedMode> feed_mode;
  std::uint64_t seed = 0;
  /// Dataset path, or "uniform" for the internal uniform-label generator.
  std::string data;
  DataFormat format = DataFormat::svmlight;
  std::size_t label_column = 0;
  int index_base = 0;
  double split = 0.8;
  std::optional<std::size_t> checkpoint_interval;
  double learning_rate = LinearLearner::default_learning_rate;
  // Coin learners on the uniform generator.
  std::optional<double> coin_p;
  std::optional<std::uint64_t> coin_phase1;
  std::optional<std::uint64_t> rounds;
};

inline FeedMode effective_feed_mode(const ExperimentConfig& c) {
  if (c.algorithm == Algorithm::adaboost_ol_s) return FeedMode::sampled;
  return c.feed_mode.value_or(FeedMode::weighted);
}

/// Throws ConfigError naming the first violated rule.
inline void validate(const ExperimentConfig& c) {
  if (c.num_learners < 1) throw ConfigError("--num-learners must be at least 1");
  if (c.algorithm == Algorithm::online_bbm) {
    if (!c.gamma) throw ConfigError("online-bbm requires --gamma");
    if (!(*c.gamma > 0.0 && *c.gamma < 0.5)) throw ConfigError("--gamma must lie in (0, 1/2)");
  } else if (c.gamma) {
    throw ConfigError(std::string(to_string(c.algorithm)) + " is parameter-free and does not accept --gamma");
  }
  if (c.algorithm == Algorithm::adaboost_ol_s && c.feed_mode == FeedMode::weighted)
    throw ConfigError("adaboost-ol-s always samples; --feed-mode weighted contradicts it");
  if (!(c.split > 0.0 && c.split < 1.0)) throw ConfigError("--split must lie in (0, 1)");
  if (c.checkpoint_interval && *c.checkpoint_interval == 0) throw ConfigError("--checkpoint-interval must be positive");
  if (!(c.learning_rate > 0.0) || !std::isfinite(c.learning_rate)) throw ConfigError("--learning-rate must be positive");
  if (c.data.empty()) throw ConfigError("--data is required");

  const bool uniform = c.data == kUniformSource;
  const bool coin = c.weak_learner == LearnerKind::coin;
  if (coin != uniform)
    throw ConfigError(coin ? "coin learners only run on the internal uniform-label generator (--data uniform)"
                           : "--data uniform only supports coin learners");
  if (uniform) {
    if (!c.rounds || *c.rounds == 0) throw ConfigError("--data uniform requires --rounds > 0");
    if (!c.coin_p) throw ConfigError("coin learners require --coin-p");
    if (!(*c.coin_p >= 0.0 && *c.coin_p <= 1.0)) throw ConfigError("--coin-p must lie in [0, 1]");
  } else {
    if (c.rounds) throw ConfigError("--rounds only applies to --data uniform");
    if (c.coin_p || c.coin_phase1) throw ConfigError("--coin-p/--coin-phase1 only apply to coin learners");
  }
  if (c.index_base != 0 && c.index_base != 1) throw ConfigError("--index-base must be 0 or 1");
}

inline Json to_json(const ExperimentConfig& c) {
  Json j;
  j["algorithm"] = to_string(c.algorithm);
  j["weak_learner"] = to_string(c.weak_learner);
  j["num_learners"] = c.num_learners;
  j["gamma"] = c.gamma ? Json(*c.gamma) : Json(nullptr);
  j["feed_mode"] = to_string(effective_feed_mode(c));
  j["seed"] = c.seed;
  j["data"] = c.data;
  if (c.data != kUniformSource) {
    j["format"] = to_string(c.format);
    if (c.format == DataFormat::csv) j["label_column"] = c.label_column;
    else j["index_base"] = c.index_base;
    j["split"] = c.split;
  }
  j["checkpoint_interval"] = c.checkpoint_interval ? Json(*c.checkpoint_interval) : Json(nullptr);
  if (c.weak_learner == LearnerKind::linear) j["learning_rate"] = c.learning_rate;
  if (c.weak_learner == LearnerKind::coin) {
    j["coin_p"] = *c.coin_p;
    j["coin_phase1"] = c.coin_phase1.value_or(0);
    j["rounds"] = *c.rounds;
  }
  return j;
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

struct PhaseStats {
  std::uint64_t rounds = 0;
  std::uint64_t mistakes = 0;
  double mistake_fraction() const noexcept {
    return rounds == 0 ? 0.0 : static_cast<double>(mistakes) / static_cast<double>(rounds);
  }
};

struct ExperimentReport {
  Json config;
  std::string booster;
  std::vector<Checkpoint> checkpoints;
  double train_progressive_loss = 0.0;
  std::optional<double> test_loss;
  std::vector<std::optional<double>> edges;
  std::uint64_t examples_seen = 0;
  std::uint64_t booster_mistakes = 0;
  std::vector<std::uint64_t> expert_mistakes;  // AdaBoost.OL only
  std::optional<PhaseStats> phase1;            // simulations only
  std::optional<PhaseStats> phase2;
  double duration_seconds = 0.0;
};

/// Field that legitimately differs between identical runs.
inline constexpr std::string_view kTimingField = "duration_seconds";

inline Json to_json(const ExperimentReport& r) {
  Json j;
  j["schema"] = kReportSchema;
  j["config"] = r.config;
  j["booster"] = r.booster;
  j["examples_seen"] = r.examples_seen;
  j["booster_mistakes"] = r.booster_mistakes;
  Json cps = Json::array();
  for (const Checkpoint& c : r.checkpoints) cps.push_back({{"examples", c.examples}, {"loss", c.loss}});
  j["checkpoints"] = std::move(cps);
  j["train_progressive_loss"] = r.train_progressive_loss;
  j["test_loss"] = r.test_loss ? Json(*r.test_loss) : Json(nullptr);
  Json edges = Json::array();
  for (const auto& e : r.edges) edges.push_back(e ? Json(*e) : Json(nullptr));
  j["edges"] = std::move(edges);
  if (!r.expert_mistakes.empty()) j["expert_mistakes"] = r.expert_mistakes;
  auto phase = [](const std::optional<PhaseStats>& p) -> Json {
    if (!p) return nullptr;
    return {{"rounds", p->rounds}, {"mistakes", p->mistakes}, {"mistake_fraction", p->mistake_fraction()}};
  };
  if (r.phase1 || r.phase2) j["phases"] = {{"phase1", phase(r.phase1)}, {"phase2", phase(r.phase2)}};
  j[std::string(kTimingField)] = r.duration_seconds;
  return j;
}

// ---------------------------------------------------------------------------
// Construction
// ---------------------------------------------------------------------------

inline std::unique_ptr<Booster> make_booster(Algorithm algorithm, LearnerSet learners, std::optional<double> gamma,
                                             FeedMode mode, std::uint64_t seed) {
  switch (algorithm) {
    case Algorithm::online_bbm:
      if (!gamma) throw ConfigError("online-bbm requires gamma");
      return std::make_unique<OnlineBbm>(std::move(learners), *gamma, mode, seed);
    case Algorithm::adaboost_ol:
      return std::make_unique<AdaBoostOL>(std::move(learners), mode, seed);
    case Algorithm::adaboost_ol_s:
      return std::make_unique<AdaBoostOL>(std::move(learners), FeedMode::sampled, seed);
  }
  throw ConfigError("unknown algorithm");
}

inline LearnerSet make_data_learners(LearnerKind kind, std::size_t n, double learning_rate) {
  LearnerSet out;
  for (std::size_t i = 0; i < n; ++i) {
    if (kind == LearnerKind::stump) out.push_back(std::make_unique<Stump>());
    else if (kind == LearnerKind::linear) out.push_back(std::make_unique<LinearLearner>(learning_rate));
    else throw ConfigError("coin learners need a simulation context");
  }
  return out;
}

namespace detail {

inline void fill_from_booster(ExperimentReport& r, const Booster& b) {
  r.booster = std::string(b.name());
  r.edges = b.edges();
  r.booster_mistakes = b.mistakes();
  if (const auto* ada = dynamic_cast<const AdaBoostOL*>(&b))
    r.expert_mistakes.assign(ada->expert_mistakes().begin(), ada->expert_mistakes().end());
}

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Coin-learner simulations
// ---------------------------------------------------------------------------

struct CoinSimulation {
  Algorithm algorithm = Algorithm::online_bbm;
  std::size_t num_learners = 1;
  std::uint64_t rounds = 0;
  double coin_p = 0.5;               // emitted-label accuracy after phase 1
  std::uint64_t phase1_rounds = 0;   // rounds with accuracy 1/2
  std::optional<double> booster_gamma;
  FeedMode feed_mode = FeedMode::weighted;
  std::uint64_t seed = 0;
  std::optional<std::size_t> checkpoint_interval;
};

/// N independent coin learners on uniformly random labels, evaluated
/// progressively (there is nothing to hold out).
inline ExperimentReport simulate_coins(const CoinSimulation& sim, Json config_echo) {
  if (sim.rounds == 0) throw ConfigError("simulation needs at least one round");
  const auto start = std::chrono::steady_clock::now();
  auto context = std::make_shared<SimulationContext>();
  const CoinSchedule schedule = two_phase_schedule(sim.phase1_rounds, sim.coin_p);
  LearnerSet learners;
  for (std::size_t i = 0; i < sim.num_learners; ++i)
    learners.push_back(std::make_unique<CoinLearner>(context, schedule, sim.seed, streams::coin_base + i));
  auto booster = make_booster(sim.algorithm, std::move(learners), sim.booster_gamma, sim.feed_mode, sim.seed);

  Rng label_rng(sim.seed, streams::labels);
  std::vector<Example> stream;
  stream.reserve(sim.rounds);
  for (std::uint64_t t = 0; t < sim.rounds; ++t)
    stream.emplace_back(std::vector<Feature>{}, label_rng.uniform() < 0.5 ? Label::positive() : Label::negative());

  const std::size_t interval = sim.checkpoint_interval.value_or(default_checkpoint_interval(stream.size()));
  const LossCurve curve = progressive_validate(*booster, stream, interval, [&](std::uint64_t t, const Example& ex) {
    context->begin_round(t, ex.label());
  });
  context->end_round();

  ExperimentReport r;
  r.config = std::move(config_echo);
  r.checkpoints = curve.checkpoints;
  r.train_progressive_loss = curve.loss();
  r.examples_seen = curve.seen();
  detail::fill_from_booster(r, *booster);
  const std::uint64_t t0 = std::min<std::uint64_t>(sim.phase1_rounds, sim.rounds);
  PhaseStats p1, p2;
  for (std::uint64_t t = 0; t < sim.rounds; ++t) {
    PhaseStats& p = t < t0 ? p1 : p2;
    ++p.rounds;
    p.mistakes += curve.outcomes[t];
  }
  if (p1.rounds > 0) r.phase1 = p1;
  if (p2.rounds > 0) r.phase2 = p2;
  r.duration_seconds = detail::seconds_since(start);
  return r;
}

enum class LowerBoundKind { constant_edge, two_phase };

inline std::string_view to_string(LowerBoundKind k) noexcept {
  return k == LowerBoundKind::constant_edge ? "constant-edge" : "two-phase";
}

/// The two adversarial weak-learner constructions: constant accuracy
/// 1/2 + 2 gamma, or accuracy 1/2 for t <= S/(4 gamma) and 1/2 + 2 gamma
/// afterwards. Online BBM runs with the same gamma.
inline ExperimentReport run_lower_bound_sim(LowerBoundKind kind, double gamma, double excess_loss, std::size_t n,
                                            std::uint64_t rounds, std::uint64_t seed,
                                            Algorithm algorithm = Algorithm::online_bbm) {
  if (!(gamma > 0.0 && gamma < 0.25)) throw ConfigError("lower-bound simulation: gamma must lie in (0, 1/4)");
  if (n < 1) throw ConfigError("lower-bound simulation: need at least one learner");
  if (kind == LowerBoundKind::two_phase && !(excess_loss > 0.0))
    throw ConfigError("lower-bound simulation: excess loss must be positive");
  CoinSimulation sim;
  sim.algorithm = algorithm;
  sim.num_learners = n;
  sim.rounds = rounds;
  sim.coin_p = 0.5 + 2.0 * gamma;
  sim.phase1_rounds = kind == LowerBoundKind::two_phase
                          ? static_cast<std::uint64_t>(std::floor(excess_loss / (4.0 * gamma) + 1e-9))
                          : 0;
  if (algorithm == Algorithm::online_bbm) sim.booster_gamma = gamma;
  sim.feed_mode = algorithm == Algorithm::adaboost_ol_s ? FeedMode::sampled : FeedMode::weighted;
  sim.seed = seed;

  Json echo;
  echo["simulation"] = to_string(kind);
  echo["algorithm"] = to_string(algorithm);
  echo["gamma"] = gamma;
  echo["excess_loss"] = excess_loss;
  echo["num_learners"] = n;
  echo["rounds"] = rounds;
  echo["seed"] = seed;
  echo["coin_p"] = sim.coin_p;
  echo["coin_phase1"] = sim.phase1_rounds;
  return simulate_coins(sim, std::move(echo));
}

// ---------------------------------------------------------------------------
// Pipeline
// ---------------------------------------------------------------------------

/// Train/test split of `data`, progressive validation on train, held-out
/// 0-1 loss on test.
inline ExperimentReport run_on_examples(const ExperimentConfig& c, std::span<const Example> data) {
  validate(c);
  const auto start = std::chrono::steady_clock::now();
  Split split = split_shuffle(data, c.split, c.seed);
  if (split.test.empty()) throw ConfigError("split leaves no test examples");
  auto booster = make_booster(c.algorithm, make_data_learners(c.weak_learner, c.num_learners, c.learning_rate),
                              c.gamma, effective_feed_mode(c), c.seed);
  const std::size_t interval = c.checkpoint_interval.value_or(default_checkpoint_interval(split.train.size()));
  const LossCurve curve = progressive_validate(*booster, split.train, interval);

  ExperimentReport r;
  r.config = to_json(c);
  r.checkpoints = curve.checkpoints;
  r.train_progressive_loss = curve.loss();
  r.examples_seen = curve.seen();
  detail::fill_from_booster(r, *booster);
  r.test_loss = evaluate(*booster, split.test);
  r.duration_seconds = detail::seconds_since(start);
  return r;
}

inline ExperimentReport run_experiment(const ExperimentConfig& c) {
  validate(c);
  if (c.data == kUniformSource) {
    CoinSimulation sim;
    sim.algorithm = c.algorithm;
    sim.num_learners = c.num_learners;
    sim.rounds = *c.rounds;
    sim.coin_p = *c.coin_p;
    sim.phase1_rounds = c.coin_phase1.value_or(0);
    sim.booster_gamma = c.gamma;
    sim.feed_mode = effective_feed_mode(c);
    sim.seed = c.seed;
    sim.checkpoint_interval = c.checkpoint_interval;
    return simulate_coins(sim, to_json(c));
  }
  LoadOptions opts;
  opts.format = c.format;
  opts.label_column = c.label_column;
  opts.index_base = c.index_base;
  const std::vector<Example> data = load_dataset(c.data, opts);
  return run_on_examples(c, data);
}

}  // namespace obboost
