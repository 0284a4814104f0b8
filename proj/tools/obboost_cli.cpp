// obboost: command-line driver for online boosting experiments.
//
//   obboost run       train/test protocol on a dataset, or coin learners on
//                     the uniform-label generator
//   obboost simulate  the constant-edge / two-phase lower-bound constructions
//   obboost synth     write the bundled synthetic datasets

#include <obboost/obboost.hpp>

#include "CLI11.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

namespace {

void emit(const obboost::ExperimentReport& report, const std::string& out_path) {
  const std::string text = obboost::to_json(report).dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw obboost::Error("cannot write report to '" + out_path + "'");
  out << text;
}

template <typename T>
std::optional<T> optional_of(const CLI::Option* opt, const T& value) {
  return opt->count() > 0 ? std::optional<T>(value) : std::nullopt;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online boosting experiments"};
  app.require_subcommand(1);

  // run ---------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "Run one experiment and print its report");
  obboost::ExperimentConfig cfg;
  double gamma = 0.0, coin_p = 0.0;
  std::uint64_t coin_phase1 = 0, rounds = 0;
  std::size_t checkpoint = 0;
  std::string report_out;

  const std::map<std::string, obboost::Algorithm> algorithms{{"online-bbm", obboost::Algorithm::online_bbm},
                                                             {"adaboost-ol", obboost::Algorithm::adaboost_ol},
                                                             {"adaboost-ol-s", obboost::Algorithm::adaboost_ol_s}};
  const std::map<std::string, obboost::LearnerKind> learners{{"stump", obboost::LearnerKind::stump},
                                                             {"linear", obboost::LearnerKind::linear},
                                                             {"coin", obboost::LearnerKind::coin}};
  const std::map<std::string, obboost::FeedMode> feeds{{"weighted", obboost::FeedMode::weighted},
                                                       {"sampled", obboost::FeedMode::sampled}};
  const std::map<std::string, obboost::DataFormat> formats{{"svmlight", obboost::DataFormat::svmlight},
                                                           {"csv", obboost::DataFormat::csv}};

  std::string algorithm_name, learner_name = "stump", feed_name, format_name = "svmlight";
  run->add_option("--algorithm", algorithm_name, "online-bbm | adaboost-ol | adaboost-ol-s")
      ->required()
      ->check(CLI::IsMember(algorithms));
  run->add_option("--weak-learner", learner_name, "stump | linear | coin")
      ->capture_default_str()
      ->check(CLI::IsMember(learners));
  run->add_option("--num-learners", cfg.num_learners, "Number of weak learners N")->required();
  auto* gamma_opt = run->add_option("--gamma", gamma, "Edge parameter (online-bbm only)");
  auto* feed_opt = run->add_option("--feed-mode", feed_name, "weighted | sampled")->check(CLI::IsMember(feeds));
  run->add_option("--seed", cfg.seed, "Random seed")->default_val(0);
  run->add_option("--data", cfg.data, "Dataset path, or 'uniform' for coin-learner simulations")->required();
  run->add_option("--format", format_name, "svmlight | csv")->capture_default_str()->check(CLI::IsMember(formats));
  run->add_option("--label-column", cfg.label_column, "CSV label column")->default_val(0);
  run->add_option("--index-base", cfg.index_base, "First svmlight feature index in the file (0 or 1)")
      ->default_val(0);
  run->add_option("--split", cfg.split, "Training fraction")->default_val(0.8);
  auto* checkpoint_opt = run->add_option("--checkpoint-interval", checkpoint, "Examples between checkpoints");
  run->add_option("--learning-rate", cfg.learning_rate, "Linear learner base step")
      ->default_val(obboost::LinearLearner::default_learning_rate);
  auto* coin_p_opt = run->add_option("--coin-p", coin_p, "Coin learner accuracy (after phase 1)");
  auto* coin_phase1_opt = run->add_option("--coin-phase1", coin_phase1, "Rounds with coin accuracy 1/2");
  auto* rounds_opt = run->add_option("--rounds", rounds, "Rounds for --data uniform");
  run->add_option("--report-out", report_out, "Write the report here instead of stdout");

  // simulate ----------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Run a lower-bound coin-learner construction");
  double sim_gamma = 0.1, excess_loss = 0.0;
  std::size_t sim_n = 1;
  std::uint64_t sim_rounds = 0, sim_seed = 0;
  std::string sim_out;
  const std::map<std::string, obboost::LowerBoundKind> kinds{{"constant-edge", obboost::LowerBoundKind::constant_edge},
                                                             {"two-phase", obboost::LowerBoundKind::two_phase}};
  std::string kind_name, sim_algorithm_name = "online-bbm";
  simulate->add_option("--kind", kind_name, "constant-edge | two-phase")->required()->check(CLI::IsMember(kinds));
  simulate->add_option("--algorithm", sim_algorithm_name, "Booster to run")
      ->capture_default_str()
      ->check(CLI::IsMember(algorithms));
  simulate->add_option("--gamma", sim_gamma, "Coin edge, in (0, 1/4)")->required();
  simulate->add_option("--excess-loss", excess_loss, "Excess loss S (two-phase)");
  simulate->add_option("--num-learners", sim_n, "Number of coin learners")->required();
  simulate->add_option("--rounds", sim_rounds, "Rounds T")->required();
  simulate->add_option("--seed", sim_seed, "Random seed")->default_val(0);
  simulate->add_option("--report-out", sim_out, "Write the report here instead of stdout");

  // synth -------------------------------------------------------------------
  auto* synth = app.add_subcommand("synth", "Write the bundled synthetic datasets as svmlight files");
  std::string out_dir = "data";
  std::uint64_t synth_seed = 1;
  synth->add_option("--out-dir", out_dir, "Output directory")->default_val("data");
  synth->add_option("--seed", synth_seed, "Generator seed")->default_val(1);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*run) {
      cfg.algorithm = algorithms.at(algorithm_name);
      cfg.weak_learner = learners.at(learner_name);
      cfg.format = formats.at(format_name);
      cfg.gamma = optional_of(gamma_opt, gamma);
      if (feed_opt->count() > 0) cfg.feed_mode = feeds.at(feed_name);
      cfg.checkpoint_interval = optional_of(checkpoint_opt, checkpoint);
      cfg.coin_p = optional_of(coin_p_opt, coin_p);
      cfg.coin_phase1 = optional_of(coin_phase1_opt, coin_phase1);
      cfg.rounds = optional_of(rounds_opt, rounds);
      emit(obboost::run_experiment(cfg), report_out);
    } else if (*simulate) {
      emit(obboost::run_lower_bound_sim(kinds.at(kind_name), sim_gamma, excess_loss, sim_n, sim_rounds, sim_seed,
                                        algorithms.at(sim_algorithm_name)),
           sim_out);
    } else if (*synth) {
      std::filesystem::create_directories(out_dir);
      for (const auto& model : obboost::bundled_models()) {
        const auto path = std::filesystem::path(out_dir) / (model.name + ".svm");
        std::ofstream out(path, std::ios::binary);
        if (!out) throw obboost::Error("cannot write '" + path.string() + "'");
        obboost::write_svmlight(out, obboost::generate(model, synth_seed));
        std::cerr << "wrote " << path.string() << "\n";
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "obboost: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
