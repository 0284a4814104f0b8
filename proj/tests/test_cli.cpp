#include <gtest/gtest.h>

#include <obboost/obboost.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#ifndef OBBOOST_CLI
#error "OBBOOST_CLI must name the obboost executable"
#endif

namespace fs = std::filesystem;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Result run_cli(const std::string& args) {
  const fs::path dir = fs::temp_directory_path();
  const fs::path out = dir / "obboost_cli_out.txt", err = dir / "obboost_cli_err.txt";
  const std::string cmd = std::string("\"") + OBBOOST_CLI + "\" " + args + " >\"" + out.string() + "\" 2>\"" +
                          err.string() + "\"";
  const int raw = std::system(cmd.c_str());
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, slurp(out), slurp(err)};
}

const std::string& small_dataset() {
  static const std::string path = [] {
    const auto p = fs::temp_directory_path() / "obboost_cli_small.svm";
    std::ofstream out(p, std::ios::binary);
    const auto data = obboost::generate(obboost::bundled_models()[0], 5);
    obboost::write_svmlight(out, std::span<const obboost::Example>(data).first(400));
    return p.string();
  }();
  return path;
}

obboost::Json without_timing(const std::string& text) {
  auto j = obboost::Json::parse(text);
  j.erase(std::string(obboost::kTimingField));
  return j;
}

}  // namespace

TEST(Cli, UnknownFlagIsAnError) {
  const auto r = run_cli("run --algorithm adaboost-ol --num-learners 2 --data " + small_dataset() + " --bogus 1");
  EXPECT_NE(r.status, 0);
  EXPECT_FALSE(r.err.empty());
}

TEST(Cli, GammaRules) {
  const auto with_gamma = run_cli("run --algorithm adaboost-ol --num-learners 2 --gamma 0.1 --data " + small_dataset());
  EXPECT_NE(with_gamma.status, 0);
  EXPECT_NE(with_gamma.err.find("gamma"), std::string::npos);
  const auto missing = run_cli("run --algorithm online-bbm --num-learners 2 --data " + small_dataset());
  EXPECT_NE(missing.status, 0);
  EXPECT_NE(missing.err.find("gamma"), std::string::npos);
}

TEST(Cli, BadEnumAndMissingFile) {
  EXPECT_NE(run_cli("run --algorithm boosty --num-learners 2 --data " + small_dataset()).status, 0);
  const auto r = run_cli("run --algorithm adaboost-ol --num-learners 2 --data /nonexistent/x.svm");
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("obboost: error:"), std::string::npos);
}

TEST(Cli, RunPrintsDeterministicReport) {
  const std::string args =
      "run --algorithm online-bbm --gamma 0.1 --num-learners 5 --seed 9 --feed-mode sampled --data " + small_dataset();
  const auto a = run_cli(args), b = run_cli(args);
  ASSERT_EQ(a.status, 0) << a.err;
  ASSERT_EQ(b.status, 0) << b.err;
  const auto ja = without_timing(a.out);
  EXPECT_EQ(ja["schema"], 1);
  EXPECT_EQ(ja["config"]["feed_mode"], "sampled");
  EXPECT_EQ(ja["examples_seen"], 320);
  EXPECT_EQ(ja.dump(), without_timing(b.out).dump());
}

TEST(Cli, ReportOutAndSimulate) {
  const auto path = fs::temp_directory_path() / "obboost_cli_report.json";
  fs::remove(path);
  const auto r = run_cli("simulate --kind two-phase --gamma 0.1 --excess-loss 40 --num-learners 5 --rounds 300 "
                         "--seed 2 --report-out " + path.string());
  ASSERT_EQ(r.status, 0) << r.err;
  EXPECT_TRUE(r.out.empty());
  const auto j = obboost::Json::parse(slurp(path));
  EXPECT_EQ(j["phases"]["phase1"]["rounds"], 100);
  EXPECT_EQ(j["booster"], "online-bbm");
}

TEST(Cli, CoinLearnersNeedUniformSource) {
  EXPECT_NE(run_cli("run --algorithm adaboost-ol --weak-learner coin --coin-p 0.7 --num-learners 2 --data " +
                    small_dataset())
                .status,
            0);
  const auto ok = run_cli(
      "run --algorithm adaboost-ol --weak-learner coin --coin-p 0.7 --num-learners 3 --data uniform --rounds 200");
  EXPECT_EQ(ok.status, 0) << ok.err;
}
