#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

#include "wks/errors.hpp"
#include "wks/harness.hpp"
#include "wks/strategy.hpp"

using namespace wks;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig cfg;
  cfg.set("k", "2");
  cfg.set("weights", "1,2");
  cfg.set("points", "12");
  cfg.set("d", "1,3");
  cfg.set("generator", "phase_completing");
  cfg.set("phases", "2");
  cfg.set("trials", "4");
  cfg.set("seed", "2026");
  cfg.finalize();
  return cfg;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/wks_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("config keys parse, validate, and reject garbage") {
  ExperimentConfig cfg;
  cfg.set("k", "3");
  cfg.set("weights", "1,2,9/2");
  cfg.set("points", "30");
  cfg.set("opt_mode", "fixed");
  cfg.set("initial", "0,0,0");
  cfg.set("generator", "uniform");
  cfg.set("length", "50");
  cfg.finalize();
  CHECK(cfg.k == 3);
  CHECK(cfg.raw_weights[2] == Rat(9, 2));
  CHECK(!cfg.opt_free);
  CHECK(cfg.weights.k() == 3);

  CHECK_THROWS_AS(cfg.set("banana", "1"), invalid_input);
  CHECK_THROWS_AS(cfg.set("trials", "three"), invalid_input);
  CHECK_THROWS_AS(cfg.set("generator", "malicious"), invalid_input);
  CHECK_THROWS_AS(cfg.set("opt_mode", "maybe"), invalid_input);
  CHECK_THROWS_AS(cfg.set("d", "1,3/2"), invalid_input);

  ExperimentConfig bad;
  bad.set("k", "3");
  bad.set("weights", "1,2");  // arity mismatch surfaces at finalize
  CHECK_THROWS_AS(bad.finalize(), invalid_input);

  ExperimentConfig escape;
  escape.set("initial", "0,99");
  CHECK_THROWS_AS(escape.finalize(), invalid_input);
}

TEST_CASE("config files: comments, blank lines, surrounding whitespace") {
  TempFile f("config.cfg");
  std::ofstream(f.path) << "# experiment setup\n"
                           "k = 2\n"
                           "\n"
                           "weights=1,2   # light and heavy\n"
                           "  trials =  7\n";
  auto pairs = read_config_file(f.path);
  REQUIRE(pairs.size() == 3);
  CHECK(pairs[0] == std::pair<std::string, std::string>{"k", "2"});
  CHECK(pairs[1] == std::pair<std::string, std::string>{"weights", "1,2"});
  CHECK(pairs[2] == std::pair<std::string, std::string>{"trials", "7"});

  ExperimentConfig cfg;
  for (const auto& [key, value] : pairs) cfg.set(key, value);
  cfg.finalize();
  CHECK(cfg.trials == 7);

  TempFile bad("bad.cfg");
  std::ofstream(bad.path) << "k 2\n";
  CHECK_THROWS_AS(read_config_file(bad.path), invalid_input);
  CHECK_THROWS_AS(read_config_file("/tmp/wks_test_no_such_file.cfg"), invalid_input);
}

TEST_CASE("environment overrides apply to every documented key") {
  ExperimentConfig cfg;
  setenv("WKS_TRIALS", "3", 1);
  setenv("WKS_GENERATOR", "uniform", 1);
  setenv("WKS_OPT_MODE", "fixed", 1);
  apply_env_overrides(cfg);
  unsetenv("WKS_TRIALS");
  unsetenv("WKS_GENERATOR");
  unsetenv("WKS_OPT_MODE");
  CHECK(cfg.trials == 3);
  CHECK(cfg.generator == GeneratorSpec::Kind::Uniform);
  CHECK(!cfg.opt_free);

  // explicit settings applied after the environment win
  cfg.set("trials", "9");
  CHECK(cfg.trials == 9);

  setenv("WKS_TRIALS", "many", 1);
  CHECK_THROWS_AS(apply_env_overrides(cfg), invalid_input);
  unsetenv("WKS_TRIALS");
}

TEST_CASE("experiment rows pair the online run with the exact optimum") {
  auto cfg = small_config();
  auto report = run_experiment(cfg);
  REQUIRE(report.trials.size() == 4);
  for (const auto& row : report.trials) {
    CHECK(row.requests > 0);
    CHECK(row.alg >= row.opt);  // the optimum is exact, so no row may beat it
    CHECK(row.ratio.has_value() == (row.opt > Rat(0)));
    CHECK(row.bound_checked);
  }
  // with d = (1,3): multiplier 2^2 * (1 + 3(1 + 1/2)) = 22, additive 11/2 * 2
  CHECK(report.bound_mult == Rat(22));
  CHECK(report.bound_add == Rat(11));
  CHECK(report.violations == 0);

  // aggregation is a pure function of the rows
  auto again = aggregate(cfg, report.trials);
  CHECK(again.mean_ratio == report.mean_ratio);
  CHECK(again.max_ratio == report.max_ratio);
  CHECK(again.mean_alg_per_phase == report.mean_alg_per_phase);
  CHECK(again.violations == report.violations);

  // one-row aggregation is the row itself
  auto single = aggregate(cfg, {report.trials[0]});
  if (report.trials[0].ratio) {
    CHECK(single.mean_ratio == report.trials[0].ratio);
    CHECK(single.max_ratio == report.trials[0].ratio);
  }
}

TEST_CASE("CSV output is byte-deterministic with a fixed header") {
  auto cfg = small_config();
  TempFile csv("report.csv");
  cfg.set("out_csv", csv.path);
  cfg.finalize();
  auto report = run_experiment(cfg);
  std::string text = report_csv(report);
  CHECK(text.rfind("trial,seed,requests,completed_phases,alg_cost,opt_cost,ratio,bound_checked,"
                   "bound_ok\n",
                   0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 5);
  CHECK(text.find("\r") == std::string::npos);

  // the written file holds exactly the same bytes
  std::ifstream in(csv.path, std::ios::binary);
  std::string file_text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(file_text == text);

  // and a fresh run of the same config reproduces them
  auto report2 = run_experiment(cfg);
  CHECK(report_csv(report2) == text);
}

TEST_CASE("trace lines carry position, request, movement, cost, and path") {
  Metric metric{6};
  WeightVector w{{Rat(1), Rat(2)}};
  Constants constants = Constants::with_d_profile({Int(1), Int(3)});
  auto report = serve_online({0, 1}, {2, 2, 3}, metric, w, constants, 99);
  std::string text = format_trace(report.trace);
  REQUIRE(!report.trace.empty());
  CHECK(std::count(text.begin(), text.end(), '\n') ==
        static_cast<long>(report.trace.size()));
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) CHECK(std::count(line.begin(), line.end(), '\t') == 4);
  // a repeated request moves nothing and says so
  CHECK(text.find("\t-\t") != std::string::npos);
}
