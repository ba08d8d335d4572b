#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wks/adversary.hpp"
#include "wks/constants.hpp"
#include "wks/metric.hpp"
#include "wks/offline.hpp"
#include "wks/strategy.hpp"
#include "wks/weights.hpp"

// Experiment orchestration: a flat key=value configuration (file, WKS_*
// environment overrides, then explicit overrides, in increasing precedence),
// a seeded trial loop pairing the online algorithm against the exact offline
// optimum, and deterministic CSV emission.

namespace wks {

struct ExperimentConfig {
  int k = 2;
  std::vector<Rat> raw_weights = {Rat(1), Rat(2)};  // pre-rounding input weights
  std::int64_t metric_points = 20;
  std::optional<std::vector<Int>> d_override;  // unset = theoretical d profile
  GeneratorSpec::Kind generator = GeneratorSpec::Kind::PhaseCompleting;
  std::size_t length = 100;  // Uniform generator: requests per trial
  std::size_t phases = 5;    // parser-guided generators: phases per trial
  std::size_t trials = 10;
  std::uint64_t seed = 1;
  bool opt_free = true;  // FreeInitial OPT when true, else FixedInitial at `initial`
  std::optional<Configuration> initial;  // default: all servers on point 0
  unsigned pad_percent = 25;
  unsigned chase_percent = 70;
  std::size_t max_requests = 1'000'000;
  std::size_t opt_budget = 50'000'000;
  std::string out_csv;    // per-trial CSV path ("" = don't write)
  std::string out_req;    // prefix for per-trial request files ("" = don't write)
  std::string out_trace;  // prefix for per-trial trace files ("" = don't write)

  // Derived pieces, resolved by finalize().
  WeightVector weights;  // rounded, weight-constrained
  Constants constants = Constants::theoretical();

  // Applies one key=value setting; throws invalid_input on unknown keys or
  // unparseable values.  Keys: k, weights, points, d, generator, length,
  // phases, trials, seed, opt_mode, initial, pad_percent, chase_percent,
  // max_requests, opt_budget, out_csv, out_req, out_trace.
  void set(const std::string& key, const std::string& value);
  // Rounds the weights, resolves the constants profile, validates.
  void finalize();
};

// Reads a flat key=value file (one pair per line; '#' starts a comment).
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

// Environment overrides: for every documented key, WKS_<KEY-IN-UPPERCASE>
// (e.g. WKS_TRIALS) overrides the current value when set.
void apply_env_overrides(ExperimentConfig& config);

struct TrialRow {
  std::size_t trial = 0;
  std::uint64_t seed = 0;       // the trial's derived seed
  std::size_t requests = 0;
  int completed_phases = 0;
  Rat alg;                      // online algorithm's total cost
  Rat opt;                      // exact offline optimum
  std::optional<Rat> ratio;     // alg/opt; unset when opt = 0
  bool bound_checked = false;   // competitive inequality evaluated
  bool bound_ok = false;        // alg <= 2^k c_k opt + c_k w_k
};

struct ExperimentReport {
  std::vector<TrialRow> trials;
  std::optional<Rat> mean_ratio;          // over trials with opt > 0
  std::optional<Rat> max_ratio;
  std::optional<Rat> mean_alg_per_phase;  // total alg / total completed phases
  std::optional<Rat> bound_mult;          // 2^k * c_k, when c_k is computable
  std::optional<Rat> bound_add;           // c_k * w_k
  std::size_t violations = 0;             // trials failing the bound check
};

// Runs `config.trials` independent trials: generate a stream from the trial
// seed, serve it online, compute the exact optimum, and record one row per
// trial.  Writes the configured output files.
ExperimentReport run_experiment(const ExperimentConfig& config);

// Aggregation alone (exact rational means; no I/O).
ExperimentReport aggregate(const ExperimentConfig& config, std::vector<TrialRow> rows);

// Deterministic CSV: fixed header, one row per trial, exact rationals, LF
// line endings.
std::string report_csv(const ExperimentReport& report);

// Trace persistence: one line per consumed request,
// "<index>\t<request>\t<moved servers or '-'>\t<step cost>\t<path>".
std::string format_trace(const std::vector<TraceEntry>& trace);

}  // namespace wks
