// Command-line front end: parse | simulate | opt | verify | gen | bench.
// Exit codes: 0 success, 1 usage or input error, 2 invariant violation
// (including failed verification), 3 resource budget exceeded.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "wks/adversary.hpp"
#include "wks/errors.hpp"
#include "wks/gks.hpp"
#include "wks/harness.hpp"
#include "wks/offline.hpp"
#include "wks/parser.hpp"
#include "wks/strategy.hpp"

namespace {

using namespace wks;

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    out.push_back(text.substr(pos, comma - pos));
    pos = comma + 1;
  }
  return out;
}

WeightVector load_weights(const std::string& text) {
  std::vector<Rat> raw;
  for (const std::string& item : split_list(text)) raw.push_back(parse_rational(item));
  WeightVector w{raw};
  w.validate();
  WeightVector rounded = round_weights(w);
  if (rounded.w != w.w)
    std::cerr << "note: weights rounded to " << format_weights(rounded)
              << " to enforce divisibility\n";
  return rounded;
}

Constants load_constants(const std::string& text) {
  if (text == "default") return Constants::theoretical();
  std::vector<Int> ds;
  for (const std::string& item : split_list(text)) {
    Rat r = parse_rational(item);
    if (r.get_den() != 1) throw invalid_input("--d entries must be integers");
    ds.push_back(r.get_num());
  }
  return Constants::with_d_profile(ds);
}

GksMetric load_sizes(const std::string& text) {
  GksMetric m;
  for (const std::string& item : split_list(text)) {
    Rat r = parse_rational(item);
    if (r.get_den() != 1) throw invalid_input("--sizes entries must be integers");
    m.sizes.push_back(r.get_num().get_si());
  }
  m.validate();
  return m;
}

std::string read_stream_text(const std::string& file, const std::string& text) {
  if (!text.empty()) return text;
  if (file.empty()) throw invalid_input("provide requests via --input FILE or --text STRING");
  if (file == "-") {
    std::ostringstream buf;
    buf << std::cin.rdbuf();
    return buf.str();
  }
  std::ifstream in(file);
  if (!in) throw invalid_input("cannot open '" + file + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AnchorSet load_anchor(const std::string& text) {
  AnchorSet h;
  if (text.empty()) return h;
  for (const std::string& item : split_list(text)) {
    Rat r = parse_rational(item);
    if (r.get_den() != 1) throw invalid_input("--anchor entries must be integers");
    h = h.with(r.get_num().get_si());
  }
  return h;
}

const char* status_name(ParseStatus s) {
  switch (s) {
    case ParseStatus::WholeStringParses: return "whole-string-parses";
    case ParseStatus::ProperPrefix: return "proper-prefix";
    case ParseStatus::NoPhasePrefix: return "no-phase-prefix";
  }
  return "?";
}

void print_run(const RunResult& run, std::ostream& out) {
  out << "status: "
      << (run.status == RunStatus::Terminated ? "terminated" : "awaiting-more-requests") << "\n";
  out << "consumed: " << run.consumed << "\n";
  out << "cost: " << to_string(run.cost) << "\n";
  out << "final: " << format_configuration(run.final_config) << "\n";
  if (run.demand) out << "demand: " << run.demand->str() << "\n";
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot write '" + path + "'");
  out << content;
}

struct CommonArgs {
  std::string weights = "1,2";
  std::string d = "default";
  std::int64_t points = 20;
  std::string input;
  std::string text;
  bool gks = false;
  std::string sizes;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_stream) {
  cmd->add_option("--weights", args.weights, "comma-separated server weights, lightest first");
  cmd->add_option("--d", args.d, "'default' or comma-separated critical-size profile");
  cmd->add_option("--points", args.points, "number of points in the uniform metric");
  if (with_stream) {
    cmd->add_option("--input", args.input, "request file ('-' for stdin)");
    cmd->add_option("--text", args.text, "requests given inline");
  }
  cmd->add_flag("--gks", args.gks, "generalized mode: tuple requests over disjoint spaces");
  cmd->add_option("--sizes", args.sizes, "generalized mode: per-space point counts");
}

int run_parse(const CommonArgs& args, int level, const std::string& anchor_text, bool multiphase) {
  WeightVector w = load_weights(args.weights);
  Constants constants = load_constants(args.d);
  AnchorSet anchor = load_anchor(anchor_text);
  std::string streamed = read_stream_text(args.input, args.text);

  ParseStatus status;
  std::size_t consumed = 0;
  std::string tree, demand;
  if (args.gks) {
    GksMetric metric = args.sizes.empty() ? lift_metric(Metric{args.points}, w.k())
                                          : load_sizes(args.sizes);
    auto stream = parse_gks_requests(streamed, metric);
    if (multiphase) {
      auto res = gks_parse_multiphase(level, anchor, stream, metric, w, constants);
      status = res.status;
      consumed = res.consumed;
      if (res.tree) tree = to_canonical(*res.tree), demand = res.tree->demand.str();
    } else {
      auto res = gks_parse_phase(level, anchor, stream, metric, w, constants);
      status = res.status;
      consumed = res.consumed;
      if (res.tree) tree = to_canonical(*res.tree), demand = res.tree->demand.str();
    }
  } else {
    Metric metric{args.points};
    RequestSequence stream = parse_requests(streamed);
    if (multiphase) {
      auto res = parse_multiphase(level, anchor, stream, metric, w, constants);
      status = res.status;
      consumed = res.consumed;
      if (res.tree) tree = to_canonical(*res.tree), demand = res.tree->demand.str();
    } else {
      auto res = parse_phase(level, anchor, stream, metric, w, constants);
      status = res.status;
      consumed = res.consumed;
      if (res.tree) tree = to_canonical(*res.tree), demand = res.tree->demand.str();
    }
  }
  std::cout << "status: " << status_name(status) << "\n";
  std::cout << "consumed: " << consumed << "\n";
  if (!demand.empty()) std::cout << "demand: " << demand << "\n";
  if (!tree.empty()) std::cout << "tree: " << tree << "\n";
  return 0;
}

Configuration load_c0(const std::string& text, int k, bool gks, const GksMetric* gm) {
  if (text.empty()) {
    Configuration c(static_cast<std::size_t>(k), 0);
    if (gks && gm)
      for (int space = 1; space <= k; ++space)
        c[static_cast<std::size_t>(space - 1)] = gm->global(space, 0);
    return c;
  }
  Configuration c = parse_configuration(text);
  if (gks && gm) {
    // Generalized configurations are written as per-space indices.
    for (int space = 1; space <= static_cast<int>(c.size()); ++space)
      c[static_cast<std::size_t>(space - 1)] =
          gm->global(space, c[static_cast<std::size_t>(space - 1)]);
  }
  return c;
}

int run_simulate(const CommonArgs& args, const std::string& mode, int level,
                 const std::string& anchor_text, const std::string& c0_text, std::uint64_t seed,
                 const std::string& trace_out) {
  WeightVector w = load_weights(args.weights);
  Constants constants = load_constants(args.d);
  AnchorSet anchor = load_anchor(anchor_text);
  std::string streamed = read_stream_text(args.input, args.text);
  if (level <= 0) level = w.k();

  std::vector<TraceEntry> trace;
  if (args.gks) {
    GksMetric metric = args.sizes.empty() ? lift_metric(Metric{args.points}, w.k())
                                          : load_sizes(args.sizes);
    auto stream = parse_gks_requests(streamed, metric);
    Configuration c0 = load_c0(c0_text, w.k(), true, &metric);
    if (mode == "online") {
      ServeReport report = gks_serve_online(c0, stream, metric, w, constants, seed);
      std::cout << "completed_phases: " << report.completed_phases << "\n";
      std::cout << "trailing_partial: " << (report.trailing_partial ? "yes" : "no") << "\n";
      std::cout << "cost: " << to_string(report.total_cost) << "\n";
      std::cout << "final: " << format_configuration(report.final_config) << "\n";
      trace = report.trace;
    } else {
      RunResult run =
          mode == "1phase"
              ? gks_run_1_phase(anchor, c0, stream, metric, w, constants, seed)
              : (mode == "multiphase"
                     ? gks_run_multiphase(level, anchor, c0, stream, metric, w, constants, seed)
                     : gks_run_phase(level, anchor, c0, stream, metric, w, constants, seed));
      print_run(run, std::cout);
      trace = run.trace;
    }
  } else {
    Metric metric{args.points};
    RequestSequence stream = parse_requests(streamed);
    Configuration c0 = load_c0(c0_text, w.k(), false, nullptr);
    if (mode == "online") {
      ServeReport report = serve_online(c0, stream, metric, w, constants, seed);
      std::cout << "completed_phases: " << report.completed_phases << "\n";
      std::cout << "trailing_partial: " << (report.trailing_partial ? "yes" : "no") << "\n";
      std::cout << "cost: " << to_string(report.total_cost) << "\n";
      std::cout << "final: " << format_configuration(report.final_config) << "\n";
      trace = report.trace;
    } else {
      RunResult run =
          mode == "1phase"
              ? run_1_phase(anchor, c0, stream, metric, w, constants, seed)
              : (mode == "multiphase"
                     ? run_multiphase(level, anchor, c0, stream, metric, w, constants, seed)
                     : run_phase(level, anchor, c0, stream, metric, w, constants, seed));
      print_run(run, std::cout);
      trace = run.trace;
    }
  }
  if (!trace_out.empty()) write_text_file(trace_out, format_trace(trace));
  return 0;
}

int run_opt(const CommonArgs& args, const std::string& mode, const std::string& c0_text,
            std::size_t budget) {
  WeightVector w = load_weights(args.weights);
  std::string streamed = read_stream_text(args.input, args.text);
  OptOptions options;
  options.max_dp_entries = budget;

  OptResult res{Rat(0), Solution{}, OptMode::FreeInitial};
  if (args.gks) {
    GksMetric metric = args.sizes.empty() ? lift_metric(Metric{args.points}, w.k())
                                          : load_sizes(args.sizes);
    auto stream = parse_gks_requests(streamed, metric);
    std::optional<Configuration> c0;
    if (mode == "fixed") c0 = load_c0(c0_text, w.k(), true, &metric);
    res = gks_opt_cost(stream, w, metric, c0, options);
  } else {
    Metric metric{args.points};
    RequestSequence stream = parse_requests(streamed);
    std::optional<Configuration> c0;
    if (mode == "fixed") c0 = load_c0(c0_text, w.k(), false, nullptr);
    res = opt_cost(stream, w, metric, c0, options);
  }
  std::cout << "cost: " << to_string(res.cost) << "\n";
  std::cout << "witness:\n";
  for (const Configuration& c : res.witness.configs)
    std::cout << "  " << format_configuration(c) << "\n";
  return 0;
}

int run_verify(const CommonArgs& args, std::size_t phase_count, std::uint64_t seed) {
  WeightVector w = load_weights(args.weights);
  Constants constants = load_constants(args.d);
  Metric metric{args.points};

  RequestSequence requests;
  std::vector<std::size_t> boundaries;
  if (!args.input.empty() || !args.text.empty()) {
    requests = parse_requests(read_stream_text(args.input, args.text));
    boundaries.push_back(requests.size());
  } else {
    GeneratorSpec spec;
    spec.kind = GeneratorSpec::Kind::PhaseCompleting;
    spec.metric = metric;
    spec.weights = w;
    spec.constants = constants;
    spec.seed = seed;
    spec.phases = phase_count;
    GeneratedStream gs = gen_phase_completing(spec);
    requests = std::move(gs.requests);
    boundaries = std::move(gs.boundaries);
  }

  bool all_hold = true;
  std::size_t begin = 0;
  for (std::size_t t = 0; t < boundaries.size(); ++t) {
    RequestSequence slice(requests.begin() + static_cast<std::ptrdiff_t>(begin),
                          requests.begin() + static_cast<std::ptrdiff_t>(boundaries[t]));
    auto res = parse_phase(w.k(), AnchorSet{}, slice, metric, w, constants);
    if (res.status != ParseStatus::WholeStringParses)
      throw invariant_violation("phase " + std::to_string(t) +
                                " does not parse as a complete phase");
    LowerBoundResult lb = verify_phase_lower_bound(*res.tree, slice, w, metric);
    std::cout << "phase " << t << ": length " << slice.size() << ", opt " << to_string(lb.opt)
              << ", bound " << to_string(lb.bound) << ", margin " << to_decimal(lb.margin, 4)
              << (lb.holds ? "" : "  VIOLATION") << "\n";
    all_hold = all_hold && lb.holds;
    begin = boundaries[t];
  }
  if (!all_hold) {
    std::cerr << "lower-bound violation detected\n";
    return 2;
  }
  std::cout << "all " << boundaries.size() << " phases hold\n";
  return 0;
}

int run_gen(const CommonArgs& args, const std::string& kind, std::size_t length,
            std::size_t phase_count, std::uint64_t seed, const std::string& out,
            bool print_boundaries) {
  GeneratorSpec spec;
  spec.metric = Metric{args.points};
  spec.weights = load_weights(args.weights);
  spec.constants = load_constants(args.d);
  spec.seed = seed;
  spec.length = length;
  spec.phases = phase_count;

  RequestSequence requests;
  std::vector<std::size_t> boundaries;
  if (kind == "uniform") {
    spec.kind = GeneratorSpec::Kind::Uniform;
    requests = gen_uniform(spec);
  } else if (kind == "phase_completing") {
    spec.kind = GeneratorSpec::Kind::PhaseCompleting;
    GeneratedStream gs = gen_phase_completing(spec);
    requests = std::move(gs.requests);
    boundaries = std::move(gs.boundaries);
  } else if (kind == "critical_chaser") {
    spec.kind = GeneratorSpec::Kind::CriticalChaser;
    GeneratedStream gs = gen_critical_chaser(spec);
    requests = std::move(gs.requests);
    boundaries = std::move(gs.boundaries);
  } else {
    throw invalid_input("unknown generator kind '" + kind + "'");
  }

  std::string body = format_requests(requests) + "\n";
  if (out.empty())
    std::cout << body;
  else
    write_text_file(out, body);
  if (print_boundaries && !boundaries.empty()) {
    std::cout << "boundaries:";
    for (std::size_t b : boundaries) std::cout << ' ' << b;
    std::cout << "\n";
  }
  return 0;
}

int run_bench(const std::string& config_file, const std::vector<std::string>& sets,
              const std::string& out_csv) {
  ExperimentConfig config;
  if (!config_file.empty())
    for (const auto& [key, value] : read_config_file(config_file)) config.set(key, value);
  apply_env_overrides(config);
  for (const std::string& kv : sets) {
    std::size_t eq = kv.find('=');
    if (eq == std::string::npos) throw invalid_input("--set expects key=value, got '" + kv + "'");
    config.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!out_csv.empty()) config.set("out_csv", out_csv);
  config.finalize();

  ExperimentReport report = run_experiment(config);
  std::cout << "trials: " << report.trials.size() << "\n";
  if (report.mean_ratio) std::cout << "mean_ratio: " << to_decimal(*report.mean_ratio, 4) << "\n";
  if (report.max_ratio) std::cout << "max_ratio: " << to_decimal(*report.max_ratio, 4) << "\n";
  if (report.mean_alg_per_phase)
    std::cout << "mean_alg_per_phase: " << to_decimal(*report.mean_alg_per_phase, 4) << "\n";
  if (report.bound_mult)
    std::cout << "bound: alg <= " << to_decimal(*report.bound_mult, 4) << " * opt + "
              << to_decimal(*report.bound_add, 4) << "\n";
  std::cout << "violations: " << report.violations << "\n";
  if (!config.out_csv.empty()) std::cout << "csv: " << config.out_csv << "\n";
  return report.violations == 0 ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"weighted k-server on uniform metrics: phase parsing, online strategies, exact "
               "offline optimum, generators, and experiments"};
  app.require_subcommand(1);

  // parse
  CommonArgs parse_args;
  int parse_level = 1;
  std::string parse_anchor;
  bool parse_multi = false;
  CLI::App* cmd_parse = app.add_subcommand("parse", "parse a request stream as a phase/multiphase");
  add_common(cmd_parse, parse_args, true);
  cmd_parse->add_option("--level", parse_level, "grammar level")->required();
  cmd_parse->add_option("--anchor", parse_anchor, "comma-separated anchor points");
  cmd_parse->add_flag("--multiphase", parse_multi, "parse a multiphase instead of a phase");

  // simulate
  CommonArgs sim_args;
  std::string sim_mode = "online", sim_anchor, sim_c0, sim_trace;
  int sim_level = 0;
  std::uint64_t sim_seed = 1;
  CLI::App* cmd_sim = app.add_subcommand("simulate", "run the randomized online strategies");
  add_common(cmd_sim, sim_args, true);
  cmd_sim->add_option("--mode", sim_mode, "online | phase | multiphase | 1phase");
  cmd_sim->add_option("--level", sim_level, "strategy level (default k)");
  cmd_sim->add_option("--anchor", sim_anchor, "comma-separated anchor points");
  cmd_sim->add_option("--c0", sim_c0, "initial configuration (lightest first)");
  cmd_sim->add_option("--seed", sim_seed, "random seed");
  cmd_sim->add_option("--trace", sim_trace, "write the per-request trace to this file");

  // opt
  CommonArgs opt_args;
  std::string opt_mode = "free", opt_c0;
  std::size_t opt_budget = 50'000'000;
  CLI::App* cmd_opt = app.add_subcommand("opt", "exact offline optimum (dynamic program)");
  add_common(cmd_opt, opt_args, true);
  cmd_opt->add_option("--mode", opt_mode, "free | fixed initial configuration");
  cmd_opt->add_option("--c0", opt_c0, "initial configuration for --mode fixed");
  cmd_opt->add_option("--budget", opt_budget, "maximum DP table entries");

  // verify
  CommonArgs verify_args;
  std::size_t verify_phases = 10;
  std::uint64_t verify_seed = 1;
  CLI::App* cmd_verify =
      app.add_subcommand("verify", "check the per-phase optimum lower bound w_k/2^k");
  add_common(cmd_verify, verify_args, true);
  cmd_verify->add_option("--phases", verify_phases, "number of phases to generate and check");
  cmd_verify->add_option("--seed", verify_seed, "generator seed");

  // gen
  CommonArgs gen_args;
  std::string gen_kind = "phase_completing", gen_out;
  std::size_t gen_length = 100, gen_phases = 5;
  std::uint64_t gen_seed = 1;
  bool gen_boundaries = false;
  CLI::App* cmd_gen = app.add_subcommand("gen", "generate request sequences");
  add_common(cmd_gen, gen_args, false);
  cmd_gen->add_option("--kind", gen_kind, "uniform | phase_completing | critical_chaser");
  cmd_gen->add_option("--length", gen_length, "length for --kind uniform");
  cmd_gen->add_option("--phases", gen_phases, "phase count for parser-guided kinds");
  cmd_gen->add_option("--seed", gen_seed, "generator seed");
  cmd_gen->add_option("--out", gen_out, "output file (default stdout)");
  cmd_gen->add_flag("--boundaries", gen_boundaries, "also print phase boundaries");

  // bench
  std::string bench_config, bench_out;
  std::vector<std::string> bench_sets;
  CLI::App* cmd_bench = app.add_subcommand("bench", "run a seeded experiment and emit CSV");
  cmd_bench->add_option("--config", bench_config, "key=value config file");
  cmd_bench->add_option("--set", bench_sets, "override a config key (key=value), repeatable");
  cmd_bench->add_option("--out", bench_out, "CSV output path");

  try {
    app.parse(argc, argv);
    if (cmd_parse->parsed())
      return run_parse(parse_args, parse_level, parse_anchor, parse_multi);
    if (cmd_sim->parsed())
      return run_simulate(sim_args, sim_mode, sim_level, sim_anchor, sim_c0, sim_seed, sim_trace);
    if (cmd_opt->parsed()) return run_opt(opt_args, opt_mode, opt_c0, opt_budget);
    if (cmd_verify->parsed()) return run_verify(verify_args, verify_phases, verify_seed);
    if (cmd_gen->parsed())
      return run_gen(gen_args, gen_kind, gen_length, gen_phases, gen_seed, gen_out,
                     gen_boundaries);
    if (cmd_bench->parsed()) return run_bench(bench_config, bench_sets, bench_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const budget_exceeded& e) {
    std::cerr << "error (budget): " << e.what() << "\n";
    return 3;
  } catch (const invariant_violation& e) {
    std::cerr << "error (invariant): " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
