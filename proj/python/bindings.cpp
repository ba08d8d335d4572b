// Python bindings for the main operations: phase parsing, online strategies,
// the exact offline optimum, generators, and the derived constants.
// Rationals cross the boundary as exact "p/q" strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "wks/adversary.hpp"
#include "wks/constants.hpp"
#include "wks/offline.hpp"
#include "wks/parser.hpp"
#include "wks/strategy.hpp"
#include "wks/weights.hpp"

namespace py = pybind11;
using namespace wks;

namespace {

WeightVector weights_from(const std::vector<std::string>& ws) {
  std::vector<Rat> raw;
  raw.reserve(ws.size());
  for (const std::string& s : ws) raw.push_back(parse_rational(s));
  WeightVector w{raw};
  w.validate();
  return w;
}

Constants constants_from(const std::optional<std::vector<long long>>& d) {
  if (!d) return Constants::theoretical();
  std::vector<Int> ds;
  ds.reserve(d->size());
  for (long long v : *d) ds.emplace_back(static_cast<long>(v));
  return Constants::with_d_profile(ds);
}

AnchorSet anchor_from(const std::vector<PointId>& pts) {
  AnchorSet h;
  for (PointId p : pts) h = h.with(p);
  return h;
}

std::string status_str(ParseStatus s) {
  switch (s) {
    case ParseStatus::WholeStringParses: return "whole-string-parses";
    case ParseStatus::ProperPrefix: return "proper-prefix";
    case ParseStatus::NoPhasePrefix: return "no-phase-prefix";
  }
  return "?";
}

template <typename TreeT>
py::dict parse_dict(const ParseResult<TreeT>& res) {
  py::dict out;
  out["status"] = status_str(res.status);
  out["consumed"] = res.consumed;
  if (res.tree) {
    out["tree"] = to_canonical(*res.tree);
    out["demand"] = res.tree->demand.str();
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(wkserver, m) {
  m.doc() = "weighted k-server on uniform metrics: parsing, strategies, offline optimum";

  m.def(
      "round_weights",
      [](const std::vector<std::string>& ws) {
        WeightVector rounded = round_weights(weights_from(ws));
        std::vector<std::string> out;
        out.reserve(rounded.w.size());
        for (const Rat& r : rounded.w) out.push_back(to_string(r));
        return out;
      },
      py::arg("weights"),
      "Round weights upward to the nearest divisibility-respecting vector.");

  m.def(
      "constants",
      [](int k, const std::optional<std::vector<long long>>& d) {
        Constants c = constants_from(d);
        py::dict out;
        std::vector<std::string> ds, cs;
        for (int level = 1; level <= k; ++level) {
          ds.push_back(to_string(Rat(c.d(level))));
          cs.push_back(to_string(c.c(level)));
        }
        out["d"] = ds;
        out["c"] = cs;
        return out;
      },
      py::arg("k"), py::arg("d") = std::nullopt,
      "Critical-set sizes and competitive-ratio constants for levels 1..k.");

  m.def(
      "harmonic", [](unsigned long n) { return to_string(harmonic(n)); }, py::arg("n"),
      "Exact harmonic number H(n).");

  m.def(
      "parse_phase",
      [](int level, const std::vector<PointId>& anchor, const RequestSequence& requests,
         std::int64_t points, const std::vector<std::string>& weights,
         const std::optional<std::vector<long long>>& d) {
        return parse_dict(parse_phase(level, anchor_from(anchor), requests, Metric{points},
                                      weights_from(weights), constants_from(d)));
      },
      py::arg("level"), py::arg("anchor"), py::arg("requests"), py::arg("points"),
      py::arg("weights"), py::arg("d") = std::nullopt,
      "Longest-prefix parse of a request stream as a phase.");

  m.def(
      "parse_multiphase",
      [](int level, const std::vector<PointId>& anchor, const RequestSequence& requests,
         std::int64_t points, const std::vector<std::string>& weights,
         const std::optional<std::vector<long long>>& d) {
        return parse_dict(parse_multiphase(level, anchor_from(anchor), requests, Metric{points},
                                           weights_from(weights), constants_from(d)));
      },
      py::arg("level"), py::arg("anchor"), py::arg("requests"), py::arg("points"),
      py::arg("weights"), py::arg("d") = std::nullopt,
      "Longest-prefix parse of a request stream as a multiphase.");

  m.def(
      "serve_online",
      [](const Configuration& c0, const RequestSequence& requests, std::int64_t points,
         const std::vector<std::string>& weights, std::uint64_t seed,
         const std::optional<std::vector<long long>>& d) {
        ServeReport report = serve_online(c0, requests, Metric{points}, weights_from(weights),
                                          constants_from(d), seed);
        py::dict out;
        out["cost"] = to_string(report.total_cost);
        out["completed_phases"] = report.completed_phases;
        out["trailing_partial"] = report.trailing_partial;
        out["final"] = report.final_config;
        std::vector<std::string> costs;
        for (const Rat& c : report.phase_costs) costs.push_back(to_string(c));
        out["phase_costs"] = costs;
        return out;
      },
      py::arg("c0"), py::arg("requests"), py::arg("points"), py::arg("weights"), py::arg("seed"),
      py::arg("d") = std::nullopt, "Serve a request stream with the randomized online algorithm.");

  m.def(
      "run_phase",
      [](int level, const std::vector<PointId>& anchor, const Configuration& c0,
         const RequestSequence& requests, std::int64_t points,
         const std::vector<std::string>& weights, std::uint64_t seed,
         const std::optional<std::vector<long long>>& d) {
        RunResult run = run_phase(level, anchor_from(anchor), c0, requests, Metric{points},
                                  weights_from(weights), constants_from(d), seed);
        py::dict out;
        out["terminated"] = run.status == RunStatus::Terminated;
        out["consumed"] = run.consumed;
        out["cost"] = to_string(run.cost);
        out["final"] = run.final_config;
        if (run.demand) out["demand"] = run.demand->str();
        return out;
      },
      py::arg("level"), py::arg("anchor"), py::arg("c0"), py::arg("requests"), py::arg("points"),
      py::arg("weights"), py::arg("seed"), py::arg("d") = std::nullopt,
      "Run the level-l phase strategy on a request stream.");

  m.def(
      "opt_cost",
      [](const RequestSequence& requests, std::int64_t points,
         const std::vector<std::string>& weights, const std::optional<Configuration>& c0,
         std::size_t budget) {
        OptOptions options;
        options.max_dp_entries = budget;
        OptResult res = opt_cost(requests, weights_from(weights), Metric{points}, c0, options);
        py::dict out;
        out["cost"] = to_string(res.cost);
        out["witness"] = res.witness.configs;
        return out;
      },
      py::arg("requests"), py::arg("points"), py::arg("weights"), py::arg("c0") = std::nullopt,
      py::arg("budget") = std::size_t{50'000'000},
      "Exact offline optimum; the initial configuration is free unless c0 is given.");

  m.def(
      "gen_phase_completing",
      [](std::int64_t points, const std::vector<std::string>& weights, std::size_t phases,
         std::uint64_t seed, const std::optional<std::vector<long long>>& d) {
        GeneratorSpec spec;
        spec.kind = GeneratorSpec::Kind::PhaseCompleting;
        spec.metric = Metric{points};
        spec.weights = weights_from(weights);
        spec.constants = constants_from(d);
        spec.seed = seed;
        spec.phases = phases;
        GeneratedStream gs = gen_phase_completing(spec);
        py::dict out;
        out["requests"] = gs.requests;
        out["boundaries"] = gs.boundaries;
        return out;
      },
      py::arg("points"), py::arg("weights"), py::arg("phases"), py::arg("seed"),
      py::arg("d") = std::nullopt,
      "Generate a stream of complete top-level phases with known boundaries.");

  m.def(
      "verify_phase_lower_bound",
      [](const RequestSequence& requests, std::int64_t points,
         const std::vector<std::string>& weights, const std::optional<std::vector<long long>>& d) {
        WeightVector w = weights_from(weights);
        Constants constants = constants_from(d);
        Metric metric{points};
        auto res = parse_phase(w.k(), AnchorSet{}, requests, metric, w, constants);
        if (res.status != ParseStatus::WholeStringParses)
          throw invalid_input("the stream is not a complete top-level phase");
        LowerBoundResult lb = verify_phase_lower_bound(*res.tree, requests, w, metric);
        py::dict out;
        out["holds"] = lb.holds;
        out["opt"] = to_string(lb.opt);
        out["bound"] = to_string(lb.bound);
        return out;
      },
      py::arg("requests"), py::arg("points"), py::arg("weights"), py::arg("d") = std::nullopt,
      "Check that every solution of a complete phase pays at least w_k / 2^k.");

  py::register_exception<budget_exceeded>(m, "BudgetExceeded");
  py::register_exception<invariant_violation>(m, "InvariantViolation");
  py::register_exception<metric_too_small>(m, "MetricTooSmall");
  py::register_exception<invalid_input>(m, "InvalidInput");
}
