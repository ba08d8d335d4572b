#pragma once

#include <cstdint>
#include <vector>

#include "wks/constants.hpp"
#include "wks/parser.hpp"
#include "wks/strategy_engine.hpp"

// Randomized online strategies for weighted k-server on a uniform metric.
// Each run_* function plays the corresponding strategy against the stream
// until it terminates or the stream runs out, and reports the consumed
// prefix, the demand vector (on termination), the movement cost, and a
// per-request trace.  serve_online chains full-depth phases forever, which is
// the complete online algorithm.

namespace wks {

RunResult run_1_phase(const AnchorSet& anchor, const Configuration& c0,
                      const RequestSequence& stream, const Metric& metric, const WeightVector& w,
                      const Constants& constants, std::uint64_t seed);

RunResult run_multiphase(int level, const AnchorSet& anchor, const Configuration& c0,
                         const RequestSequence& stream, const Metric& metric,
                         const WeightVector& w, const Constants& constants, std::uint64_t seed);

RunResult run_phase(int level, const AnchorSet& anchor, const Configuration& c0,
                    const RequestSequence& stream, const Metric& metric, const WeightVector& w,
                    const Constants& constants, std::uint64_t seed);

// Full online algorithm: repeatedly run a (k, {})-phase strategy, each phase
// starting from the previous one's final configuration.
struct ServeReport {
  std::size_t total_requests = 0;
  int completed_phases = 0;
  bool trailing_partial = false;       // stream ended inside an unfinished phase
  Rat total_cost = 0;
  std::vector<Rat> phase_costs;        // one entry per phase, partial last included
  std::vector<std::size_t> phase_lengths;
  Configuration final_config;
  std::vector<TraceEntry> trace;       // indices are global stream positions
  std::vector<ExploitStats> exploit_stats;
};

ServeReport serve_online(const Configuration& c0, const RequestSequence& stream,
                         const Metric& metric, const WeightVector& w, const Constants& constants,
                         std::uint64_t seed);

}  // namespace wks
