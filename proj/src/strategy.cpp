#include "wks/strategy.hpp"

namespace wks {

namespace {

void validate_start(const WeightedDomain& dom, const Configuration& c0) {
  if (static_cast<int>(c0.size()) != dom.k())
    throw invalid_input("initial configuration size disagrees with k");
  for (PointId p : c0) dom.metric().require(p);
}

}  // namespace

RunResult run_1_phase(const AnchorSet& anchor, const Configuration& c0,
                      const RequestSequence& stream, const Metric& metric, const WeightVector& w,
                      const Constants& constants, std::uint64_t seed) {
  WeightedDomain dom(metric, w, constants);
  validate_start(dom, c0);
  PhaseStrategy<WeightedDomain> strat(dom, 1, anchor, c0, Rng(seed));
  return run_strategy(dom, strat, stream);
}

RunResult run_multiphase(int level, const AnchorSet& anchor, const Configuration& c0,
                         const RequestSequence& stream, const Metric& metric,
                         const WeightVector& w, const Constants& constants, std::uint64_t seed) {
  WeightedDomain dom(metric, w, constants);
  validate_start(dom, c0);
  MultiphaseStrategy<WeightedDomain> strat(dom, level, anchor, c0, Rng(seed));
  return run_strategy(dom, strat, stream);
}

RunResult run_phase(int level, const AnchorSet& anchor, const Configuration& c0,
                    const RequestSequence& stream, const Metric& metric, const WeightVector& w,
                    const Constants& constants, std::uint64_t seed) {
  WeightedDomain dom(metric, w, constants);
  validate_start(dom, c0);
  PhaseStrategy<WeightedDomain> strat(dom, level, anchor, c0, Rng(seed));
  return run_strategy(dom, strat, stream);
}

ServeReport serve_online(const Configuration& c0, const RequestSequence& stream,
                         const Metric& metric, const WeightVector& w, const Constants& constants,
                         std::uint64_t seed) {
  WeightedDomain dom(metric, w, constants);
  validate_start(dom, c0);
  Rng rng(seed);
  ServeReport report;
  report.total_requests = stream.size();
  report.final_config = c0;

  Configuration current = c0;
  std::size_t pos = 0;
  int phase_index = 0;
  while (pos < stream.size()) {
    PhaseStrategy<WeightedDomain> strat(
        dom, dom.k(), AnchorSet{}, current,
        rng.fork(Rng::kForkTopPhase, static_cast<std::uint64_t>(phase_index)));
    std::vector<PointId> rest(stream.begin() + static_cast<std::ptrdiff_t>(pos), stream.end());
    RunResult run = run_strategy(dom, strat, rest);
    if (run.consumed == 0)
      throw invariant_violation("phase strategy consumed no requests");
    std::string tag = "t" + std::to_string(phase_index);
    for (TraceEntry& e : run.trace) {
      e.index += pos;
      e.path = e.path.empty() ? tag : tag + "/" + e.path;
      report.trace.push_back(std::move(e));
    }
    for (ExploitStats& st : run.exploit_stats) {
      st.path = st.path.empty() ? tag : tag + "/" + st.path;
      report.exploit_stats.push_back(std::move(st));
    }
    report.total_cost += run.cost;
    report.phase_costs.push_back(run.cost);
    report.phase_lengths.push_back(run.consumed);
    current = run.final_config;
    pos += run.consumed;
    if (run.status == RunStatus::Terminated) {
      ++report.completed_phases;
    } else {
      report.trailing_partial = true;
      break;
    }
    ++phase_index;
  }
  report.final_config = current;
  return report;
}

}  // namespace wks
