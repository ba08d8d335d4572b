#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wks/constants.hpp"
#include "wks/metric.hpp"
#include "wks/offline.hpp"
#include "wks/phase_tree.hpp"
#include "wks/strategy.hpp"
#include "wks/strategy_engine.hpp"
#include "wks/weights.hpp"

// Generalized k-server on weighted uniform metrics: k pairwise disjoint
// uniform spaces M_1..M_k, one server per space, tuple requests with one
// point per space, and a request satisfied when some server sits on its
// space's component.  The phase grammar, strategies, and OPT all carry over
// with two substitutions: tuple satisfaction replaces point equality, and a
// level-1 phase's demand is the sum of unit vectors over the opening
// request's components.  Critical sets at level l are taken over the
// projection of the demand onto M_{l+1}.

namespace wks {

// Points of all spaces share one global id range; space l (1-based) occupies
// the contiguous block [offset(l), offset(l) + sizes[l-1]).
struct GksMetric {
  std::vector<std::int64_t> sizes;

  int k() const { return static_cast<int>(sizes.size()); }
  void validate() const;
  PointId total() const;
  PointId offset(int space) const;
  std::pair<PointId, PointId> range(int space) const;  // [lo, hi)
  int space_of(PointId global) const;                  // 1-based
  std::int64_t index_of(PointId global) const;         // position within its space
  PointId global(int space, std::int64_t index) const;
};

// A request: one global point id per space, component l-1 lying in space l.
using GksRequest = std::vector<PointId>;

// Textual form: parenthesized comma-separated per-space indices, e.g. "(0,3)".
std::string format_gks_request(const GksMetric& metric, const GksRequest& r);
std::vector<GksRequest> parse_gks_requests(const std::string& text, const GksMetric& metric);

// Domain hooks plugging the generalized game into the shared parser and
// strategy engines.
class GksDomain {
 public:
  using Request = GksRequest;

  GksDomain(GksMetric metric, WeightVector weights, Constants constants);

  int k() const { return weights_.k(); }
  const GksMetric& metric() const { return metric_; }
  const WeightVector& weights() const { return weights_; }
  const Constants& constants() const { return constants_; }

  bool satisfied(const AnchorSet& anchor, const Request& r) const;
  bool touches(PointId p, const Request& r) const;
  PointId leaf_critical(const Request& r) const { return r[0]; }
  DemandVector leaf_demand(const Request& r) const;
  std::pair<PointId, PointId> critical_range(int level) const;  // M_{level+1}
  void validate_request(const Request& r) const;
  void validate_anchor(int level, const AnchorSet& anchor) const;
  bool covered(const Configuration& config, const Request& r) const;
  std::string format_request(const Request& r) const { return format_gks_request(metric_, r); }

 private:
  GksMetric metric_;
  WeightVector weights_;
  Constants constants_;
};

// Parsing.
PhaseParseResult gks_parse_phase(int level, const AnchorSet& anchor,
                                 const std::vector<GksRequest>& stream, const GksMetric& metric,
                                 const WeightVector& w, const Constants& constants);
MultiphaseParseResult gks_parse_multiphase(int level, const AnchorSet& anchor,
                                           const std::vector<GksRequest>& stream,
                                           const GksMetric& metric, const WeightVector& w,
                                           const Constants& constants);

// Strategies.  Configurations hold one global point per space, server l at
// component l-1; strategies for level l move only the servers of M_1..M_l.
RunResult gks_run_1_phase(const AnchorSet& anchor, const Configuration& c0,
                          const std::vector<GksRequest>& stream, const GksMetric& metric,
                          const WeightVector& w, const Constants& constants, std::uint64_t seed);
RunResult gks_run_multiphase(int level, const AnchorSet& anchor, const Configuration& c0,
                             const std::vector<GksRequest>& stream, const GksMetric& metric,
                             const WeightVector& w, const Constants& constants,
                             std::uint64_t seed);
RunResult gks_run_phase(int level, const AnchorSet& anchor, const Configuration& c0,
                        const std::vector<GksRequest>& stream, const GksMetric& metric,
                        const WeightVector& w, const Constants& constants, std::uint64_t seed);
ServeReport gks_serve_online(const Configuration& c0, const std::vector<GksRequest>& stream,
                             const GksMetric& metric, const WeightVector& w,
                             const Constants& constants, std::uint64_t seed);

// Exact offline optimum (per-space DP over requested points).
OptResult gks_opt_cost(const std::vector<GksRequest>& stream, const WeightVector& w,
                       const GksMetric& metric,
                       const std::optional<Configuration>& initial = std::nullopt,
                       const OptOptions& options = {});

// Lifting a weighted k-server instance: k same-sized copies of its metric,
// request p becoming the tuple with p's copy in every space.  A lifted run
// with a matched seed reproduces the weighted run exactly (boundaries,
// per-phase costs, critical structure).
GksMetric lift_metric(const Metric& metric, int k);
GksRequest lift_request(const GksMetric& gks, PointId p);
std::vector<GksRequest> lift_requests(const GksMetric& gks, const RequestSequence& stream);
Configuration lift_configuration(const GksMetric& gks, const Configuration& c);

}  // namespace wks
