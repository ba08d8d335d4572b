#pragma once

#include "wks/constants.hpp"
#include "wks/metric.hpp"
#include "wks/parser_engine.hpp"
#include "wks/phase_tree.hpp"
#include "wks/weights.hpp"

namespace wks {

// Request semantics of weighted k-server on one uniform metric: a request is a
// single point, an anchor set satisfies exactly the requests it contains, and a
// level-1 phase opening on request p contributes the unit demand u_p. Critical
// sets draw from the whole metric at every level.
class WeightedDomain {
 public:
  using Request = PointId;

  WeightedDomain(Metric metric, WeightVector weights, Constants constants)
      : metric_(metric), weights_(std::move(weights)), constants_(std::move(constants)) {
    weights_.require_weight_constrained();
    if (metric_.n_points < 1) throw invalid_input("metric needs at least one point");
  }

  int k() const { return weights_.k(); }
  const Metric& metric() const { return metric_; }
  const WeightVector& weights() const { return weights_; }
  const Constants& constants() const { return constants_; }

  bool satisfied(const AnchorSet& anchor, PointId r) const { return anchor.contains(r); }
  bool touches(PointId p, PointId r) const { return p == r; }
  PointId leaf_critical(PointId r) const { return r; }
  DemandVector leaf_demand(PointId r) const {
    DemandVector v;
    v.add(r, 1);
    return v;
  }
  std::pair<PointId, PointId> critical_range(int) const {
    return {0, metric_.n_points};
  }
  void validate_request(PointId r) const { metric_.require(r); }
  void validate_anchor(int level, const AnchorSet& anchor) const {
    if (static_cast<int>(anchor.size()) > k() - level)
      throw invalid_input("anchor set of size " + std::to_string(anchor.size()) +
                          " too large for level " + std::to_string(level));
    for (PointId p : anchor.pts) metric_.require(p);
  }
  bool covered(const Configuration& config, PointId r) const {
    for (PointId pos : config)
      if (pos == r) return true;
    return false;
  }
  std::string format_request(PointId r) const { return std::to_string(r); }

 private:
  Metric metric_;
  WeightVector weights_;
  Constants constants_;
};

using WeightedPhaseParser = PhaseParser<WeightedDomain>;
using WeightedMultiphaseParser = MultiphaseParser<WeightedDomain>;

// Batch parses. Outcomes follow ParseStatus: the whole string parses, a proper
// prefix parses (with the materialized tree and its length), or no prefix does.
PhaseParseResult parse_phase(int level, const AnchorSet& anchor, const RequestSequence& rho,
                             const Metric& metric, const WeightVector& w,
                             const Constants& constants);

MultiphaseParseResult parse_multiphase(int level, const AnchorSet& anchor,
                                       const RequestSequence& rho, const Metric& metric,
                                       const WeightVector& w, const Constants& constants);

}  // namespace wks
