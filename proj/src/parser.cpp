#include "wks/parser.hpp"

namespace wks {

PhaseParseResult parse_phase(int level, const AnchorSet& anchor, const RequestSequence& rho,
                             const Metric& metric, const WeightVector& w,
                             const Constants& constants) {
  WeightedDomain dom(metric, w, constants);
  return parse_phase_stream(dom, level, anchor, rho);
}

MultiphaseParseResult parse_multiphase(int level, const AnchorSet& anchor,
                                       const RequestSequence& rho, const Metric& metric,
                                       const WeightVector& w, const Constants& constants) {
  WeightedDomain dom(metric, w, constants);
  return parse_multiphase_stream(dom, level, anchor, rho);
}

}  // namespace wks
