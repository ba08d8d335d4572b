#include "wks/adversary.hpp"

#include <algorithm>
#include <memory>
#include <set>

#include "wks/errors.hpp"
#include "wks/parser.hpp"
#include "wks/rng.hpp"

namespace wks {

RequestSequence gen_uniform(const GeneratorSpec& spec) {
  if (spec.metric.n_points < 1) throw invalid_input("metric has no points");
  Rng rng = Rng(spec.seed).fork(Rng::kForkGenerator, 0);
  RequestSequence out;
  out.reserve(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i)
    out.push_back(static_cast<PointId>(rng.below(static_cast<std::uint64_t>(spec.metric.n_points))));
  return out;
}

namespace {

// A point never requested in the current phase.  Such a point is consumed by
// every unopened or exploring sub-parser and rejected by every completed one,
// so feeding it always makes progress: it opens what needs opening and closes
// what needs closing.
PointId fresh_point(const Metric& metric, const std::set<PointId>& used, Rng& rng) {
  std::vector<PointId> candidates;
  for (PointId p = 0; p < metric.n_points; ++p)
    if (used.find(p) == used.end()) candidates.push_back(p);
  if (candidates.empty())
    throw metric_too_small("generator ran out of unused points; enlarge the metric");
  return candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
}

// Consumable points the chaser prefers: demand-bearing points while exploring,
// exploit-copy owners afterwards.  Feeding an owner is absorbed by its own
// copy but advances or finishes the others, staggering their terminations.
std::vector<PointId> chase_candidates(const WeightedPhaseParser& parser) {
  std::vector<PointId> out;
  if (parser.level() == 1) return out;
  if (parser.in_explore()) {
    for (const auto& [p, count] : parser.demand().counts)
      if (count > 0 && parser.would_consume(p)) out.push_back(p);
    return out;
  }
  for (const auto& slot : parser.exploit_slots())
    if (parser.would_consume(slot.point)) out.push_back(slot.point);
  return out;
}

std::vector<PointId> padding_candidates(const WeightedPhaseParser& parser, const Metric& metric) {
  std::vector<PointId> out;
  for (PointId p = 0; p < metric.n_points; ++p)
    if (parser.would_consume(p)) out.push_back(p);
  return out;
}

GeneratedStream drive_phases(const GeneratorSpec& spec) {
  WeightedDomain dom(spec.metric, spec.weights, spec.constants);
  Rng rng = Rng(spec.seed).fork(Rng::kForkGenerator, 1);
  GeneratedStream out;

  std::unique_ptr<WeightedPhaseParser> previous;
  for (std::size_t t = 0; t < spec.phases; ++t) {
    WeightedPhaseParser parser(dom, dom.k(), AnchorSet{}, out.requests.size());
    std::set<PointId> used;
    bool opened = false;
    while (!parser.complete()) {
      if (out.requests.size() >= spec.max_requests)
        throw budget_exceeded("generator exceeded its request budget of " +
                              std::to_string(spec.max_requests));
      PointId r = -1;
      if (opened && rng.chance(spec.pad_percent, 100)) {
        std::vector<PointId> candidates;
        if (rng.chance(spec.chase_percent, 100)) candidates = chase_candidates(parser);
        if (candidates.empty()) candidates = padding_candidates(parser, spec.metric);
        if (!candidates.empty())
          r = candidates[static_cast<std::size_t>(rng.below(candidates.size()))];
      }
      if (r < 0) r = fresh_point(spec.metric, used, rng);
      if (!opened) {
        // The opener of every phase after the first must be rejected by the
        // previous phase's parser, or the parse boundary would slide.
        while (previous && previous->would_consume(r)) {
          used.insert(r);
          r = fresh_point(spec.metric, used, rng);
        }
        opened = true;
      }
      if (!parser.feed(r))
        throw invariant_violation("generator fed a terminating request before completion");
      out.requests.push_back(r);
      used.insert(r);
    }
    out.boundaries.push_back(out.requests.size());
    previous = std::make_unique<WeightedPhaseParser>(std::move(parser));
  }

  // Re-parse the emitted stream and confirm it splits into exactly the
  // requested complete phases at the recorded boundaries.
  std::size_t begin = 0;
  for (std::size_t t = 0; t < out.boundaries.size(); ++t) {
    RequestSequence rest(out.requests.begin() + static_cast<std::ptrdiff_t>(begin),
                         out.requests.end());
    PhaseParseResult res =
        parse_phase(dom.k(), AnchorSet{}, rest, spec.metric, spec.weights, spec.constants);
    bool last = t + 1 == out.boundaries.size();
    bool ok = last ? res.status == ParseStatus::WholeStringParses
                   : res.status == ParseStatus::ProperPrefix;
    if (!ok || begin + res.consumed != out.boundaries[t])
      throw invariant_violation("generated stream does not re-parse at the recorded boundaries");
    begin = out.boundaries[t];
  }
  return out;
}

}  // namespace

GeneratedStream gen_phase_completing(const GeneratorSpec& spec) {
  GeneratorSpec s = spec;
  s.chase_percent = 0;
  return drive_phases(s);
}

GeneratedStream gen_critical_chaser(const GeneratorSpec& spec) {
  GeneratorSpec s = spec;
  if (spec.chase_percent == 0) s.chase_percent = 70;
  if (spec.pad_percent == 25) s.pad_percent = 60;
  return drive_phases(s);
}

}  // namespace wks
