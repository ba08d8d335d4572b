#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "wks/demand.hpp"
#include "wks/metric.hpp"

namespace wks {

struct MultiphaseTree;
using MultiphaseTreePtr = std::shared_ptr<const MultiphaseTree>;

// A parsed phase. Level 1 is a leaf (a run over anchor ∪ {critical_point} containing
// the critical point); level >= 2 pairs an explore multiphase with one exploit
// multiphase per critical point. Spans are [begin, end) offsets into the parsed
// request sequence.
struct PhaseTree {
  int level = 1;
  AnchorSet anchor;
  std::size_t begin = 0, end = 0;
  DemandVector demand;

  // level 1:
  PointId critical_point = -1;

  // level >= 2:
  MultiphaseTreePtr explore;
  std::vector<PointId> critical_set;  // explore's critical set, (demand desc, index asc)
  std::vector<std::pair<PointId, MultiphaseTreePtr>> exploit;  // in critical_set order

  std::size_t length() const { return end - begin; }
  // {critical_point} for leaves, critical_set for inner phases.
  std::vector<PointId> critical() const;
};

using PhaseTreePtr = std::shared_ptr<const PhaseTree>;

// A parsed multiphase: exactly w_{level+1}/w_level phases of the same level and anchor.
struct MultiphaseTree {
  int level = 1;
  AnchorSet anchor;
  std::size_t begin = 0, end = 0;
  DemandVector demand;
  std::vector<PhaseTreePtr> children;
  std::vector<PointId> critical_set;  // top_{d_{level+1}-1} of demand

  std::size_t length() const { return end - begin; }
};

enum class ParseStatus {
  WholeStringParses,  // the entire input is a (multi)phase request sequence
  ProperPrefix,       // a proper prefix parses and the next request breaks it
  NoPhasePrefix,      // no prefix parses
};

template <typename TreeT>
struct ParseResult {
  ParseStatus status = ParseStatus::NoPhasePrefix;
  std::shared_ptr<const TreeT> tree;  // null iff NoPhasePrefix
  std::size_t consumed = 0;           // length of the parsed prefix
};

using PhaseParseResult = ParseResult<PhaseTree>;
using MultiphaseParseResult = ParseResult<MultiphaseTree>;

// Canonical nested textual form, stable across runs; used by golden tests and the
// `parse` subcommand. Grammar (documented in the README):
//   phase leaf:  (phase 1 H={...} [b,e) p=ID)
//   phase node:  (phase L H={...} [b,e) explore=MULTIPHASE exploit={ID=MULTIPHASE,...})
//   multiphase:  (multiphase L H={...} [b,e) S={...} PHASE PHASE ...)
std::string to_canonical(const PhaseTree& tree);
std::string to_canonical(const MultiphaseTree& tree);

// Recomputes a tree's demand vector bottom-up (tests compare with the cached one).
DemandVector recompute_demand(const PhaseTree& tree);
DemandVector recompute_demand(const MultiphaseTree& tree);

}  // namespace wks
