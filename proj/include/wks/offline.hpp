#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wks/metric.hpp"
#include "wks/phase_tree.hpp"
#include "wks/solution.hpp"
#include "wks/weights.hpp"

// Ground-truth machinery: exact offline optimum via dynamic programming, and
// the verification stack for the per-phase cost lower bound (restriction,
// l-active solutions, hard multiphase, contamination).

namespace wks {

enum class OptMode {
  FixedInitial,  // the initial configuration is given and free to sit anywhere
  FreeInitial,   // the initial configuration is chosen optimally
};

struct OptResult {
  Rat cost;
  Solution witness;  // covers every request; its cost equals `cost`
  OptMode mode;
};

struct OptOptions {
  // Upper bound on the total number of DP table entries (states summed over
  // all steps).  Exceeding it raises budget_exceeded.
  std::size_t max_dp_entries = 50'000'000;
};

// Exact minimum cost of serving `stream`, over all solutions.  When `initial`
// is set the first configuration is fixed (FixedInitial); otherwise it is
// optimized over as well (FreeInitial).
OptResult opt_cost(const RequestSequence& stream, const WeightVector& w, const Metric& metric,
                   const std::optional<Configuration>& initial = std::nullopt,
                   const OptOptions& options = {});

// Checks that `sol` has one configuration per request plus one, and that
// every request is covered by its configuration.  Throws invalid_input
// otherwise.
void require_valid_solution(const Solution& sol, const RequestSequence& stream, int k);

// ---------------------------------------------------------------------------
// Tree locators: a path from a phase-tree root to a descendant node, written
// as slash-separated components.  From a phase node, "x" descends into the
// explore multiphase and "p<ID>" into the exploit multiphase for point ID;
// from a multiphase node, "m<j>" descends into its j-th subphase (0-based).
// The empty locator denotes the root itself.

struct TreeLocator {
  std::vector<std::string> parts;

  static TreeLocator parse(const std::string& text);
  std::string str() const;
};

// A resolved locator: exactly one of `phase` / `multiphase` is non-null.
struct LocatedNode {
  const PhaseTree* phase = nullptr;
  const MultiphaseTree* multiphase = nullptr;

  int level() const;
  std::size_t begin() const;
  std::size_t end() const;
};

LocatedNode locate(const PhaseTree& root, const TreeLocator& locator);

// Restriction of a solution for the root's request span to the span of the
// located node: the slice of configurations bracketing that node's requests.
Solution restrict_solution(const Solution& sol, const PhaseTree& root, const TreeLocator& locator);

// ---------------------------------------------------------------------------
// Contamination.

// For a phase at level l >= 2 and an (l-1)-active solution: the multiphase
// the solution must pay for.  The exploit copy owned by the point under
// server l if that point is critical, the explore multiphase otherwise.
// Returns the one-component locator ("x" or "p<ID>").
TreeLocator hard_multiphase(const PhaseTree& tree, const Solution& sol);

// Whether the (level-1)-active solution `sol` of `tree`'s request sequence is
// lprime-contaminated: at level 1, server lprime sits on the critical point;
// at level l >= 2, at least 2^-(lprime-l+3) of the hard multiphase's
// subphases have restrictions that are (l-2)-active and lprime-contaminated.
// Requires lprime in {level+1, ..., k}.
bool is_contaminated(const PhaseTree& tree, const Solution& sol, int lprime);

struct ContaminationEntry {
  std::string path;   // locator of the phase node within the root tree
  int level = 0;
  bool active = false;  // the restriction is (level-1)-active
  std::string hard;     // hard-multiphase component ("x" or "p<ID>"), if level >= 2 and active
  std::vector<std::pair<int, bool>> contaminated;  // (lprime, flag) for lprime in level+1..k
};

struct ContaminationReport {
  std::vector<ContaminationEntry> entries;  // one per phase node, preorder
  bool root_contaminated = false;           // any lprime flag set at the root
};

// Evaluates contamination for every phase node of the tree against the
// matching restriction of `sol` (nodes whose restriction is not suitably
// active are reported inactive and carry no flags).
ContaminationReport contamination_report(const PhaseTree& tree, const Solution& sol);

// ---------------------------------------------------------------------------
// Per-phase lower bound.

struct LowerBoundResult {
  bool holds = false;
  Rat opt;     // opt_cost(stream, FreeInitial)
  Rat bound;   // w_k / 2^k
  Rat margin;  // opt / bound
};

// Verifies that the optimum cost of a complete full-depth phase's request
// sequence, over all solutions regardless of initial configuration, is at
// least w_k / 2^k.
LowerBoundResult verify_phase_lower_bound(const PhaseTree& tree, const RequestSequence& stream,
                                          const WeightVector& w, const Metric& metric,
                                          const OptOptions& options = {});

}  // namespace wks
