#include "wks/offline.hpp"

#include <algorithm>
#include <cstdint>
#include <map>

#include "wks/errors.hpp"

namespace wks {

namespace {

// The DP searches only solutions that (a) keep every server on a point of
// the request sequence or the initial configuration, and (b) move at most
// one server per step, onto the current request, and only when the previous
// configuration misses it.  This loses no generality: in any solution, a
// move of server s to point q can be postponed to the first later step whose
// coverage relies on s sitting at q (and dropped if no such step exists).
// That step requests q, coverage at the intervening steps is unaffected, and
// the move's cost can only disappear.  Iterating yields an equally cheap
// solution in normal form: every move targets the current request at a step
// the remaining servers miss, so at most one server moves per step and all
// positions after C_0 come from the request sequence.

struct Entry {
  Rat cost;
  std::uint64_t prev = 0;  // predecessor state key in the previous layer
};

using Layer = std::map<std::uint64_t, Entry>;

std::vector<std::size_t> decode_state(std::uint64_t key, int k, std::uint64_t base) {
  std::vector<std::size_t> digits(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    digits[static_cast<std::size_t>(i)] = key % base;
    key /= base;
  }
  return digits;
}

std::uint64_t encode_state(const std::vector<std::size_t>& digits, std::uint64_t base) {
  std::uint64_t key = 0;
  for (std::size_t i = digits.size(); i-- > 0;) key = key * base + digits[i];
  return key;
}

std::size_t point_index(const std::vector<PointId>& pts, PointId p) {
  auto it = std::lower_bound(pts.begin(), pts.end(), p);
  return static_cast<std::size_t>(it - pts.begin());
}

}  // namespace

OptResult opt_cost(const RequestSequence& stream, const WeightVector& w, const Metric& metric,
                   const std::optional<Configuration>& initial, const OptOptions& options) {
  w.validate();
  const int k = w.k();
  for (PointId r : stream) metric.require(r);
  const bool free_mode = !initial.has_value();
  if (initial) {
    if (static_cast<int>(initial->size()) != k)
      throw invalid_input("initial configuration size disagrees with k");
    for (PointId p : *initial) metric.require(p);
  }
  const OptMode mode = free_mode ? OptMode::FreeInitial : OptMode::FixedInitial;

  if (stream.empty()) {
    if (metric.n_points < 1) throw invalid_input("metric has no points");
    Solution wit;
    wit.configs.push_back(free_mode ? Configuration(static_cast<std::size_t>(k), 0) : *initial);
    return OptResult{Rat(0), std::move(wit), mode};
  }

  // Candidate points: everything a normal-form solution can occupy.
  std::vector<PointId> pts;
  if (initial) pts.insert(pts.end(), initial->begin(), initial->end());
  pts.insert(pts.end(), stream.begin(), stream.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  const std::uint64_t base = pts.size() + (free_mode ? 1 : 0);
  const std::size_t sentinel = pts.size();  // "not yet placed", FreeInitial only
  Int space = 1;
  for (int i = 0; i < k; ++i) space *= Int(static_cast<unsigned long>(base));
  if (space > pow2(62))
    throw budget_exceeded("instance too large: configuration space does not fit a state key");

  std::vector<Layer> layers(stream.size() + 1);
  std::vector<std::size_t> start(static_cast<std::size_t>(k), sentinel);
  if (initial)
    for (int s = 0; s < k; ++s)
      start[static_cast<std::size_t>(s)] =
          point_index(pts, (*initial)[static_cast<std::size_t>(s)]);
  layers[0].emplace(encode_state(start, base), Entry{Rat(0), 0});
  std::size_t total_entries = 1;

  for (std::size_t i = 0; i < stream.size(); ++i) {
    const std::size_t ri = point_index(pts, stream[i]);
    Layer& next = layers[i + 1];
    auto relax = [&](std::uint64_t key, Rat cost, std::uint64_t prev) {
      auto it = next.find(key);
      if (it == next.end()) {
        next.emplace(key, Entry{std::move(cost), prev});
        if (++total_entries > options.max_dp_entries)
          throw budget_exceeded("instance too large for the OPT table budget of " +
                                std::to_string(options.max_dp_entries) + " entries");
      } else if (cost < it->second.cost) {
        it->second = Entry{std::move(cost), prev};
      }
    };
    for (const auto& [key, entry] : layers[i]) {
      auto digits = decode_state(key, k, base);
      if (std::find(digits.begin(), digits.end(), ri) != digits.end()) {
        relax(key, entry.cost, key);
        continue;
      }
      for (int s = 0; s < k; ++s) {
        auto moved = digits;
        moved[static_cast<std::size_t>(s)] = ri;
        // Placing a not-yet-placed server is free: the witness starts it there.
        Rat extra = (free_mode && digits[static_cast<std::size_t>(s)] == sentinel)
                        ? Rat(0)
                        : w.at(s + 1);
        relax(encode_state(moved, base), entry.cost + extra, key);
      }
    }
  }

  const Layer& last = layers.back();
  auto best = last.begin();
  for (auto it = std::next(last.begin()); it != last.end(); ++it)
    if (it->second.cost < best->second.cost) best = it;

  std::vector<std::uint64_t> path(stream.size() + 1);
  path.back() = best->first;
  for (std::size_t i = stream.size(); i >= 1; --i)
    path[i - 1] = layers[i].at(path[i]).prev;

  Solution wit;
  std::vector<std::vector<std::size_t>> states;
  states.reserve(path.size());
  for (std::uint64_t key : path) states.push_back(decode_state(key, k, base));
  // A sentinel digit means the server has not been placed yet; its actual
  // initial position is wherever it first gets placed (the placement was
  // free because the server was already there).
  for (int s = 0; s < k; ++s) {
    std::size_t resolved = 0;  // fallback for a server that is never placed
    for (const auto& digits : states)
      if (digits[static_cast<std::size_t>(s)] != sentinel) {
        resolved = digits[static_cast<std::size_t>(s)];
        break;
      }
    for (auto& digits : states) {
      if (digits[static_cast<std::size_t>(s)] == sentinel)
        digits[static_cast<std::size_t>(s)] = resolved;
      else
        break;  // once placed, never a sentinel again
    }
  }
  for (const auto& digits : states) {
    Configuration c(static_cast<std::size_t>(k));
    for (int s = 0; s < k; ++s)
      c[static_cast<std::size_t>(s)] = pts[digits[static_cast<std::size_t>(s)]];
    wit.configs.push_back(std::move(c));
  }

  OptResult out{best->second.cost, std::move(wit), mode};
  require_valid_solution(out.witness, stream, k);
  if (solution_cost(out.witness, w) != out.cost)
    throw invariant_violation("OPT witness cost disagrees with the DP value");
  return out;
}

void require_valid_solution(const Solution& sol, const RequestSequence& stream, int k) {
  if (sol.configs.size() != stream.size() + 1)
    throw invalid_input("solution length disagrees with the request sequence");
  for (const Configuration& c : sol.configs)
    if (static_cast<int>(c.size()) != k)
      throw invalid_input("solution configuration size disagrees with k");
  for (std::size_t i = 0; i < stream.size(); ++i) {
    const Configuration& c = sol.configs[i + 1];
    if (std::find(c.begin(), c.end(), stream[i]) == c.end())
      throw invalid_input("solution misses request at position " + std::to_string(i));
  }
}

// ---------------------------------------------------------------------------
// Locators.

TreeLocator TreeLocator::parse(const std::string& text) {
  TreeLocator loc;
  if (text.empty()) return loc;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t slash = text.find('/', pos);
    if (slash == std::string::npos) slash = text.size();
    if (slash == pos) throw invalid_input("empty locator component in '" + text + "'");
    loc.parts.push_back(text.substr(pos, slash - pos));
    pos = slash + 1;
  }
  return loc;
}

std::string TreeLocator::str() const {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += '/';
    out += parts[i];
  }
  return out;
}

int LocatedNode::level() const { return phase ? phase->level : multiphase->level; }
std::size_t LocatedNode::begin() const { return phase ? phase->begin : multiphase->begin; }
std::size_t LocatedNode::end() const { return phase ? phase->end : multiphase->end; }

namespace {

std::int64_t parse_suffix_number(const std::string& part) {
  if (part.size() < 2) throw invalid_input("bad locator component '" + part + "'");
  std::size_t used = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(part.substr(1), &used);
  } catch (const std::exception&) {
    throw invalid_input("bad locator component '" + part + "'");
  }
  if (used + 1 != part.size() || value < 0)
    throw invalid_input("bad locator component '" + part + "'");
  return value;
}

}  // namespace

LocatedNode locate(const PhaseTree& root, const TreeLocator& locator) {
  const PhaseTree* phase = &root;
  const MultiphaseTree* multiphase = nullptr;
  for (const std::string& part : locator.parts) {
    if (phase) {
      if (phase->level == 1)
        throw invalid_input("locator descends below a level-1 phase");
      if (part == "x") {
        multiphase = phase->explore.get();
      } else if (part[0] == 'p') {
        PointId id = parse_suffix_number(part);
        multiphase = nullptr;
        for (const auto& [p, child] : phase->exploit)
          if (p == id) multiphase = child.get();
        if (!multiphase)
          throw invalid_input("locator names a point outside the critical set: " + part);
      } else {
        throw invalid_input("expected 'x' or 'p<ID>' at a phase node, got '" + part + "'");
      }
      phase = nullptr;
    } else {
      if (part[0] != 'm')
        throw invalid_input("expected 'm<j>' at a multiphase node, got '" + part + "'");
      std::size_t j = static_cast<std::size_t>(parse_suffix_number(part));
      if (j >= multiphase->children.size())
        throw invalid_input("subphase index out of range: " + part);
      phase = multiphase->children[j].get();
      multiphase = nullptr;
    }
  }
  LocatedNode out;
  out.phase = phase;
  out.multiphase = multiphase;
  return out;
}

Solution restrict_solution(const Solution& sol, const PhaseTree& root,
                           const TreeLocator& locator) {
  if (sol.steps() != root.length())
    throw invalid_input("solution length disagrees with the tree's request span");
  LocatedNode node = locate(root, locator);
  return sol.restrict(node.begin() - root.begin, node.end() - root.begin);
}

// ---------------------------------------------------------------------------
// Contamination.

namespace {

void validate_tree_solution(const PhaseTree& tree, const Solution& sol) {
  if (sol.configs.empty()) throw invalid_input("solution has no configurations");
  if (sol.steps() != tree.length())
    throw invalid_input("solution length disagrees with the tree's request span");
  const std::size_t k = sol.configs.front().size();
  for (const Configuration& c : sol.configs)
    if (c.size() != k) throw invalid_input("solution configurations disagree in size");
  if (static_cast<int>(k) < tree.level)
    throw invalid_input("solution has fewer servers than the tree's level");
}

// The multiphase the solution pays for: the exploit copy anchored at the
// point under server `level` when that point is critical, else the explore
// part.  Assumes shape and activity were validated.
const MultiphaseTree* hard_side(const PhaseTree& tree, const Solution& sol, std::string* tag) {
  PointId held = sol.configs.front()[static_cast<std::size_t>(tree.level - 1)];
  for (const auto& [p, child] : tree.exploit)
    if (p == held) {
      if (tag) *tag = "p" + std::to_string(p);
      return child.get();
    }
  if (tag) *tag = "x";
  return tree.explore.get();
}

// Assumes sol is (level-1)-active over the tree's span and lprime > level.
bool contaminated_impl(const PhaseTree& tree, const Solution& sol, int lprime) {
  if (tree.level == 1)
    return sol.configs.front()[static_cast<std::size_t>(lprime - 1)] == tree.critical_point;
  const MultiphaseTree* q = hard_side(tree, sol, nullptr);
  std::size_t count = 0;
  for (const auto& sub : q->children) {
    Solution r = sol.restrict(sub->begin - tree.begin, sub->end - tree.begin);
    if (is_l_active(r, tree.level - 2) && contaminated_impl(*sub, r, lprime)) ++count;
  }
  // count >= 2^-(lprime-level+3) * (number of subphases), compared exactly
  return Int(static_cast<unsigned long>(count)) * pow2(lprime - tree.level + 3) >=
         Int(static_cast<unsigned long>(q->children.size()));
}

}  // namespace

TreeLocator hard_multiphase(const PhaseTree& tree, const Solution& sol) {
  if (tree.level < 2) throw invalid_input("hard multiphase requires a phase of level >= 2");
  validate_tree_solution(tree, sol);
  if (!is_l_active(sol, tree.level - 1))
    throw invalid_input("solution is not (l-1)-active for the phase's level");
  std::string tag;
  hard_side(tree, sol, &tag);
  TreeLocator loc;
  loc.parts.push_back(tag);
  return loc;
}

bool is_contaminated(const PhaseTree& tree, const Solution& sol, int lprime) {
  validate_tree_solution(tree, sol);
  const int k = static_cast<int>(sol.configs.front().size());
  if (lprime <= tree.level || lprime > k)
    throw invalid_input("contamination index must lie in {level+1, ..., k}");
  if (!is_l_active(sol, tree.level - 1))
    throw invalid_input("solution is not (l-1)-active for the phase's level");
  return contaminated_impl(tree, sol, lprime);
}

namespace {

void report_walk(const PhaseTree& node, const PhaseTree& root, const Solution& root_sol, int k,
                 const std::string& path, ContaminationReport& out) {
  auto join = [&](const std::string& b) { return path.empty() ? b : path + "/" + b; };
  Solution r = root_sol.restrict(node.begin - root.begin, node.end - root.begin);
  ContaminationEntry e;
  e.path = path;
  e.level = node.level;
  e.active = is_l_active(r, node.level - 1);
  if (e.active) {
    if (node.level >= 2) hard_side(node, r, &e.hard);
    for (int lp = node.level + 1; lp <= k; ++lp)
      e.contaminated.emplace_back(lp, contaminated_impl(node, r, lp));
  }
  out.entries.push_back(std::move(e));
  if (node.level == 1) return;
  for (std::size_t j = 0; j < node.explore->children.size(); ++j)
    report_walk(*node.explore->children[j], root, root_sol, k,
                join("x/m" + std::to_string(j)), out);
  for (const auto& [p, mp] : node.exploit)
    for (std::size_t j = 0; j < mp->children.size(); ++j)
      report_walk(*mp->children[j], root, root_sol, k,
                  join("p" + std::to_string(p) + "/m" + std::to_string(j)), out);
}

}  // namespace

ContaminationReport contamination_report(const PhaseTree& tree, const Solution& sol) {
  validate_tree_solution(tree, sol);
  ContaminationReport out;
  report_walk(tree, tree, sol, static_cast<int>(sol.configs.front().size()), "", out);
  for (const auto& [lp, flag] : out.entries.front().contaminated)
    if (flag) out.root_contaminated = true;
  return out;
}

LowerBoundResult verify_phase_lower_bound(const PhaseTree& tree, const RequestSequence& stream,
                                          const WeightVector& w, const Metric& metric,
                                          const OptOptions& options) {
  if (tree.level != w.k())
    throw invalid_input("lower-bound verification expects a full-depth phase");
  if (!tree.anchor.empty())
    throw invalid_input("lower-bound verification expects an empty anchor set");
  if (tree.length() != stream.size())
    throw invalid_input("tree span disagrees with the request sequence");
  OptResult opt = opt_cost(stream, w, metric, std::nullopt, options);
  LowerBoundResult out;
  out.opt = opt.cost;
  out.bound = w.at(w.k()) / Rat(pow2(w.k()));
  out.margin = out.opt / out.bound;
  out.holds = out.opt >= out.bound;
  return out;
}

}  // namespace wks
