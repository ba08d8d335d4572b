#pragma once

#include <cstddef>
#include <memory>
#include <utility>
#include <vector>

#include "wks/constants.hpp"
#include "wks/demand.hpp"
#include "wks/errors.hpp"
#include "wks/metric.hpp"
#include "wks/phase_tree.hpp"
#include "wks/weights.hpp"

// Incremental longest-prefix parsers for the phase grammar, generic over a
// Domain that supplies the request semantics. A Domain D provides:
//
//   using Request = ...;            // one online request
//   int k() const;
//   const WeightVector& weights() const;   // weight-constrained
//   const Constants& constants() const;
//   bool satisfied(const AnchorSet& H, const Request& r) const;
//       // r needs no light-server attention given H
//   bool touches(PointId p, const Request& r) const;
//       // r is satisfied by the singleton {p}
//   PointId leaf_critical(const Request& r) const;
//       // critical point a level-1 phase acquires when r opens it
//   DemandVector leaf_demand(const Request& r) const;
//       // demand contribution of that opening request
//   std::pair<PointId, PointId> critical_range(int multiphase_level) const;
//       // [lo, hi) of point ids eligible for a level-`multiphase_level`
//       // multiphase's critical set
//   void validate_request(const Request& r) const;   // throws invalid_input
//   void validate_anchor(int level, const AnchorSet& H) const;
//
// Parser contract (established by the construction below, and exercised by the
// exhaustive grammar tests):
//   - feed(r) consumes r and returns true, or terminates the parser and
//     returns false; a terminated parser must not be fed again.
//   - A parser terminates only from a complete state, and complete() is
//     monotone while the parser is alive: the greedy consumed prefix at
//     termination is exactly the longest parseable prefix of the stream.
//   - Consequently, at end of input: terminated => a proper prefix parses;
//     alive and complete => the whole consumed string parses; alive and
//     incomplete => no prefix parses at all.

namespace wks {

template <typename D>
class MultiphaseParser;

// Parser for an (level, H)-phase. Level 1 is the leaf of the grammar: a run of
// requests satisfied by H plus one acquired critical point. Level >= 2 runs an
// explore multiphase to termination, derives the critical set S, then races one
// exploit multiphase per point of S over the shared remaining stream.
template <typename D>
class PhaseParser {
 public:
  using Request = typename D::Request;

  struct ExploitSlot {
    PointId point;
    std::unique_ptr<MultiphaseParser<D>> parser;
    bool alive = true;
  };

  PhaseParser(const D& dom, int level, AnchorSet anchor, std::size_t begin)
      : dom_(&dom), level_(level), anchor_(std::move(anchor)), begin_(begin) {
    if (level_ < 1 || level_ > dom_->k()) throw invalid_input("phase level out of range");
    dom_->validate_anchor(level_, anchor_);
    if (level_ >= 2) {
      // Fail fast if the metric cannot host this level's critical sets.
      auto [lo, hi] = dom_->critical_range(level_ - 1);
      Int needed = dom_->constants().d(level_) - 1;
      if (Int(hi - lo) < needed)
        throw metric_too_small("level " + std::to_string(level_) + " phase needs " +
                               needed.get_str() + " critical points but only " +
                               std::to_string(hi - lo) + " are eligible");
      explore_ = std::make_unique<MultiphaseParser<D>>(dom, level_ - 1, anchor_, begin_);
    }
  }

  bool feed(const Request& r) {
    if (terminated_) throw invariant_violation("feed on a terminated phase parser");
    if (level_ == 1) return feed_leaf(r);
    if (!explore_done_) {
      if (explore_->feed(r)) {
        ++consumed_;
        return true;
      }
      begin_exploit();
      // A fresh multiphase parser consumes any first request.
      for (auto& slot : exploit_)
        if (!slot.parser->feed(r))
          throw invariant_violation("fresh exploit child rejected a request");
      ++consumed_;
      return true;
    }
    bool any = false;
    for (auto& slot : exploit_) {
      if (!slot.alive) continue;
      if (slot.parser->feed(r)) {
        any = true;
      } else {
        if (!slot.parser->complete())
          throw invariant_violation("exploit child terminated incomplete");
        slot.alive = false;
      }
    }
    if (!any) {
      terminated_ = true;
      return false;
    }
    ++consumed_;
    return true;
  }

  // Read-only probe: would feed(r) consume r?
  bool would_consume(const Request& r) const {
    if (terminated_) return false;
    if (level_ == 1) {
      if (leaf_point_ < 0) return true;
      return dom_->satisfied(anchor_, r) || dom_->touches(leaf_point_, r);
    }
    if (!explore_done_) return true;  // either explore extends or exploit opens
    for (const auto& slot : exploit_)
      if (slot.alive && slot.parser->would_consume(r)) return true;
    return false;
  }

  bool complete() const {
    if (level_ == 1) return leaf_point_ >= 0;
    if (!explore_done_) return false;
    for (const auto& slot : exploit_)
      if (slot.alive && !slot.parser->complete()) return false;
    return true;
  }

  bool terminated() const { return terminated_; }
  int level() const { return level_; }
  const AnchorSet& anchor() const { return anchor_; }
  std::size_t begin() const { return begin_; }
  std::size_t end() const { return begin_ + consumed_; }
  std::size_t consumed() const { return consumed_; }

  // Level-1 introspection: the acquired critical point, or -1 while unset.
  PointId leaf_point() const { return leaf_point_; }

  // Level >= 2 introspection.
  bool in_explore() const { return level_ >= 2 && !explore_done_; }
  const MultiphaseParser<D>* explore_parser() const { return explore_.get(); }
  const std::vector<PointId>& critical_set() const { return critical_; }
  const std::vector<ExploitSlot>& exploit_slots() const { return exploit_; }

  DemandVector demand() const {
    if (level_ == 1) return leaf_demand_;
    if (!explore_done_) return explore_->demand();
    DemandVector v;
    v.add(explore_tree_->demand);
    for (const auto& slot : exploit_) v.add(slot.parser->demand());
    return v;
  }

  // Materializes the parse of the consumed prefix; valid only when complete.
  PhaseTreePtr tree() const {
    if (!complete()) throw invariant_violation("tree() on an incomplete phase parser");
    auto node = std::make_shared<PhaseTree>();
    node->level = level_;
    node->anchor = anchor_;
    node->begin = begin_;
    node->end = end();
    if (level_ == 1) {
      node->critical_point = leaf_point_;
      node->demand = leaf_demand_;
      return node;
    }
    node->explore = explore_tree_;
    node->critical_set = critical_;
    node->demand.add(explore_tree_->demand);
    for (const auto& slot : exploit_) {
      auto sub = slot.parser->tree();
      node->demand.add(sub->demand);
      node->exploit.emplace_back(slot.point, std::move(sub));
    }
    return node;
  }

 private:
  bool feed_leaf(const Request& r) {
    if (leaf_point_ < 0) {
      if (!dom_->satisfied(anchor_, r)) {
        leaf_point_ = dom_->leaf_critical(r);
        leaf_demand_ = dom_->leaf_demand(r);
      }
      ++consumed_;
      return true;
    }
    if (dom_->satisfied(anchor_, r) || dom_->touches(leaf_point_, r)) {
      ++consumed_;
      return true;
    }
    terminated_ = true;
    return false;
  }

  void begin_exploit() {
    if (!explore_->complete())
      throw invariant_violation("explore multiphase terminated incomplete");
    explore_tree_ = explore_->tree();
    critical_ = explore_tree_->critical_set;
    exploit_.reserve(critical_.size());
    for (PointId p : critical_)
      exploit_.push_back(
          {p, std::make_unique<MultiphaseParser<D>>(*dom_, level_ - 1, anchor_.with(p), end()),
           true});
    explore_done_ = true;
  }

  const D* dom_;
  int level_;
  AnchorSet anchor_;
  std::size_t begin_;
  std::size_t consumed_ = 0;
  bool terminated_ = false;

  // Level 1.
  PointId leaf_point_ = -1;
  DemandVector leaf_demand_;

  // Level >= 2.
  std::unique_ptr<MultiphaseParser<D>> explore_;
  bool explore_done_ = false;
  MultiphaseTreePtr explore_tree_;
  std::vector<PointId> critical_;
  std::vector<ExploitSlot> exploit_;
};

// Parser for an (level, H)-multiphase: exactly w_{level+1}/w_level phases, each
// extended greedily until the next request cannot extend it.
template <typename D>
class MultiphaseParser {
 public:
  using Request = typename D::Request;

  MultiphaseParser(const D& dom, int level, AnchorSet anchor, std::size_t begin)
      : dom_(&dom), level_(level), anchor_(std::move(anchor)), begin_(begin) {
    if (level_ < 1 || level_ >= dom_->k()) throw invalid_input("multiphase level out of range");
    dom_->validate_anchor(level_, anchor_);
    target_ = dom_->weights().ratio(level_);
    child_ = std::make_unique<PhaseParser<D>>(dom, level_, anchor_, begin_);
  }

  bool feed(const Request& r) {
    if (terminated_) throw invariant_violation("feed on a terminated multiphase parser");
    if (child_->feed(r)) {
      ++consumed_;
      return true;
    }
    // The current child is done; it terminates only when complete.
    if (!child_->complete())
      throw invariant_violation("phase child terminated incomplete");
    if (Int(static_cast<unsigned long>(frozen_.size())) + 1 == target_) {
      terminated_ = true;
      return false;
    }
    auto done = child_->tree();
    accum_demand_.add(done->demand);
    frozen_.push_back(std::move(done));
    child_ = std::make_unique<PhaseParser<D>>(*dom_, level_, anchor_, begin_ + consumed_);
    if (!child_->feed(r)) throw invariant_violation("fresh phase child rejected a request");
    ++consumed_;
    return true;
  }

  bool would_consume(const Request& r) const {
    if (terminated_) return false;
    if (child_->would_consume(r)) return true;
    return Int(static_cast<unsigned long>(frozen_.size())) + 1 < target_;
  }

  bool complete() const {
    return Int(static_cast<unsigned long>(frozen_.size())) + 1 == target_ && child_->complete();
  }

  bool terminated() const { return terminated_; }
  int level() const { return level_; }
  const AnchorSet& anchor() const { return anchor_; }
  std::size_t begin() const { return begin_; }
  std::size_t end() const { return begin_ + consumed_; }
  std::size_t consumed() const { return consumed_; }
  const Int& target_children() const { return target_; }
  std::size_t finished_children() const { return frozen_.size(); }
  const PhaseParser<D>* current_child() const { return child_.get(); }
  const std::vector<PhaseTreePtr>& frozen_children() const { return frozen_; }

  DemandVector demand() const {
    DemandVector v = accum_demand_;
    v.add(child_->demand());
    return v;
  }

  MultiphaseTreePtr tree() const {
    if (!complete()) throw invariant_violation("tree() on an incomplete multiphase parser");
    auto node = std::make_shared<MultiphaseTree>();
    node->level = level_;
    node->anchor = anchor_;
    node->begin = begin_;
    node->end = end();
    node->children = frozen_;
    node->children.push_back(child_->tree());
    node->demand = accum_demand_;
    node->demand.add(node->children.back()->demand);
    auto [lo, hi] = dom_->critical_range(level_);
    node->critical_set =
        top_d_in_range(node->demand, dom_->constants().d(level_ + 1) - 1, lo, hi);
    return node;
  }

 private:
  const D* dom_;
  int level_;
  AnchorSet anchor_;
  std::size_t begin_;
  std::size_t consumed_ = 0;
  bool terminated_ = false;
  Int target_;
  std::vector<PhaseTreePtr> frozen_;
  DemandVector accum_demand_;
  std::unique_ptr<PhaseParser<D>> child_;
};

// Batch wrappers: feed the whole input and classify per the parser contract.

template <typename D>
PhaseParseResult parse_phase_stream(const D& dom, int level, AnchorSet anchor,
                                    const std::vector<typename D::Request>& rho) {
  for (const auto& r : rho) dom.validate_request(r);
  PhaseParser<D> parser(dom, level, std::move(anchor), 0);
  for (const auto& r : rho)
    if (!parser.feed(r)) break;
  PhaseParseResult out;
  if (parser.terminated()) {
    out.status = ParseStatus::ProperPrefix;
    out.tree = parser.tree();
    out.consumed = parser.consumed();
  } else if (parser.complete()) {
    out.status = ParseStatus::WholeStringParses;
    out.tree = parser.tree();
    out.consumed = parser.consumed();
  } else {
    out.status = ParseStatus::NoPhasePrefix;
  }
  return out;
}

template <typename D>
MultiphaseParseResult parse_multiphase_stream(const D& dom, int level, AnchorSet anchor,
                                              const std::vector<typename D::Request>& rho) {
  for (const auto& r : rho) dom.validate_request(r);
  MultiphaseParser<D> parser(dom, level, std::move(anchor), 0);
  for (const auto& r : rho)
    if (!parser.feed(r)) break;
  MultiphaseParseResult out;
  if (parser.terminated()) {
    out.status = ParseStatus::ProperPrefix;
    out.tree = parser.tree();
    out.consumed = parser.consumed();
  } else if (parser.complete()) {
    out.status = ParseStatus::WholeStringParses;
    out.tree = parser.tree();
    out.consumed = parser.consumed();
  } else {
    out.status = ParseStatus::NoPhasePrefix;
  }
  return out;
}

}  // namespace wks
