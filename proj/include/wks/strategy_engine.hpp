#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wks/demand.hpp"
#include "wks/errors.hpp"
#include "wks/metric.hpp"
#include "wks/rng.hpp"
#include "wks/solution.hpp"
#include "wks/weights.hpp"

// Online strategies over the same Domain concept the parsers use (see
// parser_engine.hpp).  Each strategy consumes exactly the same request prefix
// as its parser twin — the accept/reject control flow is mirrored line for
// line — but additionally maintains a server configuration and pays movement
// cost as it goes.  Randomness enters only through the follow order drawn in
// the exploit stage; which requests are consumed is independent of the seed.
//
// Structure at level l >= 2: run the level-(l-1) strategy as the explore
// stage; when it terminates with demand v0, take the critical set
// S = top_{d_l - 1}(v0), draw a uniformly random permutation pi of S, and
// start one imaginary copy per p in S, initialised from this phase's starting
// configuration with server l moved to p.  Every request is fed to all
// still-running copies; the real configuration tracks the copy at the
// smallest pi-position that has not yet terminated.  Adopting a copy's
// configuration touches only servers 1..l, so each follow switch costs at
// most w_1 + ... + w_l.  The stage ends when every copy has terminated.

namespace wks {

// Per-exploit-stage accounting exposed for diagnostics and statistical tests:
// which copies were followed, how many requests each consumed, and what each
// follow switch cost.
struct ExploitStats {
  std::string path;                   // slash path of the owning phase strategy
  int level = 0;                      // level of the owning phase strategy
  std::vector<PointId> critical;      // critical set S in canonical order
  std::vector<std::size_t> pi;        // follow order: positions into `critical`
  std::vector<std::size_t> child_consumed;  // requests consumed per copy
  std::vector<bool> followed;         // whether the copy was ever followed
  std::vector<Rat> switch_costs;      // alignment cost per follow switch
  bool stage_finished = false;        // all copies terminated
};

template <typename Domain>
class MultiphaseStrategy;

// Strategy for a single (level, H)-phase starting from configuration c0.
// feed(r) returns true if the request was consumed (configuration updated),
// false if the phase terminated; a terminated strategy rejects all input.
template <typename Domain>
class PhaseStrategy {
 public:
  using Request = typename Domain::Request;

  PhaseStrategy(const Domain& dom, int level, AnchorSet anchor, Configuration c0, Rng rng)
      : dom_(&dom),
        level_(level),
        anchor_(std::move(anchor)),
        config_(std::move(c0)),
        prev_config_(config_),
        rng_(rng) {
    dom.validate_anchor(level_, anchor_);
    if (static_cast<int>(config_.size()) != dom.k())
      throw invalid_input("configuration size disagrees with k");
    // Anchor points must already be held by servers heavier than this level;
    // the strategy never moves those servers, so it could not cover anchored
    // requests otherwise.
    for (PointId h : anchor_.pts) {
      bool held = false;
      for (int s = level_ + 1; s <= dom.k(); ++s)
        if (config_[static_cast<std::size_t>(s - 1)] == h) held = true;
      if (!held) throw invalid_input("anchor point not held by a heavier server");
    }
    if (level_ >= 2) {
      auto range = dom.critical_range(level_ - 1);
      Int needed = dom.constants().d(level_) - 1;
      if (Int(range.second - range.first) < needed)
        throw metric_too_small("metric has too few points for the critical set at this level");
      explore_ = std::make_unique<MultiphaseStrategy<Domain>>(
          dom, level_ - 1, anchor_, config_, rng_.fork(Rng::kForkExplore, 0));
    }
  }

  bool feed(const Request& r) {
    if (terminated_) return false;
    if (level_ == 1) return feed_leaf(r);
    if (in_explore_) {
      prev_config_ = config_;
      if (explore_->feed(r)) {
        config_ = explore_->config();
        ++consumed_;
        return true;
      }
      begin_exploit();
      // The request that ended exploration opens the exploit stage; all fresh
      // copies consume it (a fresh strategy never rejects its first request).
      return feed_exploit(r);
    }
    return feed_exploit(r);
  }

  bool terminated() const { return terminated_; }
  int level() const { return level_; }
  const AnchorSet& anchor() const { return anchor_; }
  std::size_t consumed() const { return consumed_; }
  const Configuration& config() const { return config_; }
  // Configuration immediately before the most recently consumed request.
  const Configuration& prev_config() const { return prev_config_; }

  // Demand accumulated so far; equals the phase demand once terminated.
  DemandVector demand() const {
    if (level_ == 1) return leaf_demand_;
    DemandVector v;
    if (in_explore_) {
      v.add(explore_->demand());
      return v;
    }
    v.add(explore_demand_);
    for (const auto& slot : exploit_)
      v.add(slot.alive ? slot.strategy->demand() : slot.final_demand);
    return v;
  }

  // Slash path of the sub-strategy that decided the last consumed request,
  // e.g. "x/m0" while exploring or "p5/m2" while following copy p5.
  std::string decider_path() const {
    if (level_ == 1) return "";
    if (in_explore_) return join_path("x", explore_->decider_path());
    const auto& slot = exploit_[pi_[follow_]];
    return join_path("p" + std::to_string(slot.point), slot.strategy->decider_path());
  }

  // Appends this phase's exploit statistics (if the stage was reached) and
  // those of all nested strategies, tagging each with its path from `prefix`.
  void collect_stats(std::vector<ExploitStats>& out, const std::string& prefix) const {
    if (level_ == 1) return;
    explore_->collect_stats(out, join_path(prefix, "x"));
    if (in_explore_) return;
    ExploitStats st = stats_;
    st.path = prefix;
    st.level = level_;
    st.stage_finished = terminated_;
    for (const auto& slot : exploit_) st.child_consumed.push_back(slot.strategy->consumed());
    out.push_back(std::move(st));
    for (const auto& slot : exploit_)
      slot.strategy->collect_stats(out, join_path(prefix, "p" + std::to_string(slot.point)));
  }

 private:
  struct ExploitSlot {
    PointId point;
    std::unique_ptr<MultiphaseStrategy<Domain>> strategy;
    bool alive = true;
    DemandVector final_demand;
  };

  static std::string join_path(const std::string& a, const std::string& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    return a + "/" + b;
  }

  bool feed_leaf(const Request& r) {
    if (!leaf_open_) {
      prev_config_ = config_;
      if (!dom_->satisfied(anchor_, r)) {
        leaf_open_ = true;
        leaf_point_ = dom_->leaf_critical(r);
        leaf_demand_ = dom_->leaf_demand(r);
        config_[0] = leaf_point_;  // move the lightest server onto p
      }
      ++consumed_;
      assert_covered(r);
      return true;
    }
    if (dom_->satisfied(anchor_, r) || dom_->touches(leaf_point_, r)) {
      prev_config_ = config_;
      ++consumed_;
      assert_covered(r);
      return true;
    }
    terminated_ = true;
    return false;
  }

  void begin_exploit() {
    in_explore_ = false;
    explore_demand_ = explore_->demand();
    auto range = dom_->critical_range(level_ - 1);
    auto s = top_d_in_range(explore_demand_, dom_->constants().d(level_) - 1, range.first,
                            range.second);
    stats_.critical = s;
    pi_ = rng_.permutation(s.size());
    stats_.pi = pi_;
    stats_.followed.assign(s.size(), false);
    const Configuration& base = explore_->initial_config();
    for (std::size_t i = 0; i < s.size(); ++i) {
      Configuration c = base;
      c[static_cast<std::size_t>(level_ - 1)] = s[i];
      exploit_.push_back(ExploitSlot{
          s[i],
          std::make_unique<MultiphaseStrategy<Domain>>(
              *dom_, level_ - 1, anchor_.with(s[i]), std::move(c),
              rng_.fork(Rng::kForkExploit, static_cast<std::uint64_t>(i))),
          true,
          DemandVector{}});
    }
    follow_ = 0;
    // Adopting the first followed copy's starting configuration is itself a
    // follow switch and is charged like one.
    record_switch(config_, exploit_[pi_[follow_]].strategy->config());
  }

  bool feed_exploit(const Request& r) {
    prev_config_ = config_;
    bool any = false;
    for (auto& slot : exploit_) {
      if (!slot.alive) continue;
      if (slot.strategy->feed(r)) {
        any = true;
      } else {
        slot.alive = false;
        slot.final_demand = slot.strategy->demand();
      }
    }
    if (!any) {
      terminated_ = true;
      return false;
    }
    if (!exploit_[pi_[follow_]].alive) {
      // The followed copy just terminated: follow the copy at the smallest
      // pi-position still running.  Copies never resume, so scanning forward
      // finds it.
      Configuration from = exploit_[pi_[follow_]].strategy->config();
      do {
        ++follow_;
      } while (!exploit_[pi_[follow_]].alive);
      // Alignment is measured against the new copy's configuration before it
      // served r; its own move for r is mirrored separately below.
      record_switch(from, exploit_[pi_[follow_]].strategy->prev_config());
    }
    config_ = exploit_[pi_[follow_]].strategy->config();
    ++consumed_;
    assert_covered(r);
    return true;
  }

  void record_switch(const Configuration& from, const Configuration& to) {
    stats_.followed[pi_[follow_]] = true;
    stats_.switch_costs.push_back(move_cost(from, to, dom_->weights()));
  }

  void assert_covered(const Request& r) const {
    if (!dom_->covered(config_, r))
      throw invariant_violation("consumed request not covered by the current configuration");
  }

  const Domain* dom_;
  int level_;
  AnchorSet anchor_;
  Configuration config_;
  Configuration prev_config_;
  Rng rng_;
  bool terminated_ = false;
  std::size_t consumed_ = 0;

  // level == 1
  bool leaf_open_ = false;
  PointId leaf_point_ = -1;
  DemandVector leaf_demand_;

  // level >= 2
  bool in_explore_ = true;
  std::unique_ptr<MultiphaseStrategy<Domain>> explore_;
  DemandVector explore_demand_;
  std::vector<ExploitSlot> exploit_;
  std::vector<std::size_t> pi_;  // follow order: positions into exploit_
  std::size_t follow_ = 0;       // current position within pi_
  ExploitStats stats_;
};

// Strategy for a (level, H)-multiphase: exactly w_{level+1}/w_level phases
// run back to back, each starting from the previous one's final
// configuration.
template <typename Domain>
class MultiphaseStrategy {
 public:
  using Request = typename Domain::Request;

  MultiphaseStrategy(const Domain& dom, int level, AnchorSet anchor, Configuration c0, Rng rng)
      : dom_(&dom),
        level_(level),
        anchor_(std::move(anchor)),
        initial_config_(std::move(c0)),
        rng_(rng) {
    if (level_ < 1 || level_ >= dom.k())
      throw invalid_input("multiphase level must be between 1 and k-1");
    target_ = dom.weights().ratio(level_);
    child_ = std::make_unique<PhaseStrategy<Domain>>(
        dom, level_, anchor_, initial_config_, rng_.fork(Rng::kForkMultiphaseChild, 0));
  }

  bool feed(const Request& r) {
    if (terminated_) return false;
    if (child_->feed(r)) {
      ++consumed_;
      return true;
    }
    accum_demand_.add(child_->demand());
    ++finished_;
    if (Int(finished_) == target_) {
      terminated_ = true;
      return false;
    }
    child_->collect_stats(finished_stats_, "m" + std::to_string(finished_ - 1));
    child_ = std::make_unique<PhaseStrategy<Domain>>(
        *dom_, level_, anchor_, child_->config(),
        rng_.fork(Rng::kForkMultiphaseChild, static_cast<std::uint64_t>(finished_)));
    bool ok = child_->feed(r);  // a fresh phase strategy always consumes
    if (!ok) throw invariant_violation("fresh phase strategy rejected a request");
    ++consumed_;
    return true;
  }

  bool terminated() const { return terminated_; }
  int level() const { return level_; }
  std::size_t consumed() const { return consumed_; }
  const Configuration& config() const { return child_->config(); }
  const Configuration& prev_config() const {
    return child_->consumed() == 0 ? initial_config_ : child_->prev_config();
  }
  const Configuration& initial_config() const { return initial_config_; }

  DemandVector demand() const {
    DemandVector v = accum_demand_;
    if (!terminated_) v.add(child_->demand());
    return v;
  }

  std::string decider_path() const {
    std::string tag = "m" + std::to_string(terminated_ ? finished_ - 1 : finished_);
    std::string sub = child_->decider_path();
    return sub.empty() ? tag : tag + "/" + sub;
  }

  void collect_stats(std::vector<ExploitStats>& out, const std::string& prefix) const {
    auto join = [&](const std::string& b) { return prefix.empty() ? b : prefix + "/" + b; };
    for (const ExploitStats& st : finished_stats_) {
      ExploitStats copy = st;
      copy.path = join(st.path);
      out.push_back(std::move(copy));
    }
    child_->collect_stats(out, join("m" + std::to_string(terminated_ ? finished_ - 1 : finished_)));
  }

 private:
  const Domain* dom_;
  int level_;
  AnchorSet anchor_;
  Configuration initial_config_;
  Rng rng_;
  Int target_ = 0;
  bool terminated_ = false;
  std::size_t consumed_ = 0;
  std::size_t finished_ = 0;
  std::unique_ptr<PhaseStrategy<Domain>> child_;
  DemandVector accum_demand_;
  std::vector<ExploitStats> finished_stats_;  // stats of completed phases, paths already m<j>-tagged
};

enum class RunStatus {
  Terminated,             // the strategy completed its phase/multiphase
  AwaitingMoreRequests,   // the stream ended first
};

// One consumed request in a strategy run.
struct TraceEntry {
  std::size_t index;        // position in the request stream
  std::string request;      // textual form of the request
  std::vector<int> moved;   // 1-based servers that moved on this step
  Rat step_cost;            // total weight of the moved servers
  std::string path;         // slash path of the deciding sub-strategy
};

// Outcome of running one strategy against a request stream.
struct RunResult {
  RunStatus status = RunStatus::AwaitingMoreRequests;
  std::size_t consumed = 0;            // length of the consumed prefix
  std::optional<DemandVector> demand;  // set when status == Terminated
  Configuration final_config;
  Rat cost = 0;                        // total movement cost paid
  std::vector<TraceEntry> trace;
  std::vector<ExploitStats> exploit_stats;
};

// Drives a strategy over a stream, recording a trace of real moves.  The
// strategy's configuration before and after each consumed request determines
// the moved servers and the step cost.
template <typename Domain, typename Strategy>
RunResult run_strategy(const Domain& dom, Strategy& strat,
                       const std::vector<typename Domain::Request>& stream) {
  RunResult out;
  for (std::size_t i = 0; i < stream.size(); ++i) {
    dom.validate_request(stream[i]);
    Configuration before = strat.config();
    if (!strat.feed(stream[i])) {
      out.status = RunStatus::Terminated;
      out.demand = strat.demand();
      break;
    }
    TraceEntry e;
    e.index = i;
    e.request = dom.format_request(stream[i]);
    e.moved = moved_servers(before, strat.config());
    e.step_cost = move_cost(before, strat.config(), dom.weights());
    e.path = strat.decider_path();
    out.cost += e.step_cost;
    out.trace.push_back(std::move(e));
    ++out.consumed;
  }
  out.final_config = strat.config();
  strat.collect_stats(out.exploit_stats, "");
  return out;
}

}  // namespace wks
