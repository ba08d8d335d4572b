#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "wks/adversary.hpp"
#include "wks/errors.hpp"
#include "wks/parser.hpp"
#include "wks/strategy.hpp"

using namespace wks;

namespace {

struct Frame {
  Metric metric;
  WeightVector w;
  Constants constants;
};

Frame k2_d3() {
  return Frame{Metric{20}, WeightVector{{Rat(1), Rat(2)}},
               Constants::with_d_profile({Int(1), Int(3)})};
}

RequestSequence random_stream(Rng& rng, int points, std::size_t len) {
  RequestSequence s;
  for (std::size_t i = 0; i < len; ++i) s.push_back(static_cast<PointId>(rng.below(
      static_cast<std::uint64_t>(points))));
  return s;
}

}  // namespace

TEST_CASE("single-server phase: move once, then coast") {
  auto f = k2_d3();
  const PointId p = 0, q = 1, r = 3;

  // Anchored requests are ignored; the first free request pulls server 1.
  auto r1 = run_1_phase(AnchorSet{}.with(q), {2, q}, {q, p, q, p, r}, f.metric, f.w,
                        f.constants, 7);
  CHECK(r1.status == RunStatus::Terminated);
  CHECK(r1.consumed == 4);
  REQUIRE(r1.demand);
  CHECK((*r1.demand)[p] == 1);
  CHECK(r1.demand->norm() == 1);
  CHECK(r1.cost == Rat(1));  // one move of server 1
  CHECK(r1.final_config == Configuration{p, q});

  // Whole stream is a phase request sequence: the strategy waits for more.
  auto r2 = run_1_phase(AnchorSet{}, {2, q}, {p, p, p}, f.metric, f.w, f.constants, 7);
  CHECK(r2.status == RunStatus::AwaitingMoreRequests);
  CHECK(r2.consumed == 3);
  CHECK(!r2.demand);
  CHECK(r2.cost == Rat(1));

  auto r3 = run_1_phase(AnchorSet{}, {p, q}, {p, p, p}, f.metric, f.w, f.constants, 7);
  CHECK(r3.cost == Rat(0));  // server 1 already sits on p

  // Server 1 on p from the start: cost 0, terminate on the foreign request.
  auto r4 = run_1_phase(AnchorSet{}.with(q), {p, q}, {p, p, r}, f.metric, f.w, f.constants, 7);
  CHECK(r4.status == RunStatus::Terminated);
  CHECK(r4.consumed == 2);
  CHECK(r4.cost == Rat(0));
  REQUIRE(r4.demand);
  CHECK((*r4.demand)[p] == 1);

  // The anchor must be covered by a heavier server.
  CHECK_THROWS_AS(run_1_phase(AnchorSet{}.with(q), {2, 3}, {p}, f.metric, f.w, f.constants, 7),
                  invalid_input);
  // Requests outside the metric are rejected.
  CHECK_THROWS_AS(run_1_phase(AnchorSet{}, {2, 3}, {99}, f.metric, f.w, f.constants, 7),
                  invalid_input);
}

TEST_CASE("multiphase chains phases and sums demands") {
  auto f = k2_d3();
  auto r1 = run_multiphase(1, AnchorSet{}, {5, 6}, {0, 0, 1, 1, 2}, f.metric, f.w,
                           f.constants, 11);
  CHECK(r1.status == RunStatus::Terminated);
  CHECK(r1.consumed == 4);
  REQUIRE(r1.demand);
  CHECK((*r1.demand)[0] == 1);
  CHECK((*r1.demand)[1] == 1);

  auto r2 = run_multiphase(1, AnchorSet{}, {5, 6}, {0, 1}, f.metric, f.w, f.constants, 11);
  CHECK(r2.status == RunStatus::AwaitingMoreRequests);
  CHECK(r2.consumed == 2);

  auto r3 = run_multiphase(1, AnchorSet{}, {5, 6}, {}, f.metric, f.w, f.constants, 11);
  CHECK(r3.status == RunStatus::AwaitingMoreRequests);
  CHECK(r3.consumed == 0);
  CHECK(r3.cost == Rat(0));
  CHECK(r3.trace.empty());
}

TEST_CASE("level-2 run consumes the parser's longest prefix, independent of seed") {
  auto f = k2_d3();
  Rng stream_rng(404);
  for (int trial = 0; trial < 100; ++trial) {
    auto rho = random_stream(stream_rng, 6, 40);
    auto parsed = parse_phase(2, AnchorSet{}, rho, f.metric, f.w, f.constants);

    RunResult first;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      auto run = run_phase(2, AnchorSet{}, {17, 18}, rho, f.metric, f.w, f.constants, seed);
      // Terminated exactly when a proper prefix parses; the consumed prefix is
      // that prefix (the breaking request is inspected, not consumed). In the
      // other two cases the stream runs out with the strategy still waiting.
      if (parsed.status == ParseStatus::ProperPrefix) {
        CHECK(run.status == RunStatus::Terminated);
        CHECK(run.consumed == parsed.consumed);
        REQUIRE(run.demand);
        CHECK(*run.demand == parsed.tree->demand);
      } else {
        CHECK(run.status == RunStatus::AwaitingMoreRequests);
        CHECK(run.consumed == rho.size());
      }
      if (seed == 1)
        first = run;
      else
        CHECK(run.consumed == first.consumed);
    }
  }
}

TEST_CASE("coverage and heavy-server freeze during a level-2 run at k=3") {
  Metric metric{20};
  WeightVector w{{Rat(1), Rat(2), Rat(4)}};
  Constants constants = Constants::with_d_profile({Int(1), Int(3), Int(3)});
  WeightedDomain dom(metric, w, constants);

  Rng stream_rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    auto rho = random_stream(stream_rng, 5, 60);
    PhaseStrategy<WeightedDomain> strat(dom, 2, AnchorSet{}, {10, 11, 12}, Rng(trial + 1));
    for (PointId r : rho) {
      if (!strat.feed(r)) break;
      CHECK(dom.covered(strat.config(), r));   // every consumed request is covered
      CHECK(strat.config()[2] == 12);          // server 3 never moves at level 2
    }
  }
}

TEST_CASE("exploit bookkeeping: permutation, switch costs, follow flags") {
  auto f = k2_d3();
  Rng stream_rng(909);
  int stages_seen = 0;
  for (int trial = 0; trial < 40; ++trial) {
    auto rho = random_stream(stream_rng, 5, 50);
    auto run = run_phase(2, AnchorSet{}, {17, 18}, rho, f.metric, f.w, f.constants,
                         static_cast<std::uint64_t>(trial) + 1);
    for (const auto& st : run.exploit_stats) {
      if (st.pi.empty()) continue;
      ++stages_seen;
      // pi is a permutation of the copy indices
      std::vector<bool> hit(st.pi.size(), false);
      for (std::size_t idx : st.pi) {
        REQUIRE(idx < hit.size());
        CHECK(!hit[idx]);
        hit[idx] = true;
      }
      CHECK(st.critical.size() == st.pi.size());
      CHECK(st.child_consumed.size() == st.pi.size());
      // every follow switch realigns at most the lightest 2 servers
      for (const Rat& c : st.switch_costs) {
        CHECK(c >= Rat(0));
        CHECK(c <= Rat(3));  // w_1 + w_2
      }
    }
  }
  CHECK(stages_seen > 0);
}

TEST_CASE("follow probability of the j-th longest copy is at most 1/j") {
  // Fix one oblivious stream whose first level-2 phase is complete (a second
  // generated phase follows it, so the strategy terminates inside real data),
  // then sample the follow pattern over many seeds. d_2=6 gives 5 exploit
  // copies per phase.
  Metric metric{20};
  WeightVector w{{Rat(1), Rat(2)}};
  Constants constants = Constants::with_d_profile({Int(1), Int(6)});

  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::PhaseCompleting;
  spec.metric = metric;
  spec.weights = w;
  spec.constants = constants;
  spec.seed = 31337;
  spec.phases = 2;
  auto gen = gen_phase_completing(spec);
  REQUIRE(gen.boundaries.size() == 2);

  const int copies = 5;  // d_2 - 1
  const int n_seeds = 10000;
  std::vector<int> followed_at_rank(copies, 0);
  for (int seed = 1; seed <= n_seeds; ++seed) {
    auto run = run_phase(2, AnchorSet{}, {17, 18}, gen.requests, metric, w, constants,
                         static_cast<std::uint64_t>(seed));
    REQUIRE(run.status == RunStatus::Terminated);
    REQUIRE(run.consumed == gen.boundaries[0]);
    // the phase's own exploit stage is the entry at the recursion root
    const ExploitStats* root = nullptr;
    for (const auto& st : run.exploit_stats)
      if (st.level == 2) root = &st;
    REQUIRE(root);
    REQUIRE(static_cast<int>(root->pi.size()) == copies);
    // rank copies by consumed length, longest first, stable on index
    std::vector<std::size_t> order(root->child_consumed.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return root->child_consumed[a] > root->child_consumed[b];
    });
    for (std::size_t j = 0; j < order.size(); ++j)
      if (root->followed[order[j]]) ++followed_at_rank[j];
  }
  for (int j = 1; j <= copies; ++j) {
    double p_hat = static_cast<double>(followed_at_rank[j - 1]) / n_seeds;
    double bound = 1.0 / j;
    double se = std::sqrt(bound * (1.0 - bound) / n_seeds);
    INFO("rank ", j, ": p_hat=", p_hat, " bound=", bound);
    CHECK(p_hat <= bound + 3.0 * se);
  }
  // The first-followed copy (rank of the longest) is followed with certainty
  // only when it is also first in pi; sanity: somebody is followed every run.
  CHECK(followed_at_rank[0] > 0);
}

TEST_CASE("serve_online chains phases from the previous final configuration") {
  auto f = k2_d3();

  auto empty = serve_online({3, 4}, {}, f.metric, f.w, f.constants, 5);
  CHECK(empty.completed_phases == 0);
  CHECK(empty.total_cost == Rat(0));
  CHECK(!empty.trailing_partial);
  CHECK(empty.final_config == Configuration{3, 4});

  GeneratorSpec spec;
  spec.kind = GeneratorSpec::Kind::PhaseCompleting;
  spec.metric = f.metric;
  spec.weights = f.w;
  spec.constants = f.constants;
  spec.seed = 99;
  spec.phases = 3;
  auto gen = gen_phase_completing(spec);
  REQUIRE(gen.boundaries.size() == 3);

  auto rep = serve_online({17, 18}, gen.requests, f.metric, f.w, f.constants, 123);
  CHECK(rep.completed_phases >= 2);
  CHECK(rep.phase_lengths[0] == gen.boundaries[0]);
  CHECK(rep.phase_lengths[1] == gen.boundaries[1] - gen.boundaries[0]);
  // cost adds up across trace entries and phase records
  Rat trace_sum = 0;
  for (const auto& e : rep.trace) trace_sum += e.step_cost;
  CHECK(trace_sum == rep.total_cost);
  Rat phase_sum = 0;
  for (const auto& c : rep.phase_costs) phase_sum += c;
  CHECK(phase_sum == rep.total_cost);
}

TEST_CASE("serve_online at k=1 pays one weight per uncovered letter run") {
  Metric metric{5};
  WeightVector w{{Rat(1)}};
  Constants constants = Constants::theoretical();
  // runs: a a | b b | a | c  with server starting on a
  auto rep = serve_online({0}, {0, 0, 1, 1, 0, 2}, metric, w, constants, 3);
  CHECK(rep.completed_phases == 3);
  CHECK(rep.trailing_partial);
  CHECK(rep.total_cost == Rat(3));
  CHECK(rep.phase_costs == std::vector<Rat>{Rat(0), Rat(1), Rat(1), Rat(1)});
  CHECK(rep.final_config == Configuration{2});
}

TEST_CASE("identical seeds reproduce the full trace") {
  auto f = k2_d3();
  Rng stream_rng(5150);
  auto rho = random_stream(stream_rng, 6, 60);
  auto a = run_phase(2, AnchorSet{}, {17, 18}, rho, f.metric, f.w, f.constants, 42);
  auto b = run_phase(2, AnchorSet{}, {17, 18}, rho, f.metric, f.w, f.constants, 42);
  CHECK(a.cost == b.cost);
  CHECK(a.consumed == b.consumed);
  CHECK(a.final_config == b.final_config);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    CHECK(a.trace[i].moved == b.trace[i].moved);
    CHECK(a.trace[i].step_cost == b.trace[i].step_cost);
  }
}
