#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "wks/metric.hpp"
#include "wks/rational.hpp"
#include "wks/weights.hpp"

namespace wks {

// An offline solution to m requests: configurations C_0..C_m, where C_i is the
// configuration after serving request i (C_0 is initial). Validity (each C_i covering
// request i) is checked by the offline oracle, not by this container.
struct Solution {
  std::vector<Configuration> configs;

  std::size_t steps() const { return configs.empty() ? 0 : configs.size() - 1; }

  // Restriction C[i, j]: the sub-solution [C_i..C_j] (0 <= i <= j <= steps()).
  Solution restrict(std::size_t i, std::size_t j) const;
};

// Total weighted movement: sum over steps and servers of w_ell when server ell moved.
Rat solution_cost(const Solution& sol, const WeightVector& w);

// A solution is l-active if only servers 1..l ever move (servers l+1..k are fixed).
bool is_l_active(const Solution& sol, int l);

// Cost of jumping from one configuration to another in one step.
Rat move_cost(const Configuration& from, const Configuration& to, const WeightVector& w);

// 1-based indices of servers whose position differs between the two configurations.
std::vector<int> moved_servers(const Configuration& from, const Configuration& to);

}  // namespace wks
