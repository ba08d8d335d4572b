#include "wks/solution.hpp"

namespace wks {

Solution Solution::restrict(std::size_t i, std::size_t j) const {
  if (i > j || j > steps()) throw invalid_input("solution restriction out of range");
  Solution out;
  out.configs.assign(configs.begin() + static_cast<std::ptrdiff_t>(i),
                     configs.begin() + static_cast<std::ptrdiff_t>(j) + 1);
  return out;
}

Rat solution_cost(const Solution& sol, const WeightVector& w) {
  Rat total = 0;
  for (std::size_t i = 1; i < sol.configs.size(); ++i) {
    const auto& prev = sol.configs[i - 1];
    const auto& cur = sol.configs[i];
    if (prev.size() != cur.size() || static_cast<int>(cur.size()) != w.k())
      throw invalid_input("solution configurations disagree with k");
    for (int level = 1; level <= w.k(); ++level)
      if (prev[static_cast<std::size_t>(level - 1)] != cur[static_cast<std::size_t>(level - 1)])
        total += w.at(level);
  }
  return total;
}

Rat move_cost(const Configuration& from, const Configuration& to, const WeightVector& w) {
  if (from.size() != to.size() || static_cast<int>(to.size()) != w.k())
    throw invalid_input("configurations disagree with k");
  Rat total = 0;
  for (int level = 1; level <= w.k(); ++level)
    if (from[static_cast<std::size_t>(level - 1)] != to[static_cast<std::size_t>(level - 1)])
      total += w.at(level);
  return total;
}

std::vector<int> moved_servers(const Configuration& from, const Configuration& to) {
  if (from.size() != to.size()) throw invalid_input("configurations disagree in size");
  std::vector<int> out;
  for (std::size_t i = 0; i < to.size(); ++i)
    if (from[i] != to[i]) out.push_back(static_cast<int>(i) + 1);
  return out;
}

bool is_l_active(const Solution& sol, int l) {
  for (std::size_t i = 1; i < sol.configs.size(); ++i) {
    const auto& prev = sol.configs[i - 1];
    const auto& cur = sol.configs[i];
    for (std::size_t s = static_cast<std::size_t>(l); s < cur.size(); ++s)
      if (prev[s] != cur[s]) return false;
  }
  return true;
}

}  // namespace wks
