#pragma once

#include <cstdint>
#include <vector>

#include "wks/metric.hpp"
#include "wks/rational.hpp"

namespace wks {

// Exact harmonic number h(n) = 1 + 1/2 + ... + 1/n, h(0) = 0.
Rat harmonic(unsigned long n);

// The structural constants of the simulator, parameterized by the d profile.
//
// The theoretical profile sets d_level = 2^(5^(level-1) - 1); these grow so fast that
// c(level) is only computable for small levels (its recurrence needs exact harmonic
// numbers of d_level - 1 terms), which is why harmonic arguments are budget-capped.
// Override profiles ("non-theoretical mode") keep the machinery testable at desk
// scale; d_1 = 1 always, and overridden d_level must be >= 2 for level >= 2.
class Constants {
 public:
  static Constants theoretical();
  static Constants with_d_profile(const std::vector<Int>& d_values);

  bool is_theoretical() const { return d_override_.empty(); }

  // d_level; level >= 1. Override profiles fall back to the theoretical value
  // beyond the overridden prefix.
  Int d(int level) const;

  // c_level by the recurrence c_1 = 1, c_l = (1 + h(d_l - 1)) c_{l-1} + 2 h(d_l - 1).
  Rat c(int level) const;

  // c_level by the closed form 3 * prod_{l'=2..level} (1 + h(d_l' - 1)) - 2.
  Rat c_closed_form(int level) const;

  // F_{level, heavier}: F_{1,h} = 1, F_{l,h} = 2^(h-l+3) d_{l-1} F_{l-1,h};
  // requires 1 <= level <= heavier.
  Int F(int level, int heavier) const;

  // d_level - 1 as a machine count, checked against the metric ("metric too small").
  std::int64_t critical_size(int level, const Metric& metric) const;

  // Largest n for which c()'s internal harmonic(n) calls are allowed.
  unsigned long harmonic_cap = 1ul << 20;

 private:
  std::vector<Int> d_override_;  // empty = theoretical; element i is d_{i+1}

  Rat h_of_d_minus_1(int level) const;
};

}  // namespace wks
