#pragma once

#include <string>
#include <vector>

#include "wks/rational.hpp"

namespace wks {

// Server weights w_1 <= ... <= w_k, positive rationals. Weight-constrained means
// each w_{i+1} is an integer multiple of w_i and strictly larger.
struct WeightVector {
  std::vector<Rat> w;

  int k() const { return static_cast<int>(w.size()); }

  // 1-based accessor matching the prose ("server ell", "weight w_ell").
  const Rat& at(int level) const;

  // Throws invalid_input unless positive and nondecreasing.
  void validate() const;

  bool is_weight_constrained() const;
  void require_weight_constrained() const;

  // w_{level+1} / w_level for a weight-constrained vector; an exact integer.
  Int ratio(int level) const;
};

// Rounds an arbitrary nondecreasing positive weight vector to a weight-constrained
// one: w'_1 = w_1, w'_i = smallest multiple of w'_{i-1} that is >= max(2 w'_{i-1}, w_i).
// Guarantees w_i <= w'_i <= 2^(i-1) w_i.
WeightVector round_weights(const WeightVector& in);

// Comma-separated rationals, e.g. "1,2" or "1/3,2/3,4/3".
WeightVector parse_weights(const std::string& text);
std::string format_weights(const WeightVector& w);

}  // namespace wks
