#include "wks/weights.hpp"

#include <sstream>

namespace wks {

const Rat& WeightVector::at(int level) const {
  if (level < 1 || level > k())
    throw invalid_input("weight index " + std::to_string(level) + " out of range 1.." +
                        std::to_string(k()));
  return w[static_cast<std::size_t>(level - 1)];
}

void WeightVector::validate() const {
  if (w.empty()) throw invalid_input("empty weight vector");
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] <= 0) throw invalid_input("weights must be positive");
    if (i > 0 && w[i] < w[i - 1]) throw invalid_input("weights must be nondecreasing");
  }
}

bool WeightVector::is_weight_constrained() const {
  validate();
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] <= w[i - 1]) return false;
    Rat q = w[i] / w[i - 1];
    if (q.get_den() != 1) return false;
  }
  return true;
}

void WeightVector::require_weight_constrained() const {
  if (!is_weight_constrained())
    throw invalid_input("weights are not weight-constrained (use round_weights): " +
                        format_weights(*this));
}

Int WeightVector::ratio(int level) const {
  Rat q = at(level + 1) / at(level);
  if (q.get_den() != 1)
    throw invalid_input("weight ratio w_" + std::to_string(level + 1) + "/w_" +
                        std::to_string(level) + " is not an integer");
  return q.get_num();
}

WeightVector round_weights(const WeightVector& in) {
  in.validate();
  WeightVector out;
  out.w.push_back(in.w[0]);
  for (std::size_t i = 1; i < in.w.size(); ++i) {
    Rat lo = std::max(Rat(2 * out.w[i - 1]), in.w[i]);
    out.w.push_back(ceil_to_multiple(lo, out.w[i - 1]));
  }
  return out;
}

WeightVector parse_weights(const std::string& text) {
  WeightVector w;
  std::string tok;
  std::istringstream in(text);
  while (std::getline(in, tok, ',')) w.w.push_back(parse_rational(tok));
  if (w.w.empty()) throw invalid_input("empty weight vector");
  w.validate();
  return w;
}

std::string format_weights(const WeightVector& w) {
  std::string out;
  for (std::size_t i = 0; i < w.w.size(); ++i) {
    if (i) out += ',';
    out += to_string(w.w[i]);
  }
  return out;
}

}  // namespace wks
