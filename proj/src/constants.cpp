#include "wks/constants.hpp"

namespace wks {

namespace {

// Balanced summation keeps intermediate denominators from blowing up linearly.
Rat harmonic_range(unsigned long lo, unsigned long hi) {
  if (lo == hi) return Rat(1, lo);
  unsigned long mid = lo + (hi - lo) / 2;
  return harmonic_range(lo, mid) + harmonic_range(mid + 1, hi);
}

}  // namespace

Rat harmonic(unsigned long n) {
  if (n == 0) return Rat(0);
  return harmonic_range(1, n);
}

Constants Constants::theoretical() { return Constants{}; }

Constants Constants::with_d_profile(const std::vector<Int>& d_values) {
  if (d_values.empty()) throw invalid_input("d profile override must not be empty");
  if (d_values[0] != 1) throw invalid_input("d profile must start with d_1 = 1");
  for (std::size_t i = 1; i < d_values.size(); ++i)
    if (d_values[i] < 2)
      throw invalid_input("d profile values beyond level 1 must be >= 2");
  Constants c;
  c.d_override_ = d_values;
  return c;
}

Int Constants::d(int level) const {
  if (level < 1) throw invalid_input("d: level must be >= 1");
  if (static_cast<std::size_t>(level) <= d_override_.size())
    return d_override_[static_cast<std::size_t>(level - 1)];
  Int exponent;  // 5^(level-1) - 1
  mpz_ui_pow_ui(exponent.get_mpz_t(), 5, static_cast<unsigned long>(level - 1));
  exponent -= 1;
  if (!exponent.fits_ulong_p()) throw budget_exceeded("d exponent too large");
  return pow2(exponent.get_ui());
}

Rat Constants::h_of_d_minus_1(int level) const {
  Int n = d(level) - 1;
  if (n > Int(harmonic_cap))
    throw budget_exceeded("harmonic argument " + n.get_str() + " exceeds cap " +
                          std::to_string(harmonic_cap) +
                          " (theoretical d profile constants are only computable for "
                          "small levels)");
  return harmonic(n.get_ui());
}

Rat Constants::c(int level) const {
  if (level < 1) throw invalid_input("c: level must be >= 1");
  Rat acc = 1;  // c_1
  for (int l = 2; l <= level; ++l) {
    Rat h = h_of_d_minus_1(l);
    acc = (1 + h) * acc + 2 * h;
  }
  return acc;
}

Rat Constants::c_closed_form(int level) const {
  if (level < 1) throw invalid_input("c: level must be >= 1");
  Rat prod = 1;
  for (int l = 2; l <= level; ++l) prod *= 1 + h_of_d_minus_1(l);
  return 3 * prod - 2;
}

Int Constants::F(int level, int heavier) const {
  if (level < 1 || heavier < level) throw invalid_input("F: need 1 <= level <= heavier");
  Int acc = 1;  // F_{1, heavier}
  for (int l = 2; l <= level; ++l)
    acc *= pow2(static_cast<unsigned long>(heavier - l + 3)) * d(l - 1);
  return acc;
}

std::int64_t Constants::critical_size(int level, const Metric& metric) const {
  Int size = d(level) - 1;
  if (size > Int(metric.n_points))
    throw metric_too_small("critical set at level " + std::to_string(level) + " needs " +
                           size.get_str() + " points but the metric has " +
                           std::to_string(metric.n_points));
  return static_cast<std::int64_t>(size.get_si());
}

}  // namespace wks
