#pragma once

#include <gmpxx.h>

#include <string>

#include "wks/errors.hpp"

namespace wks {

// Exact arithmetic everywhere: costs, weights and constants are rationals, never floats.
using Int = mpz_class;
using Rat = mpq_class;

// Canonical textual form: "num" when the denominator is 1, else "num/den".
std::string to_string(const Rat& q);

// Accepts "3", "-3", "3/4"; rejects zero denominators and garbage.
Rat parse_rational(const std::string& text);

// Smallest integer multiple of `unit` that is >= `value` (unit > 0).
Rat ceil_to_multiple(const Rat& value, const Rat& unit);

// Floor/ceil of a rational as big integers.
Int floor_int(const Rat& q);
Int ceil_int(const Rat& q);

// 2^e for moderate exponents (e >= 0).
Int pow2(unsigned long e);

// Decimal rendering with a fixed number of fraction digits (round toward zero).
// Used for human-facing report columns; exact values stay rational.
std::string to_decimal(const Rat& q, int digits);

}  // namespace wks
