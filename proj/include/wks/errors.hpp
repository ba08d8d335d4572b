#pragma once

#include <stdexcept>
#include <string>

namespace wks {

// All library errors derive from error; the CLI maps the subclasses to exit codes.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input: bad encodings, invalid weights, out-of-range points, bad config keys.
struct invalid_input : error {
  using error::error;
};

// The metric has fewer points than a critical-set construction (or generator) needs.
struct metric_too_small : error {
  using error::error;
};

// A configured resource budget was exceeded (offline DP state space, harmonic cap, ...).
struct budget_exceeded : error {
  using error::error;
};

// A checked invariant failed (verification subcommands report these).
struct invariant_violation : error {
  using error::error;
};

}  // namespace wks
