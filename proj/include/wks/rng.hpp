#pragma once

#include <cstdint>
#include <vector>

namespace wks {

// Deterministic splitmix64 stream with hierarchical forking. A fork derives an
// independent child stream from (parent identity, tag) without consuming parent
// state, so a node's randomness is a pure function of the root seed and its path
// in the phase tree — sibling consumption order never matters.
class Rng {
 public:
  // Fork kinds (documented so traces are reproducible by hand): explore
  // child, exploit child i, multiphase child j, t-th top-level phase of an
  // online run, generator decisions, trial t of an experiment.
  static constexpr std::uint64_t kForkExplore = 1;
  static constexpr std::uint64_t kForkExploit = 2;
  static constexpr std::uint64_t kForkMultiphaseChild = 3;
  static constexpr std::uint64_t kForkTopPhase = 4;
  static constexpr std::uint64_t kForkGenerator = 5;
  static constexpr std::uint64_t kForkTrial = 6;

  explicit Rng(std::uint64_t seed);

  std::uint64_t next();
  // Uniform in [0, n), n >= 1. Rejection-sampled, no modulo bias.
  std::uint64_t below(std::uint64_t n);
  // True with probability num/den.
  bool chance(std::uint64_t num, std::uint64_t den);

  // Child stream addressed by (kind, index); never advances this stream.
  Rng fork(std::uint64_t kind, std::uint64_t index) const;

  // Uniform random permutation of {0, ..., n-1} (Fisher–Yates).
  std::vector<std::size_t> permutation(std::size_t n);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;   // stream identity, fixed at construction
  std::uint64_t state_;  // consumption cursor
};

}  // namespace wks
