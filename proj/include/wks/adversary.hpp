#pragma once

#include <cstdint>
#include <vector>

#include "wks/constants.hpp"
#include "wks/metric.hpp"
#include "wks/weights.hpp"

// Request-sequence generators for experiments: i.i.d. random streams, and
// parser-guided generators that deterministically produce streams parsing
// into a requested number of complete full-depth phases.  The parser-guided
// generators are oblivious: they consult only the deterministic parse state,
// never the strategy's randomness or real server positions.

namespace wks {

struct GeneratorSpec {
  enum class Kind { Uniform, PhaseCompleting, CriticalChaser };

  Kind kind = Kind::Uniform;
  Metric metric;
  WeightVector weights;
  Constants constants = Constants::theoretical();
  std::uint64_t seed = 0;

  std::size_t length = 0;  // Uniform: exact output length
  std::size_t phases = 1;  // PhaseCompleting / CriticalChaser: complete (k,{})-phases to emit

  // Parser-guided kinds: chance (percent) of inserting a non-essential
  // consumable request instead of the next progress-making one, and, for the
  // chaser, the chance that such an insertion targets a demand-bearing or
  // critical point rather than a fresh one.
  unsigned pad_percent = 25;
  unsigned chase_percent = 0;

  std::size_t max_requests = 1'000'000;  // safety budget for parser-guided kinds
};

struct GeneratedStream {
  RequestSequence requests;
  // End position (exclusive) of each completed phase; phase t spans
  // [boundaries[t-1], boundaries[t]) with boundaries[-1] read as 0.
  std::vector<std::size_t> boundaries;
};

// Independent uniform requests over the metric's points.
RequestSequence gen_uniform(const GeneratorSpec& spec);

// Drives the incremental phase parser to exactly spec.phases complete
// (k,{})-phases, mostly via fresh out-of-alphabet points (which both open
// unopened sub-structures and close completed ones), plus occasional random
// consumable padding.  The output is re-parsed before returning.
GeneratedStream gen_phase_completing(const GeneratorSpec& spec);

// Like gen_phase_completing, but padding prefers points carrying demand or
// owning an exploit copy, which makes copies terminate at different times
// and so exercises the strategy's follow-switching.
GeneratedStream gen_critical_chaser(const GeneratorSpec& spec);

}  // namespace wks
