#pragma once

#include <cstdint>
#include <vector>

#include "wom/bits.hpp"
#include "wom/construct.hpp"
#include "wom/model.hpp"

namespace wom {

enum class EncodeStatus {
  ok,
  zero_probability,  // a sampled index saw the impossible distribution
  write_violation,   // final codeword raises a cell (0 -> 1)
};

struct EncodeOutcome {
  EncodeStatus status = EncodeStatus::ok;
  BitVec codeword;                     // valid only on success
  std::size_t failure_index = 0;       // zero_probability: offending index
  std::vector<std::size_t> violations; // write_violation: positions
  std::uint32_t attempts_used = 0;
  std::size_t flips = 0;               // cells written 1 -> 0 (success only)

  bool ok() const { return status == EncodeStatus::ok; }
};

struct EncodeOptions {
  std::uint32_t max_attempts = 8;
  // Non-default extension: set sampled bits to the argmax of their
  // distribution instead of drawing from it. Deterministic, so only one
  // attempt is ever made.
  bool greedy = false;
};

// Randomized rewrite encoding. Walks indices 0..N-1: message positions take
// the next message bit, all others are drawn from the sequential conditional
// distribution. The codeword is the inverse transform of the decisions.
// Failures are detected (impossible distribution at a sampled index, or a
// raised cell after the fact) and retried with seeds mix_seed(seed, attempt)
// up to max_attempts, message unchanged; the last failure is reported.
// Dimension mismatches throw std::invalid_argument.
EncodeOutcome encode(const SourceModel& model, const HighEntropySet& set,
                     const BitVec& state, const BitVec& message,
                     std::uint64_t seed, const EncodeOptions& options = {});

// Transform the codeword and read the message positions in ascending order.
// Deterministic and total; needs no seed and no model.
BitVec decode(const BitVec& codeword, const HighEntropySet& set);

// Positions where before = 0 and after = 1 (raised cells); empty means the
// write is admissible. Throws std::invalid_argument on length mismatch.
std::vector<std::size_t> validate_write(const BitVec& before, const BitVec& after);

}  // namespace wom
