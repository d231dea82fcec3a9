#include "wom/codec.hpp"

#include <stdexcept>

#include "wom/polar.hpp"
#include "wom/rng.hpp"
#include "wom/sc.hpp"

namespace wom {

namespace {

struct AttemptResult {
  EncodeStatus status;
  BitVec codeword;
  std::size_t failure_index = 0;
  std::vector<std::size_t> violations;
};

AttemptResult run_attempt(const SourceModel& model, const BitVec& state,
                          const BitVec& message, std::uint64_t attempt_seed,
                          bool greedy, const std::vector<std::uint8_t>& in_set) {
  SplitMix64 rng(attempt_seed);
  ScEngine engine(model, state);
  std::size_t next_message = 0;
  const std::size_t n = state.size();

  for (std::size_t i = 0; i < n; ++i) {
    if (in_set[i]) {
      engine.advance(message[next_message++]);
      continue;
    }
    const ProbPair d = engine.dist();
    if (d.impossible())
      return AttemptResult{EncodeStatus::zero_probability, {}, i, {}};
    int bit;
    if (greedy)
      bit = d.p0 >= d.p1 ? 0 : 1;
    else
      bit = rng.next_double() < d.p0 ? 0 : 1;
    engine.advance(bit);
  }

  BitVec codeword = engine.decisions();
  polar_transform_inplace(codeword);  // self-inverse map back to x
  auto violations = validate_write(state, codeword);
  if (!violations.empty())
    return AttemptResult{EncodeStatus::write_violation, {}, 0, std::move(violations)};
  return AttemptResult{EncodeStatus::ok, std::move(codeword), 0, {}};
}

}  // namespace

EncodeOutcome encode(const SourceModel& model, const HighEntropySet& set,
                     const BitVec& state, const BitVec& message,
                     std::uint64_t seed, const EncodeOptions& options) {
  if (state.size() != set.n_cells)
    throw std::invalid_argument("encode: state length does not match the set");
  if (message.size() != set.message_length())
    throw std::invalid_argument("encode: message length does not match the set");
  if (options.max_attempts == 0)
    throw std::invalid_argument("encode: max_attempts must be positive");

  std::vector<std::uint8_t> in_set(set.n_cells, 0);
  for (auto i : set.indices) {
    if (i >= set.n_cells)
      throw std::invalid_argument("encode: set index out of range");
    in_set[i] = 1;
  }

  // Greedy sampling is deterministic, so retries cannot change the outcome.
  const std::uint32_t attempts = options.greedy ? 1 : options.max_attempts;

  EncodeOutcome outcome;
  for (std::uint32_t attempt = 0; attempt < attempts; ++attempt) {
    AttemptResult r = run_attempt(model, state, message, mix_seed(seed, attempt),
                                  options.greedy, in_set);
    outcome.status = r.status;
    outcome.failure_index = r.failure_index;
    outcome.violations = std::move(r.violations);
    outcome.attempts_used = attempt + 1;
    if (r.status == EncodeStatus::ok) {
      outcome.codeword = std::move(r.codeword);
      outcome.flips = count_flips(state, outcome.codeword);
      return outcome;
    }
  }
  return outcome;
}

BitVec decode(const BitVec& codeword, const HighEntropySet& set) {
  if (codeword.size() != set.n_cells)
    throw std::invalid_argument("decode: codeword length does not match the set");
  BitVec u = polar_transform(codeword);
  BitVec message;
  message.reserve(set.indices.size());
  for (auto i : set.indices) {
    if (i >= set.n_cells)
      throw std::invalid_argument("decode: set index out of range");
    message.push_back(u[i]);
  }
  return message;
}

std::vector<std::size_t> validate_write(const BitVec& before, const BitVec& after) {
  if (before.size() != after.size())
    throw std::invalid_argument("validate_write: length mismatch");
  std::vector<std::size_t> raised;
  for (std::size_t i = 0; i < before.size(); ++i)
    if (before[i] == 0 && after[i] == 1) raised.push_back(i);
  return raised;
}

}  // namespace wom
