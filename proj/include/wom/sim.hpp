#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "wom/codec.hpp"
#include "wom/construct.hpp"
#include "wom/model.hpp"

namespace wom {

struct ExperimentReport {
  std::size_t n_cells = 0;
  double s = 0.0;
  double t = 0.0;
  double rate = 0.0;      // message bits per cell
  double capacity = 0.0;  // (1-s) H(t)
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  std::uint64_t zero_prob_failures = 0;
  std::uint64_t violations = 0;
  double flip_mean = 0.0;    // flip fraction over successful writes
  double flip_stderr = 0.0;
  double seconds = 0.0;      // wall clock; not part of the stable output
  // Round-trip check bookkeeping; not part of the CSV/JSON schema.
  std::uint64_t decode_mismatches = 0;
};

// One write cycle per trial: sample a state, draw a uniform message, encode,
// validate, decode and compare. Failures are counted, never thrown.
// Deterministic given seed.
ExperimentReport run_write_experiment(const SourceModel& model,
                                      const HighEntropySet& set,
                                      std::uint64_t trials, std::uint64_t seed);

struct MultiwriteConfig {
  Method method = Method::monte_carlo;
  std::uint64_t samples = 100000;
  double target_rate = 0.8;
};

// Construction seed run_multiwrite derives from the experiment seed; exposed
// so callers can rebuild the exact sets it used.
std::uint64_t multiwrite_construction_seed(std::uint64_t seed);

// One trial-step of the multi-write chain: measure the zero fraction of
// `state`, quantize it, fetch/build the matching set, encode a fresh uniform
// message. On success the codeword is the next state; on failure the state
// is left unchanged (the write is aborted). Exposed for testing.
struct WriteStep {
  bool ok = false;
  EncodeStatus failure = EncodeStatus::ok;
  BitVec next_state;
  std::size_t message_bits = 0;
  double s_used = 0.0;        // quantized zero fraction driving construction
  std::size_t flips = 0;
  bool round_trip_ok = false;
};
WriteStep write_once(SetCache& cache, const BitVec& state, double t,
                     std::uint64_t msg_seed, std::uint64_t enc_seed,
                     std::uint64_t cons_seed, const MultiwriteConfig& config);

// Chained writes: write 1 starts from fresh all-ones memory; each later write
// k re-measures the empirical zero fraction per trial and constructs (or
// reuses) a set at the quantized parameters. One report per schedule entry.
std::vector<ExperimentReport> run_multiwrite(const std::vector<double>& t_schedule,
                                             std::size_t n_cells,
                                             std::uint64_t trials,
                                             std::uint64_t seed,
                                             const MultiwriteConfig& config = {});

struct TvReport {
  std::size_t n_cells = 0;
  double tv = 0.0;     // exact total variation between P and Q over (y, u)
  double bound = 0.0;  // 2 * sum over selected indices of exact a_i
};

// Exact comparison of the model distribution P with the encoder-induced
// distribution Q (uniform on selected indices, model conditionals elsewhere).
// Enumerates all (y, u); rejects n_cells > 8.
TvReport tv_distance_exact(const SourceModel& model, const HighEntropySet& set);

// CSV: fixed 12-column header
// N,s,t,rate,capacity,trials,successes,zero_prob_failures,violations,flip_mean,flip_stderr,seconds
// and a JSON mirror with identical field names. Timing is reported as 0
// unless include_timing is set: byte-identical reruns are the default
// contract, and wall clock would break it.
std::string reports_to_csv(std::span<const ExperimentReport> reports,
                           bool include_timing = false);
std::string reports_to_json(std::span<const ExperimentReport> reports,
                            bool include_timing = false);

}  // namespace wom
