#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"
#include "wom/codec.hpp"
#include "wom/construct.hpp"
#include "wom/polar.hpp"
#include "wom/rng.hpp"
#include "wom/sc.hpp"

using namespace wom;

namespace {

HighEntropySet manual_set(std::size_t n, std::vector<std::uint32_t> indices,
                          double s = 0.5, double t = 0.5) {
  HighEntropySet set;
  set.n_cells = n;
  set.s = s;
  set.t = t;
  set.indices = std::move(indices);
  return set;
}

BitVec random_message(SplitMix64& rng, std::size_t len) {
  BitVec v(len);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng.next() & 1u);
  return v;
}

// 99% chi-square quantile via the Wilson-Hilferty approximation.
double chi2_q99(double df) {
  const double z = 2.3263478740408408;
  const double c = 2.0 / (9.0 * df);
  const double base = 1.0 - c + z * std::sqrt(c);
  return df * base * base * base;
}

}  // namespace

TEST_CASE("all-ones state always succeeds and round-trips") {
  const SourceModel model(0.5, 0.5);
  const IndexStats stats = exact_statistics(model, 8);
  const HighEntropySet set =
      select_high_entropy_set(stats, SelectMode::target_rate, 1.0);
  const BitVec state(8, 1);
  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const BitVec message = random_message(rng, set.message_length());
    const EncodeOutcome outcome = encode(model, set, state, message, trial);
    REQUIRE(outcome.ok());
    CHECK(outcome.attempts_used == 1);
    CHECK(validate_write(state, outcome.codeword).empty());
    CHECK(decode(outcome.codeword, set) == message);
    CHECK(outcome.flips == count_flips(state, outcome.codeword));
  }
}

TEST_CASE("an all-zero state cannot store a bit") {
  const SourceModel model(0.5, 0.5);
  const HighEntropySet set = manual_set(2, {1});
  const EncodeOutcome outcome = encode(model, set, {0, 0}, {1}, 3);
  CHECK_FALSE(outcome.ok());
  CHECK(outcome.attempts_used == 8);  // default budget exhausted
  CHECK((outcome.status == EncodeStatus::zero_probability ||
         outcome.status == EncodeStatus::write_violation));
}

TEST_CASE("failure kinds are reported precisely") {
  const SourceModel model(0.5, 0.3);
  // y=(0,0) with the message on index 0: the forced 1 makes the prefix
  // impossible, caught at the sampled index 1.
  const EncodeOutcome zero =
      encode(model, manual_set(2, {0}, 0.5, 0.3), {0, 0}, {1}, 5);
  CHECK(zero.status == EncodeStatus::zero_probability);
  CHECK(zero.failure_index == 1);

  // y=(1,0) forces the second transformed bit to 0; the message demands 1 and
  // no sampled index follows, so the violation surfaces on the codeword.
  const EncodeOutcome viol =
      encode(model, manual_set(2, {1}, 0.5, 0.3), {1, 0}, {1}, 5);
  CHECK(viol.status == EncodeStatus::write_violation);
  CHECK_FALSE(viol.violations.empty());
  CHECK(viol.attempts_used == 8);

  // The same state stores a 0 fine.
  const EncodeOutcome good =
      encode(model, manual_set(2, {1}, 0.5, 0.3), {1, 0}, {0}, 5);
  CHECK(good.ok());
}

TEST_CASE("argument errors are distinct from encode failures") {
  const SourceModel model(0.5, 0.5);
  const HighEntropySet set = manual_set(4, {0, 1});
  CHECK_THROWS_AS(encode(model, set, BitVec(3, 1), {0, 0}, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(encode(model, set, BitVec(4, 1), {0}, 1), std::invalid_argument);
  EncodeOptions opts;
  opts.max_attempts = 0;
  CHECK_THROWS_AS(encode(model, set, BitVec(4, 1), {0, 0}, 1, opts),
                  std::invalid_argument);
  CHECK_THROWS_AS(decode(BitVec(3, 0), set), std::invalid_argument);
}

TEST_CASE("decode reads the selected positions after the transform") {
  // x=(0,1) transforms to u=(1,1); the set {1} reads v=(1).
  const HighEntropySet set = manual_set(2, {1});
  CHECK(decode({0, 1}, set) == BitVec{1});
  // Empty set decodes to the empty message.
  const HighEntropySet empty = manual_set(4, {});
  CHECK(decode({1, 0, 1, 1}, empty).empty());
}

TEST_CASE("decode is deterministic and seedless by construction") {
  const HighEntropySet set = manual_set(8, {0, 3, 5});
  SplitMix64 rng(9);
  for (int trial = 0; trial < 50; ++trial) {
    BitVec x(8);
    for (auto& b : x) b = static_cast<std::uint8_t>(rng.next() & 1u);
    CHECK(decode(x, set) == decode(x, set));
  }
}

TEST_CASE("validate_write") {
  CHECK(validate_write({0, 1}, {0, 1}).empty());
  CHECK(validate_write({0, 1}, {1, 0}) == std::vector<std::size_t>{0});
  CHECK(validate_write({0, 0, 1}, {1, 1, 0}) == std::vector<std::size_t>{0, 1});
  CHECK_THROWS_AS(validate_write({0}, {0, 1}), std::invalid_argument);
}

TEST_CASE("identical inputs give identical outcomes") {
  const SourceModel model(0.5, 0.5);
  const IndexStats stats = exact_statistics(model, 8);
  const HighEntropySet set =
      select_high_entropy_set(stats, SelectMode::target_rate, 0.8);
  const BitVec state = sample_state(model, 8, 77);
  SplitMix64 rng(5);
  const BitVec message = random_message(rng, set.message_length());
  const EncodeOutcome a = encode(model, set, state, message, 31);
  const EncodeOutcome b = encode(model, set, state, message, 31);
  CHECK(a.status == b.status);
  CHECK(a.codeword == b.codeword);
  CHECK(a.attempts_used == b.attempts_used);
}

TEST_CASE("sampled bits follow the reported distribution") {
  // With nothing selected and one open cell, the single decision is drawn
  // from (t, 1-t); check the empirical frequency.
  const SourceModel model(0.5, 0.3);
  const HighEntropySet set = manual_set(1, {}, 0.5, 0.3);
  const BitVec state{1};
  std::size_t zeros = 0;
  const int trials = 200000;
  for (int trial = 0; trial < trials; ++trial) {
    const EncodeOutcome outcome = encode(model, set, state, {}, trial);
    REQUIRE(outcome.ok());
    zeros += (outcome.codeword[0] == 0);
  }
  const double sigma = std::sqrt(0.3 * 0.7 / trials);
  CHECK(std::fabs(zeros / double(trials) - 0.3) < 4 * sigma);
}

TEST_CASE("greedy mode takes the argmax and never retries") {
  const HighEntropySet set = manual_set(1, {}, 0.5, 0.3);
  const BitVec state{1};
  EncodeOptions opts;
  opts.greedy = true;
  // t=0.3: argmax of (0.3, 0.7) is the set bit.
  const EncodeOutcome low = encode(SourceModel(0.5, 0.3), set, state, {}, 1, opts);
  CHECK(low.ok());
  CHECK(low.codeword == BitVec{1});
  const HighEntropySet set7 = manual_set(1, {}, 0.5, 0.7);
  const EncodeOutcome high = encode(SourceModel(0.5, 0.7), set7, state, {}, 1, opts);
  CHECK(high.codeword == BitVec{0});

  // Deterministic failures exhaust after a single attempt.
  const EncodeOutcome fail =
      encode(SourceModel(0.5, 0.5), manual_set(2, {1}), {1, 0}, {1}, 1, opts);
  CHECK_FALSE(fail.ok());
  CHECK(fail.attempts_used == 1);
}

TEST_CASE("round-trip and validity over seeded trials at N=1024") {
  const SourceModel model(0.5, 0.5);
  const HighEntropySet set = select_high_entropy_set(
      estimate_statistics(model, 1024, 20000, 6), SelectMode::target_rate, 0.8);
  std::uint64_t successes = 0;
  double flip_sum = 0.0;
  for (std::uint64_t trial = 0; trial < 300; ++trial) {
    const BitVec state = sample_state(model, 1024, mix_seed(99, 2 * trial));
    SplitMix64 rng(mix_seed(99, 2 * trial + 1));
    const BitVec message = random_message(rng, set.message_length());
    const EncodeOutcome outcome = encode(model, set, state, message, trial);
    if (!outcome.ok()) continue;
    ++successes;
    CHECK(validate_write(state, outcome.codeword).empty());
    CHECK(decode(outcome.codeword, set) == message);
    flip_sum += double(outcome.flips) / 1024.0;
  }
  CHECK(successes > 250);  // failures are rare at this rate
  // Successful writes flip about (1-s)t of the cells.
  CHECK(std::fabs(flip_sum / double(successes) - 0.25) < 0.03);
}

TEST_CASE("the encoder induces exactly the reference distribution") {
  // Single-attempt encodes sample (y, u) from Q precisely: uniform bits on
  // the selected indices, model conditionals elsewhere, with the impossible
  // region collapsing into one failure bin.
  const std::size_t n = 4;
  const SourceModel model(0.5, 0.5);
  const IndexStats stats = exact_statistics(model, n);
  const HighEntropySet set =
      select_high_entropy_set(stats, SelectMode::target_rate, 1.0);
  REQUIRE(set.indices == std::vector<std::uint32_t>{0, 1});

  // Exact Q over valid (y, u) cells, from the enumeration oracle.
  const auto g = gn_matrix(2);
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> q_valid;
  double q_fail = 1.0;
  for (std::uint32_t yw = 0; yw < 16; ++yw) {
    BitVec y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = (yw >> i) & 1u;
    double py = 1.0;
    for (std::size_t i = 0; i < n; ++i) py *= y[i] ? 0.5 : 0.5;  // s = 0.5
    for (std::uint32_t uw = 0; uw < 16; ++uw) {
      BitVec u(n);
      for (std::size_t i = 0; i < n; ++i) u[i] = (uw >> i) & 1u;
      const BitVec x = matrix_apply(g, u);
      bool valid = true;
      for (std::size_t i = 0; i < n; ++i)
        if (y[i] == 0 && x[i] == 1) valid = false;
      if (!valid) continue;
      double q = py;
      BitVec prefix;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == set.indices[0] || i == set.indices[1]) {
          q *= 0.5;
        } else {
          const ProbPair d = brute_force_conditional(model, y, prefix);
          q *= u[i] ? d.p1 : d.p0;
        }
        prefix.push_back(u[i]);
      }
      q_valid[{yw, uw}] = q;
      q_fail -= q;
    }
  }

  const std::uint64_t trials = 1000000;
  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
  std::uint64_t failures = 0;
  EncodeOptions opts;
  opts.max_attempts = 1;  // one draw from Q per trial, no retry conditioning
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    const BitVec y = sample_state(model, n, mix_seed(1234, 3 * trial));
    SplitMix64 rng(mix_seed(1234, 3 * trial + 1));
    const BitVec message = random_message(rng, 2);
    const EncodeOutcome outcome =
        encode(model, set, y, message, mix_seed(1234, 3 * trial + 2), opts);
    std::uint32_t yw = 0;
    for (std::size_t i = 0; i < n; ++i) yw |= std::uint32_t(y[i]) << i;
    if (!outcome.ok()) {
      ++failures;
      continue;
    }
    const BitVec u = polar_transform(outcome.codeword);
    std::uint32_t uw = 0;
    for (std::size_t i = 0; i < n; ++i) uw |= std::uint32_t(u[i]) << i;
    REQUIRE(q_valid.count({yw, uw}) == 1);
    ++counts[{yw, uw}];
  }

  double chi2 = 0.0;
  std::size_t bins = 0;
  for (const auto& [cell, q] : q_valid) {
    const double expected = q * trials;
    REQUIRE(expected >= 5.0);
    const double observed = counts.count(cell) ? double(counts[cell]) : 0.0;
    chi2 += (observed - expected) * (observed - expected) / expected;
    ++bins;
  }
  const double expected_fail = q_fail * trials;
  REQUIRE(expected_fail >= 5.0);
  chi2 += (failures - expected_fail) * (failures - expected_fail) / expected_fail;
  ++bins;

  CHECK(bins == 82);  // 3^4 valid cells plus the failure bin
  CHECK(chi2 < chi2_q99(double(bins - 1)));
}
