#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "wom/model.hpp"
#include "wom/rng.hpp"

using namespace wom;

TEST_CASE("entropy reference values") {
  CHECK(entropy(0.5) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(entropy(0.0) == 0.0);
  CHECK(entropy(1.0) == 0.0);
  // 2 - 0.75*log2(3), evaluated independently.
  CHECK(entropy(0.25) == doctest::Approx(0.8112781244591329).epsilon(1e-13));
  CHECK_THROWS_AS(entropy(-0.01), std::domain_error);
  CHECK_THROWS_AS(entropy(1.01), std::domain_error);
}

TEST_CASE("entropy symmetry and concavity") {
  for (int i = 0; i <= 100; ++i) {
    const double p = i / 100.0;
    CHECK(entropy(p) == doctest::Approx(entropy(1.0 - p)).epsilon(1e-12));
  }
  SplitMix64 rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    const double a = rng.next_double();
    const double b = rng.next_double();
    const double mid = entropy((a + b) / 2.0);
    const double avg = (entropy(a) + entropy(b)) / 2.0;
    CHECK(mid >= avg - 1e-12);
  }
}

TEST_CASE("model construction rejects boundary parameters") {
  CHECK_THROWS_AS(SourceModel(0.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(1.0, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(0.5, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(SourceModel(0.5, 1.0), std::invalid_argument);
  const SourceModel m(0.3, 0.25);
  CHECK(m.p_x0() == doctest::Approx(0.3 + 0.7 * 0.25));
}

TEST_CASE("model stats from the capacity formulas") {
  const ModelStats even = model_stats(SourceModel(0.5, 0.5));
  CHECK(even.capacity == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(even.conditional_entropy == even.capacity);
  CHECK(even.expected_flip_fraction == doctest::Approx(0.25).epsilon(1e-14));

  // (1-s) H(t) with s=0.9, t=0.5 is 0.1 exactly; the flip fraction is 0.05.
  const ModelStats skew = model_stats(SourceModel(0.9, 0.5));
  CHECK(skew.capacity == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(skew.expected_flip_fraction == doctest::Approx(0.05).epsilon(1e-12));

  const ModelStats quarter = model_stats(SourceModel(0.3, 0.25));
  CHECK(quarter.capacity == doctest::Approx(0.7 * 0.8112781244591329).epsilon(1e-13));
}

TEST_CASE("first-write model is fresh memory") {
  const SourceModel fresh = SourceModel::first_write(0.5);
  CHECK(fresh.s() == 0.0);
  const BitVec y = sample_state(fresh, 64, 99);
  for (auto b : y) CHECK(b == 1);
  CHECK(model_stats(fresh).capacity == doctest::Approx(1.0));
}

TEST_CASE("sample_state statistics and determinism") {
  const std::size_t n = 100000;
  const SourceModel even(0.5, 0.5);
  const BitVec a = sample_state(even, n, 42);
  const BitVec b = sample_state(even, n, 42);
  CHECK(a == b);
  CHECK(a != sample_state(even, n, 43));

  std::size_t zeros = 0;
  for (auto bit : a) zeros += (bit == 0);
  CHECK(std::fabs(zeros / double(n) - 0.5) < 0.01);

  const SourceModel skew(0.9, 0.5);
  const BitVec c = sample_state(skew, n, 42);
  zeros = 0;
  for (auto bit : c) zeros += (bit == 0);
  CHECK(std::fabs(zeros / double(n) - 0.9) < 0.01);
}

TEST_CASE("sample_joint honors the cell constraint and marginals") {
  const std::size_t n = 100000;
  const SourceModel model(0.5, 0.5);
  const auto [y, x] = sample_joint(model, n, 4242);
  const auto [y2, x2] = sample_joint(model, n, 4242);
  CHECK(y == y2);
  CHECK(x == x2);

  std::size_t raised = 0, flips = 0, zeros_y = 0, zeros_x = 0;
  for (std::size_t i = 0; i < n; ++i) {
    raised += (y[i] == 0 && x[i] == 1);
    flips += (y[i] == 1 && x[i] == 0);
    zeros_y += (y[i] == 0);
    zeros_x += (x[i] == 0);
  }
  CHECK(raised == 0);
  // (1-s)t = 0.25; 3-sigma binomial bands at n = 1e5.
  const double sigma_flip = std::sqrt(0.25 * 0.75 / n);
  CHECK(std::fabs(flips / double(n) - 0.25) < 3 * sigma_flip + 1e-9);
  const double sigma_y = std::sqrt(0.25 / n);
  CHECK(std::fabs(zeros_y / double(n) - 0.5) < 3 * sigma_y + 1e-9);
  const double p_x0 = model.p_x0();
  const double sigma_x = std::sqrt(p_x0 * (1 - p_x0) / n);
  CHECK(std::fabs(zeros_x / double(n) - p_x0) < 3 * sigma_x + 1e-9);
}

TEST_CASE("count_flips") {
  CHECK(count_flips({1, 1, 0, 1}, {0, 1, 0, 0}) == 2);
  CHECK(count_flips({1, 0, 1}, {1, 0, 1}) == 0);
  CHECK(count_flips(BitVec(16, 1), BitVec(16, 0)) == 16);
  CHECK_THROWS_AS(count_flips({1, 1}, {1}), std::invalid_argument);
}
