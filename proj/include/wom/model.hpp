#pragma once

#include <cstdint>
#include <utility>

#include "wom/bits.hpp"

namespace wom {

// Cell/state model. Cell states Y are iid with P(Y=0) = s. A codeword bit X
// over a cell in state 0 is forced to 0; over a cell in state 1 it is 0 with
// probability t and 1 with probability 1-t.
class SourceModel {
 public:
  // Requires 0 < s < 1 and 0 < t < 1; throws std::invalid_argument otherwise.
  SourceModel(double s, double t);

  // Fresh memory: every cell in state 1 (s = 0). Used for the first write of
  // a multi-write schedule, where no cell constraints are active yet. Not
  // reachable through the checked constructor.
  static SourceModel first_write(double t);

  double s() const { return s_; }
  double t() const { return t_; }

  double p_x0() const { return s_ + (1.0 - s_) * t_; }  // marginal P(X=0)

 private:
  SourceModel(double s, double t, bool checked);

  double s_;
  double t_;
};

struct ModelStats {
  double conditional_entropy;     // H(X|Y) = (1-s) H(t), bits per cell
  double capacity;                // rewrite capacity, equals conditional_entropy
  double expected_flip_fraction;  // (1-s) t
};

// Binary entropy in bits, with the convention 0 log(1/0) = 0.
// Throws std::domain_error for p outside [0,1].
double entropy(double p);

ModelStats model_stats(const SourceModel& model);

// Each bit independently 0 with probability s. Deterministic given seed.
BitVec sample_state(const SourceModel& model, std::size_t n, std::uint64_t seed);

// Joint draw of (y, x): y as in sample_state, x conditionally per the model.
// x[i] = 0 whenever y[i] = 0.
std::pair<BitVec, BitVec> sample_joint(const SourceModel& model, std::size_t n,
                                       std::uint64_t seed);

// Number of positions with before = 1 and after = 0 (cells written down).
// Throws std::invalid_argument on length mismatch.
std::size_t count_flips(const BitVec& before, const BitVec& after);

}  // namespace wom
