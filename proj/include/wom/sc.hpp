#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wom/bits.hpp"
#include "wom/model.hpp"
#include "wom/polar.hpp"

namespace wom {

// Conditional distribution of one transformed bit. (0,0) is the distinguished
// "impossible" value returned when the fixed prefix has probability zero; it
// is never silently normalized.
struct ProbPair {
  double p0 = 0.0;
  double p1 = 0.0;

  bool impossible() const { return p0 == 0.0 && p1 == 0.0; }
};

// P(X = . | y) for a single cell: y=0 forces (1,0); y=1 gives (t, 1-t).
ProbPair leaf_pair(const SourceModel& model, int y_bit);

// Successive computation of P(U_i | y, u_0..u_{i-1}) where u = x * G_N and
// the x_i are independent given y with the per-cell conditionals above.
//
// The transform splits recursively: with a_k = x_{2k} xor x_{2k+1} and
// b_k = x_{2k+1}, the first N/2 decisions are the transform of a and the last
// N/2 the transform of b. The a_k are independent given y with
//   P(a_k = v) = sum_w P(x_{2k} = v^w) P(x_{2k+1} = w),
// and once the first half is decided the realized a is recoverable (the
// half-size transform is self-inverse), leaving b_k independent with
//   P(b_k = w | a_k) prop. to P(x_{2k} = a_k^w) P(x_{2k+1} = w).
// The engine keeps the chain of half-size problems along the path to the
// current index and rebuilds a level only when the index moves out of its
// subtree, for O(N log N) total work per full pass.
//
// Internally a conditional is a single normalized P(bit = 0); NaN marks the
// impossible value, which every combine rule propagates.
class ScEngine {
 public:
  // Requires length(y) a power of two; throws std::invalid_argument.
  ScEngine(const SourceModel& model, const BitVec& y);

  std::size_t size() const { return n_; }
  std::size_t cursor() const { return u_.size(); }
  bool done() const { return u_.size() == n_; }
  const BitVec& decisions() const { return u_; }

  // Distribution of the bit at the cursor given everything fixed so far.
  // Throws std::out_of_range once all N bits are fixed.
  ProbPair dist();

  // Fix the cursor bit (0 or 1) and move on. Fixing a zero-probability bit is
  // permitted; later dist() calls then return the impossible pair.
  void advance(int bit);

 private:
  void ensure_path();

  std::size_t n_;
  unsigned log2n_;
  BitVec u_;
  std::vector<std::vector<double>> level_;  // level_[k]: current path frame
  std::vector<std::size_t> frame_;          // frame index held at level k
  BitVec scratch_;
};

// One depth-first pass with all decisions forced to u, visiting
// P(U_i = 0 | y, u_0..u_{i-1}) for i = 0..N-1 in order (NaN = impossible
// prefix). Same recursion as ScEngine without the incremental bookkeeping;
// this is the hot path of Monte Carlo construction, so the recursion bottoms
// out at two-decision nodes and the bit-reversal tables are precomputed.
class ForcedScan {
 public:
  explicit ForcedScan(std::size_t n_cells);

  template <class Visit>  // void(std::size_t index, double p0)
  void run(const SourceModel& model, const BitVec& y, const BitVec& u,
           Visit&& visit);

 private:
  // Transform of the u-slice [off, off+len), via the level-k scratch.
  const BitVec& transformed_slice(const BitVec& u, std::size_t off, unsigned k);

  std::size_t n_;
  unsigned log2n_;
  std::vector<std::vector<double>> level_;
  std::vector<BitVec> xors_;
  std::vector<std::vector<std::uint32_t>> rev_;  // rev_[k]: table for size n>>k
};

// Enumeration oracle: P(U_i | y, prefix) with i = prefix length, by summing
// P(x | y) over all x whose transform extends the prefix. Uses the dense
// gn_matrix, not the fast transform. Cost 2^N; rejects N > 12.
ProbPair brute_force_conditional(const SourceModel& model, const BitVec& y,
                                 const BitVec& prefix);

// Product of the sequential conditionals of u along a full pass; equals
// P(x | y) for x the inverse transform of u. Returns 0 for impossible u.
double chain_probability(const SourceModel& model, const BitVec& y,
                         const BitVec& u);

namespace detail {

// P(A xor B = 0) from P(A=0)=a, P(B=0)=b. Propagates NaN.
inline double combine_xor(double a, double b) {
  return 1.0 - a - b + 2.0 * a * b;
}

// P(B = 0 | A xor B = v). 0/0 yields NaN, the impossible marker.
inline double combine_given(double a, double b, int v) {
  const double n0 = (v ? 1.0 - a : a) * b;
  const double n1 = (v ? a : 1.0 - a) * (1.0 - b);
  return n0 / (n0 + n1);
}

void build_upper(const std::vector<double>& parent, std::vector<double>& child);
void build_lower(const std::vector<double>& parent, const BitVec& xors,
                 std::vector<double>& child);
ProbPair pair_from_p0(double p0);

}  // namespace detail

template <class Visit>
void ForcedScan::run(const SourceModel& model, const BitVec& y, const BitVec& u,
                     Visit&& visit) {
  if (y.size() != n_ || u.size() != n_)
    throw std::invalid_argument("ForcedScan: length mismatch");
  std::vector<double>& base = level_[0];
  const double t = model.t();
  for (std::size_t i = 0; i < n_; ++i) base[i] = y[i] ? t : 1.0;

  if (n_ == 1) {
    visit(0, base[0]);
    return;
  }

  // Recursive walk over (level, offset of this subproblem's decisions in u).
  auto walk = [&](auto&& self, unsigned k, std::size_t u_off) -> void {
    const std::vector<double>& here = level_[k];
    if (here.size() == 2) {
      const double qa = here[0], qb = here[1];
      visit(u_off, detail::combine_xor(qa, qb));
      visit(u_off + 1, detail::combine_given(qa, qb, u[u_off]));
      return;
    }
    const std::size_t half = here.size() / 2;
    detail::build_upper(here, level_[k + 1]);
    self(self, k + 1, u_off);
    detail::build_lower(here, transformed_slice(u, u_off, k + 1), level_[k + 1]);
    self(self, k + 1, u_off + half);
  };
  walk(walk, 0, 0);
}

}  // namespace wom
