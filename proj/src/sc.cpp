#include "wom/sc.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace wom {

namespace detail {

void build_upper(const std::vector<double>& parent, std::vector<double>& child) {
  const std::size_t half = parent.size() / 2;
  child.resize(half);
  for (std::size_t j = 0; j < half; ++j)
    child[j] = combine_xor(parent[2 * j], parent[2 * j + 1]);
}

void build_lower(const std::vector<double>& parent, const BitVec& xors,
                 std::vector<double>& child) {
  const std::size_t half = parent.size() / 2;
  child.resize(half);
  for (std::size_t j = 0; j < half; ++j)
    child[j] = combine_given(parent[2 * j], parent[2 * j + 1], xors[j]);
}

ProbPair pair_from_p0(double p0) {
  if (std::isnan(p0)) return ProbPair{0.0, 0.0};
  if (p0 < 0.0) p0 = 0.0;
  if (p0 > 1.0) p0 = 1.0;
  return ProbPair{p0, 1.0 - p0};
}

}  // namespace detail

ProbPair leaf_pair(const SourceModel& model, int y_bit) {
  return y_bit ? ProbPair{model.t(), 1.0 - model.t()} : ProbPair{1.0, 0.0};
}

ScEngine::ScEngine(const SourceModel& model, const BitVec& y) : n_(y.size()) {
  if (!is_power_of_two(n_))
    throw std::invalid_argument("ScEngine: state length is not a power of two");
  log2n_ = static_cast<unsigned>(std::countr_zero(n_));
  u_.reserve(n_);
  level_.resize(log2n_ + 1);
  frame_.assign(log2n_ + 1, static_cast<std::size_t>(-1));
  for (unsigned k = 0; k <= log2n_; ++k) level_[k].resize(n_ >> k);
  const double t = model.t();
  for (std::size_t i = 0; i < n_; ++i) level_[0][i] = y[i] ? t : 1.0;
  frame_[0] = 0;
  scratch_.reserve(n_ / 2);
}

void ScEngine::ensure_path() {
  const std::size_t i = u_.size();
  for (unsigned k = 1; k <= log2n_; ++k) {
    const std::size_t p = i >> (log2n_ - k);
    if (frame_[k] == p) continue;
    const std::vector<double>& parent = level_[k - 1];
    if ((p & 1) == 0) {
      detail::build_upper(parent, level_[k]);
    } else {
      // The parent's first half is fully decided; its inverse transform
      // recovers the realized pairwise xors this lower branch conditions on.
      const std::size_t half = n_ >> k;
      const std::size_t start = (p >> 1) * (n_ >> (k - 1));
      scratch_.assign(u_.begin() + start, u_.begin() + start + half);
      polar_transform_inplace(scratch_);
      detail::build_lower(parent, scratch_, level_[k]);
    }
    frame_[k] = p;
  }
}

ProbPair ScEngine::dist() {
  if (done()) throw std::out_of_range("ScEngine::dist: all bits fixed");
  ensure_path();
  return detail::pair_from_p0(level_[log2n_][0]);
}

void ScEngine::advance(int bit) {
  if (done()) throw std::out_of_range("ScEngine::advance: past the end");
  u_.push_back(bit ? 1 : 0);
}

ForcedScan::ForcedScan(std::size_t n_cells) : n_(n_cells) {
  if (!is_power_of_two(n_))
    throw std::invalid_argument("ForcedScan: length is not a power of two");
  log2n_ = static_cast<unsigned>(std::countr_zero(n_));
  level_.resize(log2n_ + 1);
  xors_.resize(log2n_ + 1);
  rev_.resize(log2n_ + 1);
  for (unsigned k = 0; k <= log2n_; ++k) {
    level_[k].resize(n_ >> k);
    xors_[k].resize(n_ >> k);
    rev_[k] = bit_reversal_perm(log2n_ - k);
  }
}

const BitVec& ForcedScan::transformed_slice(const BitVec& u, std::size_t off,
                                            unsigned k) {
  BitVec& a = xors_[k];
  const std::size_t len = n_ >> k;
  std::copy(u.begin() + off, u.begin() + off + len, a.begin());
  for (std::size_t half = len / 2; half >= 1; half /= 2)
    for (std::size_t block = 0; block < len; block += 2 * half)
      for (std::size_t j = 0; j < half; ++j) a[block + j] ^= a[block + j + half];
  const std::vector<std::uint32_t>& rev = rev_[k];
  for (std::size_t i = 0; i < len; ++i) {
    const std::uint32_t r = rev[i];
    if (i < r) std::swap(a[i], a[r]);
  }
  return a;
}

ProbPair brute_force_conditional(const SourceModel& model, const BitVec& y,
                                 const BitVec& prefix) {
  const std::size_t n = y.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("brute_force_conditional: bad state length");
  if (n > 12)
    throw std::invalid_argument("brute_force_conditional: N > 12 exceeds the oracle limit");
  if (prefix.size() >= n)
    throw std::invalid_argument("brute_force_conditional: prefix too long");
  const unsigned log2n = static_cast<unsigned>(std::countr_zero(n));
  const std::size_t index = prefix.size();

  const auto g = gn_matrix(log2n);
  std::vector<std::uint32_t> col(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (g[i][j]) col[j] |= 1u << i;

  std::uint32_t y_mask = 0;
  for (std::size_t i = 0; i < n; ++i)
    if (y[i]) y_mask |= 1u << i;
  const int ones_y = std::popcount(y_mask);

  std::vector<double> pow_t(n + 1, 1.0), pow_u(n + 1, 1.0);
  for (std::size_t k = 1; k <= n; ++k) {
    pow_t[k] = pow_t[k - 1] * model.t();
    pow_u[k] = pow_u[k - 1] * (1.0 - model.t());
  }

  double q0 = 0.0, q1 = 0.0;
  for (std::uint32_t x = 0; x < (1u << n); ++x) {
    if (x & ~y_mask) continue;  // a set bit over a cell in state 0: weight 0
    bool match = true;
    for (std::size_t j = 0; j < index; ++j) {
      if ((std::popcount(x & col[j]) & 1) != prefix[j]) {
        match = false;
        break;
      }
    }
    if (!match) continue;
    const int x_ones = std::popcount(x);
    const double w = pow_t[ones_y - x_ones] * pow_u[x_ones];
    if (std::popcount(x & col[index]) & 1)
      q1 += w;
    else
      q0 += w;
  }
  const double total = q0 + q1;
  if (total == 0.0) return ProbPair{0.0, 0.0};
  return ProbPair{q0 / total, q1 / total};
}

double chain_probability(const SourceModel& model, const BitVec& y,
                         const BitVec& u) {
  if (y.size() != u.size())
    throw std::invalid_argument("chain_probability: length mismatch");
  ForcedScan scan(y.size());
  double product = 1.0;
  bool impossible = false;
  scan.run(model, y, u, [&](std::size_t i, double p0) {
    if (std::isnan(p0)) {
      impossible = true;
      return;
    }
    product *= u[i] ? 1.0 - p0 : p0;
  });
  return impossible ? 0.0 : product;
}

}  // namespace wom
