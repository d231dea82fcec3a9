#pragma once

// Internal enumeration helpers shared by the exact-statistics and exact-TV
// paths. Not installed.

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "wom/model.hpp"
#include "wom/polar.hpp"

namespace wom::detail {

// Tables for full enumeration over (y, x) at one block size: the transform of
// every x and the factored probability weights. Cost and storage 2^N.
class ExactEnum {
 public:
  ExactEnum(const SourceModel& model, std::size_t n_cells)
      : n_(n_cells), s_(model.s()), t_(model.t()) {
    if (!is_power_of_two(n_cells) || n_cells > 12)
      throw std::invalid_argument("ExactEnum: unsupported block size");
    const unsigned n = static_cast<unsigned>(n_cells);
    const unsigned log2n = static_cast<unsigned>(std::countr_zero(n_cells));
    const auto g = gn_matrix(log2n);
    std::vector<std::uint32_t> col(n, 0);
    for (unsigned i = 0; i < n; ++i)
      for (unsigned j = 0; j < n; ++j)
        if (g[i][j]) col[j] |= 1u << i;
    // Bit 0 of u goes to the top position so that prefixes are high bits.
    u_of_x_.resize(std::size_t{1} << n);
    for (std::uint32_t x = 0; x < (1u << n); ++x) {
      std::uint32_t u = 0;
      for (unsigned j = 0; j < n; ++j)
        u |= static_cast<std::uint32_t>(std::popcount(x & col[j]) & 1)
             << (n - 1 - j);
      u_of_x_[x] = u;
    }
    pow_s_.assign(n + 1, 1.0);
    pow_cs_.assign(n + 1, 1.0);
    pow_t_.assign(n + 1, 1.0);
    pow_ct_.assign(n + 1, 1.0);
    for (unsigned k = 1; k <= n; ++k) {
      pow_s_[k] = pow_s_[k - 1] * s_;
      pow_cs_[k] = pow_cs_[k - 1] * (1.0 - s_);
      pow_t_[k] = pow_t_[k - 1] * t_;
      pow_ct_[k] = pow_ct_[k - 1] * (1.0 - t_);
    }
  }

  std::size_t size() const { return n_; }

  double prob_y(std::uint32_t y) const {
    const int ones = std::popcount(y);
    return pow_s_[n_ - ones] * pow_cs_[ones];
  }

  std::vector<std::vector<double>> make_levels() const {
    std::vector<std::vector<double>> levels(n_ + 1);
    for (std::size_t i = 0; i <= n_; ++i) levels[i].resize(std::size_t{1} << i);
    return levels;
  }

  // levels[i][p] = P(first i transformed bits spell p | y).
  void levels_for(std::uint32_t y, std::vector<std::vector<double>>& levels) const {
    std::vector<double>& joint = levels[n_];
    std::fill(joint.begin(), joint.end(), 0.0);
    const int ones_y = std::popcount(y);
    // Only x with no bit raised over a zero cell carries weight: submasks of y.
    std::uint32_t x = y;
    while (true) {
      const int x_ones = std::popcount(x);
      joint[u_of_x_[x]] += pow_t_[ones_y - x_ones] * pow_ct_[x_ones];
      if (x == 0) break;
      x = (x - 1) & y;
    }
    for (std::size_t i = n_; i-- > 0;) {
      const std::vector<double>& lo = levels[i + 1];
      std::vector<double>& hi = levels[i];
      for (std::size_t p = 0; p < hi.size(); ++p)
        hi[p] = lo[2 * p] + lo[2 * p + 1];
    }
  }

 private:
  std::size_t n_;
  double s_, t_;
  std::vector<std::uint32_t> u_of_x_;
  std::vector<double> pow_s_, pow_cs_, pow_t_, pow_ct_;
};

}  // namespace wom::detail
