#include "wom/polar.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace wom {

std::vector<std::uint32_t> bit_reversal_perm(unsigned log2_n) {
  const std::size_t n = std::size_t{1} << log2_n;
  std::vector<std::uint32_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < log2_n; ++b) r |= ((i >> b) & 1u) << (log2_n - 1 - b);
    perm[i] = r;
  }
  return perm;
}

void polar_transform_inplace(BitVec& bits) {
  const std::size_t n = bits.size();
  if (!is_power_of_two(n))
    throw std::invalid_argument("polar_transform: length is not a power of two");
  // Kronecker-power butterflies: repeatedly fold the right half into the left.
  for (std::size_t half = n / 2; half >= 1; half /= 2)
    for (std::size_t block = 0; block < n; block += 2 * half)
      for (std::size_t j = 0; j < half; ++j)
        bits[block + j] ^= bits[block + j + half];
  // Then the bit-reversal permutation (an involution: swap index pairs).
  const unsigned log2_n = static_cast<unsigned>(std::countr_zero(n));
  for (std::size_t i = 0; i < n; ++i) {
    std::uint32_t r = 0;
    for (unsigned b = 0; b < log2_n; ++b) r |= ((i >> b) & 1u) << (log2_n - 1 - b);
    if (i < r) std::swap(bits[i], bits[r]);
  }
}

BitVec polar_transform(BitVec bits) {
  polar_transform_inplace(bits);
  return bits;
}

std::vector<BitVec> gn_matrix(unsigned log2_n) {
  if (log2_n > 10)
    throw std::invalid_argument("gn_matrix: log2_n > 10 exceeds the oracle limit");
  // Kronecker powers of [[1,0],[1,1]], built literally.
  std::vector<BitVec> k{{1}};
  for (unsigned step = 0; step < log2_n; ++step) {
    const std::size_t m = k.size();
    std::vector<BitVec> next(2 * m, BitVec(2 * m, 0));
    for (std::size_t i = 0; i < 2 * m; ++i)
      for (std::size_t j = 0; j < 2 * m; ++j) {
        const std::uint8_t f = (i / m == 0 && j / m == 1) ? 0 : 1;  // F[i/m][j/m]
        next[i][j] = f & k[i % m][j % m];
      }
    k = std::move(next);
  }
  // Right-multiply by the bit-reversal permutation matrix: column j of the
  // product is column rev(j) of the Kronecker power.
  const auto perm = bit_reversal_perm(log2_n);
  const std::size_t n = k.size();
  std::vector<BitVec> g(n, BitVec(n, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g[i][j] = k[i][perm[j]];
  return g;
}

BitVec matrix_apply(const std::vector<BitVec>& m, const BitVec& x) {
  if (m.size() != x.size())
    throw std::invalid_argument("matrix_apply: dimension mismatch");
  const std::size_t n = m.empty() ? 0 : m[0].size();
  BitVec out(n, 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!x[i]) continue;
    for (std::size_t j = 0; j < n; ++j) out[j] ^= m[i][j];
  }
  return out;
}

}  // namespace wom
