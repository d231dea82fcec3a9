#pragma once

#include <cstdint>
#include <vector>

#include "wom/bits.hpp"

namespace wom {

// Permutation reversing the log2_n-bit representation of each index.
// An involution.
std::vector<std::uint32_t> bit_reversal_perm(unsigned log2_n);

// u = x * G_N over GF(2), with G_N the n-fold Kronecker power of
// [[1,0],[1,1]] followed by the bit-reversal permutation. G_N is self-inverse
// over GF(2), so the same call inverts the map. O(N log N).
// Throws std::invalid_argument for non-power-of-two lengths.
void polar_transform_inplace(BitVec& bits);
BitVec polar_transform(BitVec bits);

// Dense reference matrix built literally from Kronecker powers and the
// bit-reversal permutation; O(N^2) storage. Test oracle for the fast path,
// limited to log2_n <= 10.
std::vector<BitVec> gn_matrix(unsigned log2_n);

// Row-vector times matrix over GF(2): result[j] = parity of sum_i x[i]*m[i][j].
BitVec matrix_apply(const std::vector<BitVec>& m, const BitVec& x);

}  // namespace wom
