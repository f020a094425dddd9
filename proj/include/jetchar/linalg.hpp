#pragma once

// Dense F_p linear algebra on byte matrices: kernel bases for the semilinear
// fixed-point and Lang systems.

#include <cstdint>
#include <vector>

#include "jetchar/field.hpp"

namespace jetchar {

// kernel basis of an (rows x cols) F_p matrix, row major
inline std::vector<std::vector<uint8_t>> fp_kernel(int p, std::vector<std::vector<uint8_t>> a,
                                                   int cols) {
  int rows = static_cast<int>(a.size());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (a[r][col]) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    uint8_t li = detail::fp_inv(p, a[rank][col]);
    if (li != 1)
      for (int j = col; j < cols; ++j) a[rank][j] = static_cast<uint8_t>((a[rank][j] * li) % p);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || !a[r][col]) continue;
      int c = a[r][col];
      for (int j = col; j < cols; ++j)
        a[r][j] = static_cast<uint8_t>((a[r][j] + (p - a[rank][j]) * c % p) % p);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<bool> is_piv(cols, false);
  for (int c : pivot_col) is_piv[c] = true;
  std::vector<std::vector<uint8_t>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_piv[free]) continue;
    std::vector<uint8_t> v(cols, 0);
    v[free] = 1;
    for (int i = 0; i < rank; ++i)
      if (a[i][free]) v[pivot_col[i]] = static_cast<uint8_t>((p - a[i][free]) % p);
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace jetchar
