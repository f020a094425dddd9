#pragma once

// n x n matrices over a truncated ring, flat byte layout (row major, one Re
// block per entry).  Inversion is Gaussian elimination with unit pivots; a
// pivot is always available when the reduction mod t is invertible.

#include <cstdint>
#include <vector>

#include "jetchar/trunc_ring.hpp"

namespace jetchar {

using Mat = std::vector<uint8_t>;  // n*n ring entries, flat

struct MatCtx {
  const RingCtx* rc = nullptr;
  int n = 2;

  MatCtx() = default;
  MatCtx(const RingCtx& r, int n_) : rc(&r), n(n_) {}

  int esz() const { return rc->size(); }
  int size() const { return n * n * esz(); }

  Mat zero() const { return Mat(size(), 0); }
  Mat identity() const {
    Mat m(size(), 0);
    for (int i = 0; i < n; ++i) m[(i * n + i) * esz()] = 1;
    return m;
  }

  Re entry(const Mat& m, int i, int j) const {
    int off = (i * n + j) * esz();
    return Re(m.begin() + off, m.begin() + off + esz());
  }
  void set_entry(Mat& m, int i, int j, const Re& v) const {
    std::copy(v.begin(), v.end(), m.begin() + (i * n + j) * esz());
  }

  Mat mul(const Mat& a, const Mat& b) const {
    if (rc->fdeg() == 1 && rc->nlev() <= 8) return mul_prime(a, b);
    Mat out = zero();
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) {
        Re aik = entry(a, i, k);
        if (rc->is_zero(aik)) continue;
        for (int j = 0; j < n; ++j) {
          Re prod = rc->mul(aik, entry(b, k, j));
          set_entry(out, i, j, rc->add(entry(out, i, j), prod));
        }
      }
    return out;
  }

  // allocation-free multiply into a caller buffer (any field)
  void mul_into(const Mat& a, const Mat& b, Mat& out) const {
    if (rc->fdeg() == 1 && rc->nlev() <= 8) {
      int p = rc->fc->p, L = rc->nlev();
      int acc[8];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          for (int l = 0; l < L; ++l) acc[l] = 0;
          for (int k = 0; k < n; ++k) {
            const uint8_t* A = a.data() + (i * n + k) * L;
            const uint8_t* B = b.data() + (k * n + j) * L;
            for (int u = 0; u < L; ++u) {
              if (!A[u]) continue;
              int au = A[u];
              for (int v = 0; v + u < L; ++v) acc[u + v] += au * B[v];
            }
          }
          uint8_t* O = out.data() + (i * n + j) * L;
          for (int l = 0; l < L; ++l) O[l] = static_cast<uint8_t>(acc[l] % p);
        }
      return;
    }
    out = mul(a, b);
  }

  // prime-coefficient-field fast path: one byte per ring coefficient, no
  // intermediate allocations
  Mat mul_prime(const Mat& a, const Mat& b) const {
    int p = rc->fc->p, L = rc->nlev();
    Mat out(size(), 0);
    int acc[8];
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        for (int l = 0; l < L; ++l) acc[l] = 0;
        for (int k = 0; k < n; ++k) {
          const uint8_t* A = a.data() + (i * n + k) * L;
          const uint8_t* B = b.data() + (k * n + j) * L;
          for (int u = 0; u < L; ++u) {
            if (!A[u]) continue;
            int au = A[u];
            for (int v = 0; v + u < L; ++v) acc[u + v] += au * B[v];
          }
        }
        uint8_t* O = out.data() + (i * n + j) * L;
        for (int l = 0; l < L; ++l) O[l] = static_cast<uint8_t>(acc[l] % p);
      }
    return out;
  }

  Mat add(const Mat& a, const Mat& b) const {
    Mat out(size());
    int p = rc->fc->p;
    for (int i = 0; i < size(); ++i) out[i] = static_cast<uint8_t>((a[i] + b[i]) % p);
    return out;
  }
  Mat sub(const Mat& a, const Mat& b) const {
    Mat out(size());
    int p = rc->fc->p;
    for (int i = 0; i < size(); ++i) out[i] = static_cast<uint8_t>((a[i] + p - b[i]) % p);
    return out;
  }

  Re det(const Mat& m) const {
    if (n == 1) return entry(m, 0, 0);
    if (n == 2)
      return rc->sub(rc->mul(entry(m, 0, 0), entry(m, 1, 1)),
                     rc->mul(entry(m, 0, 1), entry(m, 1, 0)));
    if (n == 3) {
      Re acc = rc->zero();
      int idx[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
      for (int s = 0; s < 6; ++s) {
        Re term = rc->mul(rc->mul(entry(m, 0, idx[s][0]), entry(m, 1, idx[s][1])),
                          entry(m, 2, idx[s][2]));
        acc = s < 3 ? rc->add(acc, term) : rc->sub(acc, term);
      }
      return acc;
    }
    fail(Err::BadInput, "det only implemented for n <= 3");
  }

  bool is_invertible(const Mat& m) const { return rc->is_unit(det(m)); }

  // invertibility over the local ring depends only on the residue determinant
  bool residue_invertible(const Mat& m) const {
    const FieldCtx& fc = *rc->fc;
    auto e = [&](int i, int j) { return rc->coef(entry(m, i, j), 0); };
    if (n == 1) return !fc.is_zero(e(0, 0));
    if (n == 2)
      return !fc.is_zero(fc.sub(fc.mul(e(0, 0), e(1, 1)), fc.mul(e(0, 1), e(1, 0))));
    Fe acc = fc.zero();
    int idx[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
    for (int s = 0; s < 6; ++s) {
      Fe term = fc.mul(fc.mul(e(0, idx[s][0]), e(1, idx[s][1])), e(2, idx[s][2]));
      acc = s < 3 ? fc.add(acc, term) : fc.sub(acc, term);
    }
    return !fc.is_zero(acc);
  }

  Mat inv(const Mat& m) const {
    require(is_invertible(m), Err::NotInvertible, "matrix reduction mod t is singular");
    if (n <= 3) return inv_adjugate(m);
    // Gauss-Jordan with unit pivots over the local ring
    std::vector<std::vector<Re>> a(n, std::vector<Re>(2 * n));
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) a[i][j] = entry(m, i, j);
      for (int j = 0; j < n; ++j) a[i][n + j] = (i == j) ? rc->one() : rc->zero();
    }
    for (int col = 0; col < n; ++col) {
      int piv = -1;
      for (int row = col; row < n; ++row)
        if (rc->is_unit(a[row][col])) {
          piv = row;
          break;
        }
      require(piv >= 0, Err::NotInvertible, "no unit pivot");
      std::swap(a[col], a[piv]);
      Re pi = rc->inv(a[col][col]);
      for (int j = 0; j < 2 * n; ++j) a[col][j] = rc->mul(a[col][j], pi);
      for (int row = 0; row < n; ++row) {
        if (row == col || rc->is_zero(a[row][col])) continue;
        Re c = a[row][col];
        for (int j = 0; j < 2 * n; ++j)
          a[row][j] = rc->sub(a[row][j], rc->mul(c, a[col][j]));
      }
    }
    Mat out = zero();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) set_entry(out, i, j, a[i][n + j]);
    return out;
  }

  Mat inv_adjugate(const Mat& m) const {
    Re di = rc->inv(det(m));
    Mat out = zero();
    if (n == 1) {
      set_entry(out, 0, 0, di);
      return out;
    }
    if (n == 2) {
      set_entry(out, 0, 0, rc->mul(di, entry(m, 1, 1)));
      set_entry(out, 0, 1, rc->neg(rc->mul(di, entry(m, 0, 1))));
      set_entry(out, 1, 0, rc->neg(rc->mul(di, entry(m, 1, 0))));
      set_entry(out, 1, 1, rc->mul(di, entry(m, 0, 0)));
      return out;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        // cofactor C_{ji}
        int r0 = -1, r1 = -1, c0 = -1, c1 = -1;
        for (int k = 0; k < n; ++k) {
          if (k != j) (r0 < 0 ? r0 : r1) = k;
          if (k != i) (c0 < 0 ? c0 : c1) = k;
        }
        Re cof = rc->sub(rc->mul(entry(m, r0, c0), entry(m, r1, c1)),
                         rc->mul(entry(m, r0, c1), entry(m, r1, c0)));
        if ((i + j) % 2) cof = rc->neg(cof);
        set_entry(out, i, j, rc->mul(di, cof));
      }
    return out;
  }

  // entrywise q^k-power Frobenius
  Mat frob_q(const Mat& m, long long k) const {
    Mat out(size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Re v = rc->frob_q(entry(m, i, j), k);
        std::copy(v.begin(), v.end(), out.begin() + (i * n + j) * esz());
      }
    return out;
  }

  // out = P m P^-1 for the permutation matrix P e_j = e_{perm[j]},
  // i.e. out[perm[i]][perm[j]] = m[i][j]
  Mat perm_conj(const Mat& m, const std::vector<int>& perm) const {
    Mat out(size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Re v = entry(m, i, j);
        std::copy(v.begin(), v.end(), out.begin() + (perm[i] * n + perm[j]) * esz());
      }
    return out;
  }

  Mat reduce_mod(const Mat& m, int s) const {
    Mat out(size());
    for (int i = 0; i < n * n; ++i) {
      Re v = rc->reduce_mod(Re(m.begin() + i * esz(), m.begin() + (i + 1) * esz()), s);
      std::copy(v.begin(), v.end(), out.begin() + i * esz());
    }
    return out;
  }

  // ord of g in the group (caller guarantees invertibility)
  int order(const Mat& g) const {
    Mat acc = g;
    Mat id = identity();
    int k = 1;
    while (acc != id) {
      acc = mul(acc, g);
      ++k;
      require(k <= 1000000, Err::Internal, "order exceeded bound");
    }
    return k;
  }

  Mat transpose(const Mat& m) const {
    Mat out(size());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Re v = entry(m, i, j);
        std::copy(v.begin(), v.end(), out.begin() + (j * n + i) * esz());
      }
    return out;
  }

  Re trace(const Mat& m) const {
    Re acc = rc->zero();
    for (int i = 0; i < n; ++i) acc = rc->add(acc, entry(m, i, i));
    return acc;
  }
};

}  // namespace jetchar
