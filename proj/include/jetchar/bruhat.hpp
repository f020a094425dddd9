#pragma once

// Bruhat decomposition: residue-field cell of an element, exact double-coset
// factorization over the ring (used to read torus parts off B_r w B_r), and
// the exhaustive double-coset multiplication check.

#include <vector>

#include "jetchar/group.hpp"

namespace jetchar {

namespace detail {

// rank of the residue (mod t) submatrix with rows >= i0 and cols <= j1
inline int residue_rank(const MatCtx& mc, const Mat& g, int i0, int j1) {
  const FieldCtx& fc = *mc.rc->fc;
  int rows = mc.n - i0, cols = j1 + 1;
  if (rows <= 0 || cols <= 0) return 0;
  std::vector<std::vector<Fe>> a(rows, std::vector<Fe>(cols));
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) a[i][j] = mc.rc->coef(mc.entry(g, i0 + i, j), 0);
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int piv = -1;
    for (int r = rank; r < rows; ++r)
      if (!fc.is_zero(a[r][col])) {
        piv = r;
        break;
      }
    if (piv < 0) continue;
    std::swap(a[rank], a[piv]);
    Fe li = fc.inv(a[rank][col]);
    for (int j = col; j < cols; ++j) a[rank][j] = fc.mul(a[rank][j], li);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || fc.is_zero(a[r][col])) continue;
      Fe c = a[r][col];
      for (int j = col; j < cols; ++j)
        a[r][j] = fc.sub(a[r][j], fc.mul(c, a[rank][j]));
    }
    ++rank;
  }
  return rank;
}

}  // namespace detail

// unique w with reduction in B_0 w B_0, via rank jumps of lower-left corners
inline WeylElem bruhat_cell(const MatCtx& mc, const Mat& g) {
  int n = mc.n;
  WeylElem w = WeylElem::identity(n);
  auto rk = [&](int i0, int j1) { return detail::residue_rank(mc, g, i0, j1); };
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      int a = rk(i, j);
      int b = (i + 1 < n) ? rk(i + 1, j) : 0;
      int c = (j > 0) ? rk(i, j - 1) : 0;
      int d = (i + 1 < n && j > 0) ? rk(i + 1, j - 1) : 0;
      if (a - b - c + d == 1) {
        w.perm[j] = i;
        break;
      }
    }
  }
  return w;
}

struct BruhatFactor {
  bool in_cell = false;
  std::vector<Re> tvec;  // diagonal entries of the torus part
};

// Exact factorization test A in U (t w_lift) U over the ring.  Columns are
// cleared at pivot rows in decreasing-pivot order; membership needs unit
// pivots at (w(j), j) and zeros below them.
inline BruhatFactor ring_bruhat_factor(const MatCtx& mc, const Mat& A_in, const WeylElem& w,
                                       const Mat& w_lift) {
  const RingCtx& rc = *mc.rc;
  int n = mc.n;
  std::vector<std::vector<Re>> a(n, std::vector<Re>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = mc.entry(A_in, i, j);

  BruhatFactor out;
  std::vector<Re> pivots(n);
  for (int j = 0; j < n; ++j) {
    // clear pivot rows w(l), l < j, in decreasing w(l) order
    std::vector<int> earlier;
    for (int l = 0; l < j; ++l) earlier.push_back(l);
    std::sort(earlier.begin(), earlier.end(),
              [&](int x, int y) { return w.perm[x] > w.perm[y]; });
    for (int l : earlier) {
      int pr = w.perm[l];
      if (rc.is_zero(a[pr][j])) continue;
      Re c = rc.mul(a[pr][j], rc.inv(pivots[l]));
      for (int i = 0; i < n; ++i) a[i][j] = rc.sub(a[i][j], rc.mul(c, a[i][l]));
    }
    int pi = w.perm[j];
    if (!rc.is_unit(a[pi][j])) return out;
    for (int i = pi + 1; i < n; ++i)
      if (!rc.is_zero(a[i][j])) return out;
    pivots[j] = a[pi][j];
  }
  // torus part: pivot_j = t_{w(j)} * w_lift[w(j), j]
  out.in_cell = true;
  out.tvec.assign(n, rc.zero());
  for (int j = 0; j < n; ++j) {
    Re lv = mc.entry(w_lift, w.perm[j], j);
    out.tvec[w.perm[j]] = rc.mul(pivots[j], rc.inv(lv));
  }
  return out;
}

struct BruhatMultReport {
  bool pass = false;
  bool length_additive = false;
  bool disjoint = true;  // the two pieces of the length-drop case are disjoint
  size_t product_size = 0;
  size_t expected_size = 0;
  std::string detail;
};

// Exhaustive check of the double-coset product
//   B s B . B w B = B sw B                         if l(sw) = l(w)+1
//   B s B . B w B = B U_{-alpha,0+:r+} sw B  u  B w B   if l(sw) = l(w)-1
inline BruhatMultReport verify_bruhat_multiplication(const GroupTable& G, const RootDatum& rd,
                                                     const WeylElem& s, const WeylElem& w,
                                                     const Root& alpha) {
  const MatCtx& mc = G.mc();
  const RingCtx& rc = G.rc();
  std::vector<int> B = G.subgroup_indices(Sub::B);

  auto double_coset = [&](const Mat& mid) {
    std::vector<char> in(G.size(), 0);
    for (int b1 : B) {
      Mat left = mc.mul(G[b1], mid);
      for (int b2 : B) in[G.index_of(mc.mul(left, G[b2]))] = 1;
    }
    return in;
  };

  BruhatMultReport rep;
  Mat s_lift = rd.lift(s);
  Mat w_lift = rd.lift(w);
  Mat sw_lift = rd.lift(s.compose(w));

  // product set B s B . B w B
  std::vector<char> left = double_coset(s_lift);
  std::vector<char> right = double_coset(w_lift);
  std::vector<int> rset;
  for (size_t i = 0; i < right.size(); ++i)
    if (right[i]) rset.push_back(static_cast<int>(i));
  std::vector<char> prod(G.size(), 0);
  for (size_t i = 0; i < left.size(); ++i) {
    if (!left[i]) continue;
    for (int jr : rset) prod[G.index_of(mc.mul(G[(int)i], G[jr]))] = 1;
  }

  WeylElem sw = s.compose(w);
  rep.length_additive = sw.length() == w.length() + 1;

  std::vector<char> expected(G.size(), 0);
  if (rep.length_additive) {
    expected = double_coset(sw_lift);
  } else {
    // B U_{-alpha,0+:r+} sw B: c ranges over t*R
    const FieldCtx& fc = *rc.fc;
    RingCtx sub(fc, rc.r);  // same ring; monomial levels 1..r
    std::vector<Re> cs;
    Re c = rc.zero();
    // enumerate coefficients of t^1..t^r
    std::vector<int> digits((rc.r) * fc.deg(), 0);
    while (true) {
      Re v = rc.zero();
      for (int lev = 1; lev <= rc.r; ++lev) {
        Fe co(fc.deg());
        for (int d = 0; d < fc.deg(); ++d) co[d] = (uint8_t)digits[(lev - 1) * fc.deg() + d];
        sub.set_coef(v, lev, co);
      }
      cs.push_back(v);
      int i = 0;
      for (; i < (int)digits.size(); ++i) {
        if (digits[i] + 1 < fc.p) {
          ++digits[i];
          break;
        }
        digits[i] = 0;
      }
      if (i == (int)digits.size()) break;
    }
    Root neg = alpha.positive() ? alpha.negate() : alpha;
    std::vector<char> piece(G.size(), 0);
    for (const Re& cv : cs) {
      Mat mid = mc.mul(rd.root_elem(neg, cv), sw_lift);
      std::vector<char> dc = double_coset(mid);
      for (size_t i = 0; i < dc.size(); ++i)
        if (dc[i]) piece[i] = 1;
    }
    for (size_t i = 0; i < right.size(); ++i) {
      if (piece[i] && right[i]) rep.disjoint = false;
      expected[i] = piece[i] | right[i];
    }
  }

  size_t np = 0, ne = 0;
  bool same = true;
  for (size_t i = 0; i < prod.size(); ++i) {
    np += prod[i];
    ne += expected[i];
    if (prod[i] != expected[i]) same = false;
  }
  rep.product_size = np;
  rep.expected_size = ne;
  rep.pass = same && rep.disjoint;
  if (!same) rep.detail = "set mismatch";
  if (!rep.disjoint) rep.detail += " pieces not disjoint";
  return rep;
}

}  // namespace jetchar
