#pragma once

// Type A Weyl group (permutations), lifts, roots and standard parabolic data.
// GL_n lifts are plain permutation matrices; the SL_2 simple reflection lift
// carries a -1 so it lands in SL_2.

#include <algorithm>
#include <numeric>
#include <vector>

#include "jetchar/matrix.hpp"

namespace jetchar {

struct WeylElem {
  std::vector<int> perm;  // one-line notation, perm[i] = image of i (0-based)

  static WeylElem identity(int n) {
    WeylElem w;
    w.perm.resize(n);
    std::iota(w.perm.begin(), w.perm.end(), 0);
    return w;
  }
  static WeylElem transposition(int n, int a, int b) {
    WeylElem w = identity(n);
    std::swap(w.perm[a], w.perm[b]);
    return w;
  }
  static WeylElem longest(int n) {
    WeylElem w;
    w.perm.resize(n);
    for (int i = 0; i < n; ++i) w.perm[i] = n - 1 - i;
    return w;
  }

  int n() const { return static_cast<int>(perm.size()); }
  bool is_identity() const {
    for (int i = 0; i < n(); ++i)
      if (perm[i] != i) return false;
    return true;
  }
  WeylElem compose(const WeylElem& o) const {  // (this*o)(i) = this(o(i))
    WeylElem w;
    w.perm.resize(n());
    for (int i = 0; i < n(); ++i) w.perm[i] = perm[o.perm[i]];
    return w;
  }
  WeylElem inverse() const {
    WeylElem w;
    w.perm.resize(n());
    for (int i = 0; i < n(); ++i) w.perm[perm[i]] = i;
    return w;
  }
  int order() const {
    WeylElem acc = *this;
    int k = 1;
    while (!acc.is_identity()) {
      acc = acc.compose(*this);
      ++k;
    }
    return k;
  }
  // number of inversions = Bruhat length
  int length() const {
    int l = 0;
    for (int i = 0; i < n(); ++i)
      for (int j = i + 1; j < n(); ++j)
        if (perm[i] > perm[j]) ++l;
    return l;
  }
  bool operator==(const WeylElem& o) const { return perm == o.perm; }
  bool operator<(const WeylElem& o) const { return perm < o.perm; }

  static std::vector<WeylElem> all(int n) {
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    std::vector<WeylElem> out;
    do {
      out.push_back(WeylElem{v});
    } while (std::next_permutation(v.begin(), v.end()));
    return out;
  }
};

enum class GroupKind { GL, SL2 };

// root alpha_{ij} (i != j), 0-based; positive iff i < j
struct Root {
  int i, j;
  bool positive() const { return i < j; }
  Root negate() const { return Root{j, i}; }
  bool operator==(const Root& o) const { return i == o.i && j == o.j; }
};

inline std::vector<Root> all_roots(int n) {
  std::vector<Root> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) out.push_back(Root{i, j});
  return out;
}

// Parabolic/Levi data from an ordered set partition of the indices.  Block
// ids double as the ordering; compositions give consecutive blocks, but Howe
// towers also need scattered blocks (equal-coefficient classes).
struct StdParabolic {
  std::vector<int> blocks;  // block id per index, ids 0..nblocks-1

  static StdParabolic from_composition(const std::vector<int>& comp) {
    StdParabolic p;
    for (size_t b = 0; b < comp.size(); ++b) {
      require(comp[b] > 0, Err::BadInput, "composition parts must be positive");
      for (int k = 0; k < comp[b]; ++k) p.blocks.push_back((int)b);
    }
    return p;
  }
  static StdParabolic from_blocks(std::vector<int> block_of_) {
    StdParabolic p;
    p.blocks = std::move(block_of_);
    // normalize ids to 0..k-1 preserving order of first appearance
    std::vector<int> remap(p.blocks.size(), -1);
    int next = 0;
    for (auto& b : p.blocks) {
      require(b >= 0 && b < (int)p.blocks.size(), Err::BadInput, "bad block id");
      if (remap[b] < 0) remap[b] = next++;
      b = remap[b];
    }
    return p;
  }
  static StdParabolic borel(int n) {
    StdParabolic p;
    p.blocks.resize(n);
    std::iota(p.blocks.begin(), p.blocks.end(), 0);
    return p;
  }
  static StdParabolic full(int n) {
    StdParabolic p;
    p.blocks.assign(n, 0);
    return p;
  }

  int n() const { return static_cast<int>(blocks.size()); }
  int nblocks() const {
    int m = -1;
    for (int b : blocks) m = std::max(m, b);
    return m + 1;
  }
  int block_of(int i) const { return blocks[i]; }
  int block_size(int b) const {
    int c = 0;
    for (int x : blocks)
      if (x == b) ++c;
    return c;
  }
  bool root_in_levi(const Root& a) const { return block_of(a.i) == block_of(a.j); }
  bool is_borel() const { return nblocks() == n(); }
  bool refines(const StdParabolic& coarser) const {
    for (int i = 0; i < n(); ++i)
      for (int j = 0; j < n(); ++j)
        if (block_of(i) == block_of(j) && coarser.block_of(i) != coarser.block_of(j))
          return false;
    return true;
  }
  bool operator==(const StdParabolic& o) const { return blocks == o.blocks; }
  std::vector<WeylElem> levi_weyl() const {  // block-preserving permutations
    int N = n();
    std::vector<WeylElem> out;
    for (const auto& w : WeylElem::all(N)) {
      bool ok = true;
      for (int i = 0; i < N && ok; ++i) ok = block_of(w.perm[i]) == block_of(i);
      if (ok) out.push_back(w);
    }
    return out;
  }
};

struct RootDatum {
  const MatCtx* mc;
  GroupKind kind;

  RootDatum(const MatCtx& m, GroupKind k) : mc(&m), kind(k) {}

  // u_alpha(c) = 1 + c E_{ij}
  Mat root_elem(const Root& a, const Re& c) const {
    Mat m = mc->identity();
    mc->set_entry(m, a.i, a.j, c);
    return m;
  }

  // coroot: unit u -> diag(..., u at i, ..., u^-1 at j, ...)
  Mat coroot(const Root& a, const Re& u) const {
    Mat m = mc->identity();
    mc->set_entry(m, a.i, a.i, u);
    mc->set_entry(m, a.j, a.j, mc->rc->inv(u));
    return m;
  }

  // permutation-matrix lift; SL_2 simple reflection gets the standard -1
  Mat lift(const WeylElem& w) const {
    Mat m = mc->zero();
    const RingCtx& rc = *mc->rc;
    if (kind == GroupKind::SL2 && !w.is_identity()) {
      mc->set_entry(m, 0, 1, rc.neg(rc.one()));
      mc->set_entry(m, 1, 0, rc.one());
      return m;
    }
    for (int j = 0; j < mc->n; ++j) mc->set_entry(m, w.perm[j], j, rc.one());
    return m;
  }
};

}  // namespace jetchar
