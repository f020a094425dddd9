#pragma once

// Depth and genericity: the Lie-level conditions on coefficient vectors and
// the character-level conditions tested through norm maps on root lines.

#include "jetchar/charfn.hpp"

namespace jetchar {

// psi_0 convention: the additive character x -> exp(2 pi i Tr_{F_q/F_p}(x)/p)
// of the base field.  Changing it permutes characters but no reported
// quantity; fixed here once.
inline long long psi0_angle_base(const FieldCtx& base, const Fe& v) {
  return base.trace_abs(v);  // numerator over p
}

// diagonal coefficient vector at a fixed level, sigma-compatible:
// c[w(i)] = c[i]^q
struct GenericElement {
  std::vector<Fe> c;  // entries in the torus working field
  int level = 1;
  std::vector<int> levi_blocks;  // block id per index, or empty if unassigned
};

// the sigma-fixed level-s subgroup of T^sigma is parametrized per w-cycle by
// a coefficient in the q^(cycle length) subfield
inline std::vector<std::vector<int>> twist_cycles(const WeylElem& w) {
  int n = w.n();
  std::vector<char> seen(n, 0);
  std::vector<std::vector<int>> cycles;
  for (int i = 0; i < n; ++i) {
    if (seen[i]) continue;
    std::vector<int> cyc;
    int j = i;
    while (!seen[j]) {
      seen[j] = 1;
      cyc.push_back(j);
      j = w.perm[j];
    }
    cycles.push_back(cyc);
  }
  return cycles;
}

// torus element 1 + t^s diag(y) from per-cycle heads: y_{w(i)} = y_i^q along
// each cycle
inline Mat level_elem_from_heads(const FixedGroup& T, int s,
                                 const std::vector<std::vector<int>>& cycles,
                                 const std::vector<Fe>& heads) {
  const MatCtx& mc = T.mc();
  const RingCtx& rc = T.rc();
  const FieldCtx& fc = *rc.fc;
  Mat out = mc.identity();
  for (size_t ci = 0; ci < cycles.size(); ++ci) {
    Fe y = heads[ci];
    for (size_t j = 0; j < cycles[ci].size(); ++j) {
      int idx = cycles[ci][j];
      Re e = rc.one();
      rc.set_coef(e, s, y);
      mc.set_entry(out, idx, idx, e);
      y = fc.frob_q(y, 1);
    }
  }
  return out;
}

// Reads the coefficient vector X off the restriction of theta to the level-s
// congruence subgroup: theta(1 + t^s diag(y)) = psi_0(sum_i c_i y_i), the sum
// collapsing to base-field traces along twist cycles.
inline GenericElement extract_generic_element(FieldTower& tower, const TorusChar& th, int s) {
  const FixedGroup& T = *th.st->grp;
  require(depth(th) == s && s >= 1, Err::DepthMismatch,
          "character depth does not match requested level");
  const FieldCtx& fc = *T.rc().fc;
  const FieldCtx& base = tower.ctx(1);
  const WeylElem& w = T.tw.w;
  auto cycles = twist_cycles(w);
  int p = fc.p;

  GenericElement X;
  X.level = s;
  X.c.assign(w.n(), fc.zero());

  for (size_t ci = 0; ci < cycles.size(); ++ci) {
    int cl = static_cast<int>(cycles[ci].size());
    const Embedding& sub = tower.embedding(cl, T.m);
    const FieldCtx& fsub = tower.ctx(cl);
    // candidates for the cycle-head coefficient: the q^cl subfield
    std::optional<Fe> found;
    long long total = fsub.card();
    for (long long cand_i = 0; cand_i < total && !found; ++cand_i) {
      Fe cand = sub.up(fsub.unpack(cand_i));
      bool ok = true;
      for (long long yi = 0; yi < total && ok; ++yi) {
        Fe y = sub.up(fsub.unpack(yi));
        std::vector<Fe> heads(cycles.size(), fc.zero());
        heads[ci] = y;
        Mat e = level_elem_from_heads(T, s, cycles, heads);
        require(T.contains(e), Err::Internal, "level element not sigma-fixed");
        long long got = th.angle(T.index_of(e));  // over exponent
        // expected: psi_0(Tr_{F_{q^cl}/F_p} on the cycle) = trace of cand*y
        Fe prod = fc.mul(cand, y);
        // sum over the cycle of (cand y)^(q^j): push down to base via trace
        Fe acc = fc.zero();
        Fe cur = prod;
        for (int j = 0; j < cl; ++j) {
          acc = fc.add(acc, cur);
          cur = fc.frob_q(cur, 1);
        }
        Fe acc_base;
        require(tower.embedding(1, T.m).down(acc, acc_base), Err::Internal,
                "pairing value not in base field");
        long long want = psi0_angle_base(base, acc_base);  // over p
        long long N = th.st->exponent;
        ok = got * (long long)p == want * N;  // exact angle equality got/N == want/p
        if (!ok) break;
      }
      if (ok) found = cand;
    }
    require(found.has_value(), Err::Internal, "no coefficient matches level restriction");
    Fe y = *found;
    for (size_t j = 0; j < cycles[ci].size(); ++j) {
      X.c[cycles[ci][j]] = y;
      y = fc.frob_q(y, 1);
    }
  }
  return X;
}

struct GenericityReport {
  bool ge1 = false;
  bool ge2 = false;
  bool type_a_coincide = false;  // ge1 and ge2 agree (always reported for L = T)
};

// Lie-level genericity of a coefficient vector relative to a Levi
inline GenericityReport is_generic(const GenericElement& X, const StdParabolic& levi) {
  int n = static_cast<int>(X.c.size());
  GenericityReport rep;
  rep.ge1 = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || levi.block_of(i) == levi.block_of(j)) continue;
      if (X.c[i] == X.c[j]) rep.ge1 = false;
    }
  // ge2: permutation stabilizer of the vector equals the Levi Weyl group
  rep.ge2 = true;
  for (const auto& w : WeylElem::all(n)) {
    bool stab = true;
    for (int i = 0; i < n; ++i)
      if (X.c[w.perm[i]] != X.c[i]) stab = false;
    bool in_levi = true;
    for (int i = 0; i < n; ++i)
      if (levi.block_of(w.perm[i]) != levi.block_of(i)) in_levi = false;
    if (stab != in_levi) rep.ge2 = false;
  }
  rep.type_a_coincide = rep.ge1 == rep.ge2;
  return rep;
}

// Character-level ge1 for a single root: theta composed with the norm along
// the root line is nontrivial.  Evaluated exactly on the level-r subgroup.
inline bool char_ge1_root(FieldTower& tower, const TorusChar& th, const Root& alpha) {
  const FixedGroup& T = *th.st->grp;
  const MatCtx& mc = T.mc();
  const RingCtx& rc = T.rc();
  const FieldCtx& fc = *rc.fc;
  const WeylElem& w = T.tw.w;
  int r = T.gctx->r;
  // orbit length of alpha under the twist
  int na = 1;
  Root cur{w.perm[alpha.i], w.perm[alpha.j]};
  while (!(cur == alpha)) {
    cur = Root{w.perm[cur.i], w.perm[cur.j]};
    ++na;
  }
  const Embedding& sub = tower.embedding(na, T.m);
  const FieldCtx& fsub = tower.ctx(na);
  for (long long si = 1; si < fsub.card(); ++si) {
    Fe s = sub.up(fsub.unpack(si));
    // N(s H_alpha) = sum_j sigma^j(s H_alpha); sigma on diag: permute + q-power
    std::vector<Fe> d(w.n(), fc.zero());
    Fe cs = s;
    Root ca = alpha;
    for (int j = 0; j < na; ++j) {
      d[ca.i] = fc.add(d[ca.i], cs);
      d[ca.j] = fc.sub(d[ca.j], cs);
      cs = fc.frob_q(cs, 1);
      ca = Root{w.perm[ca.i], w.perm[ca.j]};
    }
    Mat e = mc.identity();
    for (int i = 0; i < w.n(); ++i) {
      Re v = rc.one();
      rc.set_coef(v, r, d[i]);
      mc.set_entry(e, i, i, v);
    }
    require(T.contains(e), Err::Internal, "norm element not sigma-fixed");
    if (!th.is_trivial_on(T.index_of(e))) return true;
  }
  return false;
}

inline GenericityReport is_generic_character(FieldTower& tower, const TorusChar& th) {
  const FixedGroup& T = *th.st->grp;
  int r = T.gctx->r;
  require(depth(th) == r && r >= 1, Err::DepthMismatch,
          "character is not of full depth");
  GenericityReport rep;
  rep.ge1 = true;
  for (const Root& a : all_roots(T.gctx->n))
    if (!char_ge1_root(tower, th, a)) rep.ge1 = false;
  GenericElement X = extract_generic_element(tower, th, r);
  StdParabolic torus = StdParabolic::borel(T.gctx->n);
  rep.ge2 = is_generic(X, torus).ge2;
  rep.type_a_coincide = rep.ge1 == rep.ge2;
  return rep;
}

// Structural record for a generic datum: tower of Levi compositions with
// strictly increasing depths; character-level content lives in the Howe layer.
struct GenericDatum {
  FrobTwist tw;
  std::vector<StdParabolic> levis;  // G^0 strictly increasing to G^d = G
  std::vector<int> depths;          // r_0 < ... < r_{d-1} <= r_d = r

  // D1-D3 structure checks; throws InvalidTower on violation
  void validate(int n, int r) const {
    require(!levis.empty() && levis.size() == depths.size(), Err::InvalidTower,
            "tower and depth lengths differ");
    require(levis.back().nblocks() == 1 && levis.back().n() == n, Err::InvalidTower,
            "tower must end at the full group");
    for (size_t i = 0; i + 1 < levis.size(); ++i) {
      // strictly increasing: blocks of level i refine blocks of level i+1,
      // and differ
      bool refines = true;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (levis[i].block_of(a) == levis[i].block_of(b) &&
              levis[i + 1].block_of(a) != levis[i + 1].block_of(b))
            refines = false;
      require(refines, Err::InvalidTower, "tower steps must refine");
      bool strict = false;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          if (levis[i].block_of(a) != levis[i].block_of(b) &&
              levis[i + 1].block_of(a) == levis[i + 1].block_of(b))
            strict = true;
      require(strict, Err::InvalidTower, "tower steps must strictly increase");
    }
    for (size_t i = 0; i + 1 < depths.size(); ++i) {
      if (i + 2 == depths.size())
        require(depths[i] <= depths[i + 1], Err::InvalidTower, "depths must not decrease");
      else
        require(depths[i] < depths[i + 1], Err::InvalidTower, "depths must increase");
      require(depths[i] >= 1, Err::InvalidTower, "positive depths required below the top");
    }
    require(depths.back() == r, Err::InvalidTower, "top depth must equal r");
  }
};

}  // namespace jetchar
