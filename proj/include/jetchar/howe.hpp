#pragma once

// Howe factorization of torus characters along root-level sets, and the
// character-level iterated induction through the resulting Levi tower.

#include "jetchar/induction.hpp"

namespace jetchar {

// ---------------------------------------------------------------------------
// root-level sets

// theta composed with the norm-compatible coroot of alpha, tested for
// nontriviality on the level-s piece
inline bool root_nontrivial_at_level(FieldTower& tower, const TorusChar& th, const Root& alpha,
                                     int s) {
  const FixedGroup& T = *th.st->grp;
  const MatCtx& mc = T.mc();
  const RingCtx& rc = T.rc();
  const FieldCtx& fc = *rc.fc;
  const WeylElem& w = T.tw.w;
  int na = 1;
  Root cur{w.perm[alpha.i], w.perm[alpha.j]};
  while (!(cur == alpha)) {
    cur = Root{w.perm[cur.i], w.perm[cur.j]};
    ++na;
  }
  const Embedding& sub = tower.embedding(na, T.m);
  const FieldCtx& fsub = tower.ctx(na);
  for (long long si = 1; si < fsub.card(); ++si) {
    Fe c = sub.up(fsub.unpack(si));
    std::vector<Fe> d(w.n(), fc.zero());
    Fe cs = c;
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
      rc.set_coef(v, s, d[i]);
      mc.set_entry(e, i, i, v);
    }
    require(T.contains(e), Err::Internal, "norm element not sigma-fixed");
    if (!th.is_trivial_on(T.index_of(e))) return true;
  }
  return false;
}

struct RootLevelSet {
  std::vector<Root> roots;
  std::vector<std::vector<char>> in_phi;   // [s-1][root], s = 1..r
  std::vector<StdParabolic> partitions;    // Levi partition per level s = 1..r
  std::vector<int> jumps;                  // levels where the partition coarsens
};

inline RootLevelSet root_levels(FieldTower& tower, const TorusChar& th) {
  const FixedGroup& T = *th.st->grp;
  int n = T.gctx->n;
  int r = T.gctx->r;
  RootLevelSet out;
  out.roots = all_roots(n);
  out.in_phi.assign(r, std::vector<char>(out.roots.size(), 0));
  // alpha in Phi_s iff the coroot pullback is trivial on every level >= s
  std::vector<std::vector<char>> nontriv(r, std::vector<char>(out.roots.size(), 0));
  for (int s = 1; s <= r; ++s)
    for (size_t a = 0; a < out.roots.size(); ++a)
      nontriv[s - 1][a] = root_nontrivial_at_level(tower, th, out.roots[a], s) ? 1 : 0;
  for (int s = 1; s <= r; ++s)
    for (size_t a = 0; a < out.roots.size(); ++a) {
      char ok = 1;
      for (int s2 = s; s2 <= r; ++s2)
        if (nontriv[s2 - 1][a]) ok = 0;
      out.in_phi[s - 1][a] = ok;
    }
  // Levi partitions; for GL_n each Phi_s must be the root set of a partition
  for (int s = 1; s <= r; ++s) {
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
      while (parent[x] != x) x = parent[x] = parent[parent[x]];
      return x;
    };
    for (size_t a = 0; a < out.roots.size(); ++a)
      if (out.in_phi[s - 1][a]) parent[find(out.roots[a].i)] = find(out.roots[a].j);
    std::vector<int> blocks(n);
    for (int i = 0; i < n; ++i) blocks[i] = find(i);
    StdParabolic part = StdParabolic::from_blocks(blocks);
    for (size_t a = 0; a < out.roots.size(); ++a)
      require((part.block_of(out.roots[a].i) == part.block_of(out.roots[a].j)) ==
                  (bool)out.in_phi[s - 1][a],
              Err::NotLeviSubsystem, "root level set is not a Levi subsystem");
    out.partitions.push_back(part);
  }
  StdParabolic full = StdParabolic::full(n);
  for (int s = 1; s <= r; ++s) {
    const StdParabolic& next = (s == r) ? full : out.partitions[s];
    if (!(out.partitions[s - 1] == next)) out.jumps.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// tower characters

// character of a Levi block group at a given ring level
struct LeviChar {
  StdParabolic levi;
  int level = 0;
  bool torus_mode = false;

  // torus mode (Levi = T, possibly twisted): character of T^sigma at `level`
  std::shared_ptr<FixedGroup> tgrp;
  std::shared_ptr<AbelianStructure> tst;
  TorusChar tchar;

  // block mode (split): per block, a character of the unit group at `level`
  std::vector<TorusChar> unit_chars;  // structures owned by HoweCtx bundles
};

struct UnitBundle {
  GroupContext gctx;
  std::unique_ptr<FixedGroup> grp;
  std::unique_ptr<AbelianStructure> st;
};

// per-level caches shared by factorization and tower induction
struct HoweCtx {
  Session* S;
  std::map<int, std::unique_ptr<UnitBundle>> unit_bundles;  // GL_1 at ring level s
  std::map<std::pair<std::vector<int>, int>, std::shared_ptr<FixedGroup>> levi_groups;
  std::map<const FixedGroup*, std::unique_ptr<ConjClasses>> classes;
  std::map<int, std::unique_ptr<GroupContext>> level_gctx;

  explicit HoweCtx(Session& s) : S(&s) {}

  GroupContext& gctx_at(int level) {
    auto it = level_gctx.find(level);
    if (it == level_gctx.end()) {
      auto g = std::make_unique<GroupContext>(S->g);
      g->r = level;
      it = level_gctx.emplace(level, std::move(g)).first;
    }
    return *it->second;
  }

  UnitBundle& units(int level) {
    auto it = unit_bundles.find(level);
    if (it == unit_bundles.end()) {
      auto b = std::make_unique<UnitBundle>();
      b->gctx.kind = GroupKind::GL;
      b->gctx.n = 1;
      b->gctx.r = level;
      b->gctx.fc = S->g.fc;
      b->grp = std::make_unique<FixedGroup>(
          torus_fixed_group(b->gctx, *S->tower, 1, FrobTwist::split(1)));
      b->st = std::make_unique<AbelianStructure>(abelian_structure(*b->grp));
      it = unit_bundles.emplace(level, std::move(b)).first;
    }
    return *it->second;
  }

  // enumerated block-diagonal invertible matrices over R_level (split form)
  const FixedGroup& levi_group(const StdParabolic& part, int level) {
    auto key = std::make_pair(part.blocks, level);
    auto it = levi_groups.find(key);
    if (it != levi_groups.end()) return *it->second;
    require(S->g.kind == GroupKind::GL, Err::UnsupportedKind,
            "block Levi groups are built for GL_n");
    auto fg = std::make_shared<FixedGroup>();
    fg->gctx = &gctx_at(level);
    fg->m = 1;
    fg->tw = FrobTwist::split(S->g.n);
    fg->rc_store = std::make_shared<RingCtx>(S->tower->ctx(1), level);
    fg->mc_store = std::make_shared<MatCtx>(*fg->rc_store, S->g.n);
    const MatCtx& mc = *fg->mc_store;
    // odometer over allowed entries, filter invertibility
    std::vector<std::pair<int, int>> pos;
    for (int i = 0; i < S->g.n; ++i)
      for (int j = 0; j < S->g.n; ++j)
        if (part.block_of(i) == part.block_of(j)) pos.push_back({i, j});
    int esz = fg->rc_store->size();
    std::vector<uint8_t> digits(pos.size() * esz, 0);
    int p = S->g.fc->p;
    while (true) {
      Mat m = mc.zero();
      for (size_t k = 0; k < pos.size(); ++k)
        for (int b = 0; b < esz; ++b)
          m[(pos[k].first * S->g.n + pos[k].second) * esz + b] = digits[k * esz + b];
      if (mc.residue_invertible(m)) fg->elems.push_back(m);
      size_t i = 0;
      for (; i < digits.size(); ++i) {
        if (digits[i] + 1 < p) {
          ++digits[i];
          break;
        }
        digits[i] = 0;
      }
      if (i == digits.size()) break;
    }
    std::sort(fg->elems.begin(), fg->elems.end());
    for (size_t i = 0; i < fg->elems.size(); ++i)
      fg->index[std::string(fg->elems[i].begin(), fg->elems[i].end())] = (int)i;
    it = levi_groups.emplace(key, fg).first;
    return *it->second;
  }

  const ConjClasses& conj(const FixedGroup& G) {
    auto it = classes.find(&G);
    if (it == classes.end())
      it = classes.emplace(&G, std::make_unique<ConjClasses>(conjugacy_classes(G))).first;
    return *it->second;
  }
};

// exact angle of a LeviChar at a Levi-group element, over denominator `den`
inline long long levi_char_angle(HoweCtx& HC, const LeviChar& lc, const Mat& m,
                                 long long den) {
  if (lc.torus_mode) {
    long long a = lc.tchar.angle(lc.tgrp->index_of(m));
    require(den % lc.tst->exponent == 0, Err::Internal, "angle denominator mismatch");
    return a * (den / lc.tst->exponent) % den;
  }
  UnitBundle& ub = HC.units(lc.level);
  const MatCtx& mc = *HC.levi_group(lc.levi, lc.level).mc_store;
  long long acc = 0;
  for (int b = 0; b < lc.levi.nblocks(); ++b) {
    // determinant of the block
    std::vector<int> idx;
    for (int i = 0; i < lc.levi.n(); ++i)
      if (lc.levi.block_of(i) == b) idx.push_back(i);
    const RingCtx& rc = *mc.rc;
    Re det;
    if (idx.size() == 1) {
      det = mc.entry(m, idx[0], idx[0]);
    } else if (idx.size() == 2) {
      det = rc.sub(rc.mul(mc.entry(m, idx[0], idx[0]), mc.entry(m, idx[1], idx[1])),
                   rc.mul(mc.entry(m, idx[0], idx[1]), mc.entry(m, idx[1], idx[0])));
    } else {
      Re acc3 = rc.zero();
      int order[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
      for (int s = 0; s < 6; ++s) {
        Re term = rc.mul(rc.mul(mc.entry(m, idx[0], idx[order[s][0]]),
                                mc.entry(m, idx[1], idx[order[s][1]])),
                         mc.entry(m, idx[2], idx[order[s][2]]));
        acc3 = s < 3 ? rc.add(acc3, term) : rc.sub(acc3, term);
      }
      det = acc3;
    }
    Mat dm = ub.grp->mc().zero();
    ub.grp->mc().set_entry(dm, 0, 0, det);
    long long a = lc.unit_chars[b].angle(ub.grp->index_of(dm));
    require(den % ub.st->exponent == 0, Err::Internal, "angle denominator mismatch");
    acc = (acc + a * (den / ub.st->exponent)) % den;
  }
  return acc;
}

inline long long levi_char_den(HoweCtx& HC, const LeviChar& lc) {
  if (lc.torus_mode) return lc.tst->exponent;
  return HC.units(lc.level).st->exponent;
}

inline cplx levi_char_value(HoweCtx& HC, const LeviChar& lc, const Mat& m) {
  long long den = levi_char_den(HC, lc);
  return unit_root(levi_char_angle(HC, lc, m, den), den);
}

// restriction of a LeviChar to T_r^sigma: exact angle at a torus element.
// Block determinants of sigma-fixed diagonals are rational even when the
// entries are not, so they are computed upstairs and mapped down.
inline long long levi_char_angle_on_torus(HoweCtx& HC, const LeviChar& lc, int ts_index,
                                          long long den) {
  Session& S = *HC.S;
  const Mat& t = (*S.Ts)[ts_index];
  const MatCtx& mcs = S.Ts->mc();
  if (lc.torus_mode) {
    const MatCtx& mct = *lc.tgrp->mc_store;
    Mat red = mct.zero();
    for (int i = 0; i < S.g.n; ++i)
      for (int j = 0; j < S.g.n; ++j) {
        Re e = mcs.entry(t, i, j);
        Re out = mct.rc->zero();
        for (int lev = 0; lev <= lc.level; ++lev) mct.rc->set_coef(out, lev, mcs.rc->coef(e, lev));
        mct.set_entry(red, i, j, out);
      }
    long long a = lc.tchar.angle(lc.tgrp->index_of(red));
    require(den % lc.tst->exponent == 0, Err::Internal, "angle denominator mismatch");
    return a * (den / lc.tst->exponent) % den;
  }
  UnitBundle& ub = HC.units(lc.level);
  const RingCtx& rcl = ub.grp->rc();
  long long acc = 0;
  for (int b = 0; b < lc.levi.nblocks(); ++b) {
    Re det_big = S.Ts->rc().one();
    for (int i = 0; i < S.g.n; ++i)
      if (lc.levi.block_of(i) == b) det_big = S.Ts->rc().mul(det_big, mcs.entry(t, i, i));
    Re det = rcl.zero();
    for (int lev = 0; lev <= lc.level; ++lev) {
      Fe c = S.Ts->rc().coef(det_big, lev);
      if (S.Ts->m == 1) {
        rcl.set_coef(det, lev, c);
      } else {
        Fe down;
        require(S.tower->embedding(1, S.Ts->m).down(c, down), Err::UnsupportedKind,
                "block determinant not rational; blocks must be sigma-stable");
        rcl.set_coef(det, lev, down);
      }
    }
    Mat dm = ub.grp->mc().zero();
    ub.grp->mc().set_entry(dm, 0, 0, det);
    long long a = lc.unit_chars[b].angle(ub.grp->index_of(dm));
    require(den % ub.st->exponent == 0, Err::Internal, "angle denominator mismatch");
    acc = (acc + a * (den / ub.st->exponent)) % den;
  }
  return acc;
}

struct HoweTower {
  std::vector<StdParabolic> levis;  // G^0 .. G^d = G
  std::vector<int> depths;          // r_0 < ... < r_{d-1} <= r_d = r
  TorusChar theta_m1;               // depth-0 remainder on T_r^sigma
  std::vector<LeviChar> thetas;     // theta_0 .. theta_d
  int d() const { return (int)levis.size() - 1; }
};

namespace detail_howe {

// the subgroup of T^sigma congruent to 1 mod t^(low+1), as index list
inline std::vector<int> torus_window(const FixedGroup& Ts, int low) {
  return congruence_indices(Ts, low + 1);
}

// canonical (lex-minimal exponent vector) character of `grp` matching the
// prescribed exact angles on a subgroup; angles over st.exponent
inline TorusChar extend_character(const AbelianStructure& st,
                                  const std::vector<std::pair<int, long long>>& prescribed) {
  auto chars = characters(st);
  for (const auto& ch : chars) {
    bool ok = true;
    for (const auto& [idx, ang] : prescribed)
      if (ch.angle(idx) != ang) {
        ok = false;
        break;
      }
    if (ok) return ch;  // characters() enumerates exponent vectors in lex order
  }
  fail(Err::Internal, "no character extends the prescribed values");
}

}  // namespace detail_howe

// builds theta_i on the Levi at `level`, matching eta on the part of T^sigma
// congruent to 1 mod t^(low+1)
inline LeviChar build_levi_char(HoweCtx& HC, const StdParabolic& levi, int level,
                                const TorusChar& eta, int low) {
  Session& S = *HC.S;
  LeviChar out;
  out.levi = levi;
  out.level = level;
  const FixedGroup& Ts = *S.Ts;

  bool needs_torus_mode = !S.tw.is_split() && levi.is_borel();
  if (!S.tw.is_split() && !levi.is_borel() && levi.nblocks() > 1) {
    // block determinants are only sigma-equivariant for sigma-stable blocks;
    // the full group and the torus cover the twisted cases in scope
    for (int i = 0; i < S.g.n; ++i)
      require(levi.block_of(S.tw.w.perm[i]) == levi.block_of(i), Err::UnsupportedKind,
              "twisted factorization needs sigma-stable Levi blocks");
  }

  if (needs_torus_mode) {
    GroupContext& gl = HC.gctx_at(level);
    out.torus_mode = true;
    out.tgrp = std::make_shared<FixedGroup>(torus_fixed_group(gl, *S.tower, Ts.m, S.tw));
    out.tst = std::make_shared<AbelianStructure>(abelian_structure(*out.tgrp));
    std::vector<std::pair<int, long long>> prescribed;
    std::unordered_map<int, long long> seen;
    for (int ti : detail_howe::torus_window(Ts, low)) {
      Mat red = out.tgrp->mc().zero();
      for (int i = 0; i < S.g.n; ++i)
        for (int j = 0; j < S.g.n; ++j) {
          Re e = Ts.mc().entry((*S.Ts)[ti], i, j);
          Re v = out.tgrp->rc().zero();
          for (int lev = 0; lev <= level; ++lev)
            out.tgrp->rc().set_coef(v, lev, Ts.rc().coef(e, lev));
          out.tgrp->mc().set_entry(red, i, j, v);
        }
      int idx = out.tgrp->index_of(red);
      long long a = eta.angle(ti);
      long long den = eta.st->exponent;
      long long tden = out.tst->exponent;
      require((a * tden) % den == 0, Err::Internal, "angle not representable at level");
      long long a2 = (a * tden) / den;
      auto it = seen.find(idx);
      if (it != seen.end())
        require(it->second == a2, Err::Internal, "level restriction not well defined");
      else {
        seen[idx] = a2;
        prescribed.push_back({idx, a2});
      }
    }
    out.tchar = detail_howe::extend_character(*out.tst, prescribed);
    return out;
  }

  // split block-determinant mode: determinants of sigma-fixed torus elements
  // are rational, so they map down to the F_q unit bundle
  UnitBundle& ub = HC.units(level);
  const RingCtx& rcl = ub.grp->rc();
  for (int b = 0; b < levi.nblocks(); ++b) {
    std::vector<std::pair<int, long long>> prescribed;
    std::unordered_map<int, long long> seen;
    for (int ti : detail_howe::torus_window(Ts, low)) {
      // keep only window elements supported on block b
      const Mat& t = (*S.Ts)[ti];
      bool supported = true;
      Re det_big = Ts.rc().one();
      for (int i = 0; i < S.g.n && supported; ++i) {
        Re e = Ts.mc().entry(t, i, i);
        if (levi.block_of(i) == b) {
          det_big = Ts.rc().mul(det_big, e);
        } else {
          if (!(e == Ts.rc().one())) supported = false;
        }
      }
      if (!supported) continue;
      Re det = rcl.zero();
      for (int lev = 0; lev <= level; ++lev) {
        Fe c = Ts.rc().coef(det_big, lev);
        if (Ts.m == 1) {
          rcl.set_coef(det, lev, c);
        } else {
          Fe down;
          require(S.tower->embedding(1, Ts.m).down(c, down), Err::UnsupportedKind,
                  "block determinant not rational");
          rcl.set_coef(det, lev, down);
        }
      }
      Mat dm = ub.grp->mc().zero();
      ub.grp->mc().set_entry(dm, 0, 0, det);
      int idx = ub.grp->index_of(dm);
      long long a = eta.angle(ti);
      long long den = eta.st->exponent;
      long long uden = ub.st->exponent;
      require((a * uden) % den == 0, Err::Internal, "angle not representable at level");
      long long a2 = (a * uden) / den;
      auto it = seen.find(idx);
      if (it != seen.end())
        require(it->second == a2, Err::Internal,
                "window restriction does not factor through the block determinant");
      else {
        seen[idx] = a2;
        prescribed.push_back({idx, a2});
      }
    }
    out.unit_chars.push_back(detail_howe::extend_character(*ub.st, prescribed));
  }
  return out;
}

// factorization along the jump levels of the root-level sets
inline HoweTower factorize(HoweCtx& HC, const TorusChar& th) {
  Session& S = *HC.S;
  require(S.g.kind == GroupKind::GL, Err::UnsupportedKind,
          "factorization uses block determinants; route SL_2 through GL_2");
  int r = S.g.r;
  RootLevelSet rl = root_levels(*S.tower, th);

  HoweTower tw;
  int d = (int)rl.jumps.size();
  for (int i = 0; i < d; ++i) {
    tw.levis.push_back(rl.partitions[rl.jumps[i] - 1]);
    tw.depths.push_back(rl.jumps[i]);
  }
  tw.levis.push_back(StdParabolic::full(S.g.n));
  tw.depths.push_back(r);

  // strip from the top
  TorusChar eta = th;
  tw.thetas.assign(tw.levis.size(), LeviChar{});
  for (int i = d; i >= 0; --i) {
    int low = (i == 0) ? 0 : tw.depths[i - 1];
    if (i == d && d > 0 && tw.depths[d - 1] == r) {
      // top step has an empty window: the constant character
      LeviChar lc = build_levi_char(HC, tw.levis[d], r, eta, r);
      tw.thetas[d] = lc;
      continue;
    }
    LeviChar lc = build_levi_char(HC, tw.levis[i], tw.depths[i], eta, low);
    tw.thetas[i] = lc;
    // strip: eta <- eta * (theta_i|_T)^{-1}
    long long den = levi_char_den(HC, lc);
    std::vector<long long> angles(th.st->ngens());
    for (size_t gi = 0; gi < th.st->ngens(); ++gi) {
      long long a = levi_char_angle_on_torus(HC, lc, th.st->gens[gi], den);
      long long N = th.st->exponent;
      require((a * N) % den == 0, Err::Internal, "restriction angle mismatch");
      angles[gi] = (a * N) / den;
    }
    TorusChar restr = char_from_gen_angles(*th.st, angles);
    eta = eta.mul(restr.inverse());
    require(depth(eta) <= low, Err::Internal, "stripping did not reduce depth");
  }
  tw.theta_m1 = eta;
  require(depth(tw.theta_m1) == 0, Err::Internal, "residual character has positive depth");
  return tw;
}

// relative genericity of a coefficient vector: roots of M outside L
inline GenericityReport is_generic_relative(const GenericElement& X, const StdParabolic& L,
                                            const StdParabolic& M) {
  int n = (int)X.c.size();
  GenericityReport rep;
  rep.ge1 = true;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (M.block_of(i) != M.block_of(j)) continue;
      if (L.block_of(i) == L.block_of(j)) continue;
      if (X.c[i] == X.c[j]) rep.ge1 = false;
    }
  rep.ge2 = true;
  for (const auto& w : WeylElem::all(n)) {
    bool in_m = true, in_l = true, stab = true;
    for (int i = 0; i < n; ++i) {
      if (M.block_of(w.perm[i]) != M.block_of(i)) in_m = false;
      if (L.block_of(w.perm[i]) != L.block_of(i)) in_l = false;
      if (X.c[w.perm[i]] != X.c[i]) stab = false;
    }
    if (in_m && stab != in_l) rep.ge2 = false;
  }
  rep.type_a_coincide = rep.ge1 == rep.ge2;
  return rep;
}

// the T-restriction of a LeviChar as an exponent-vector character of T_r^sigma
inline TorusChar levi_char_torus_restriction(HoweCtx& HC, const LeviChar& lc) {
  Session& S = *HC.S;
  long long den = levi_char_den(HC, lc);
  std::vector<long long> angles(S.Tst->ngens());
  for (size_t gi = 0; gi < S.Tst->ngens(); ++gi) {
    long long a = levi_char_angle_on_torus(HC, lc, S.Tst->gens[gi], den);
    long long N = S.Tst->exponent;
    require((a * N) % den == 0, Err::Internal, "restriction angle mismatch");
    angles[gi] = (a * N) / den;
  }
  return char_from_gen_angles(*S.Tst, angles);
}

struct FactorizationCheck {
  bool product_ok = false;
  bool genericity_ok = false;
  bool structure_ok = false;
  bool pass() const { return product_ok && genericity_ok && structure_ok; }
};

inline FactorizationCheck verify_factorization(HoweCtx& HC, const HoweTower& tw,
                                               const TorusChar& th) {
  Session& S = *HC.S;
  FactorizationCheck out;
  // product identity on all of T^sigma
  TorusChar prod = tw.theta_m1;
  for (const auto& lc : tw.thetas) prod = prod.mul(levi_char_torus_restriction(HC, lc));
  out.product_ok = prod == th;

  // structure: strictly increasing Levis, increasing depths
  out.structure_ok = true;
  for (size_t i = 0; i + 1 < tw.levis.size(); ++i) {
    if (!tw.levis[i].refines(tw.levis[i + 1]) || tw.levis[i] == tw.levis[i + 1])
      out.structure_ok = false;
    if (i + 2 < tw.levis.size()) {
      if (!(tw.depths[i] < tw.depths[i + 1])) out.structure_ok = false;
    } else {
      if (!(tw.depths[i] <= tw.depths[i + 1])) out.structure_ok = false;
    }
  }
  if (tw.d() >= 1 && tw.depths[tw.d() - 1] == tw.depths[tw.d()]) {
    // top character must be constant in the equal-depth edge case
    const LeviChar& top = tw.thetas[tw.d()];
    long long den = levi_char_den(HC, top);
    for (size_t t = 0; t < S.Ts->size(); ++t)
      if (levi_char_angle_on_torus(HC, top, (int)t, den) != 0) out.structure_ok = false;
  }

  // genericity of each theta_i for (G^i, G^{i+1}) at depth r_i
  out.genericity_ok = true;
  for (int i = 0; i < tw.d(); ++i) {
    TorusChar restr = levi_char_torus_restriction(HC, tw.thetas[i]);
    if (depth(restr) != tw.depths[i]) {
      out.genericity_ok = false;
      continue;
    }
    GenericElement X = extract_generic_element(*S.tower, restr, tw.depths[i]);
    auto rep = is_generic_relative(X, tw.levis[i], tw.levis[i + 1]);
    if (!rep.ge1 || !rep.ge2) out.genericity_ok = false;
  }
  return out;
}

// ---------------------------------------------------------------------------
// iterated induction

// parabolic orientation choices: one flag per induction step (true = use the
// block-lower parabolic), plus the Borel orientation of the base step
struct TowerParabolics {
  bool base_lower = false;
  std::vector<bool> step_lower;  // size d
};

// induction of a class function between nested block groups at one ring level
inline std::vector<cplx> induce_between(HoweCtx& HC, const FixedGroup& Gbig,
                                        const StdParabolic& sub, bool lower,
                                        const FixedGroup& Gsmall,
                                        const std::vector<cplx>& chi_small) {
  LeviSubgroup L(Gbig, sub, lower);
  const ConjClasses& cc = HC.conj(Gbig);
  ClassInductionKernel K = induction_class_counts(L, cc);
  // translate Levi-local indices to Gsmall indices
  std::vector<int> to_small(L.elems.size());
  for (size_t i = 0; i < L.elems.size(); ++i)
    to_small[i] = Gsmall.index_of(Gbig[L.elems[i]]);
  std::vector<cplx> out(Gbig.size(), 0.0);
  double gsz = (double)Gbig.size();
  for (size_t c = 0; c < cc.classes.size(); ++c) {
    cplx acc = 0;
    for (size_t i = 0; i < K.counts[c].size(); ++i)
      if (K.counts[c][i]) acc += (double)K.counts[c][i] * chi_small[to_small[i]];
    cplx v = acc * gsz / ((double)cc.classes[c].size() * K.psz);
    for (int e : cc.classes[c]) out[e] = v;
  }
  return out;
}

// character-level tower: ordinary induction of theta_{-1} inside G^0 at level
// 0, then per step induce through P^i at the previous depth, inflate, and
// twist by theta_i
inline ClassFunction tower_induce(HoweCtx& HC, const HoweTower& tw,
                                  const TowerParabolics& pb) {
  Session& S = *HC.S;
  require(S.tw.is_split(), Err::TwistNotSplit, "tower induction needs a split twist");
  require((int)pb.step_lower.size() >= tw.d(), Err::InvalidTower,
          "missing parabolic choices");

  // base: G^0 at level 0, ordinary induction of theta_{-1} from the diagonal
  const FixedGroup& G0 = HC.levi_group(tw.levis[0], 0);
  std::vector<cplx> chi;
  {
    LeviSubgroup Ldiag(G0, StdParabolic::borel(S.g.n), pb.base_lower);
    const ConjClasses& cc = HC.conj(G0);
    ClassInductionKernel K = induction_class_counts(Ldiag, cc);
    // theta_{-1} has depth 0: value on a level-0 diagonal = value at any lift
    std::vector<cplx> diag_vals(Ldiag.elems.size());
    for (size_t i = 0; i < Ldiag.elems.size(); ++i) {
      const Mat& d0 = G0[Ldiag.elems[i]];
      Mat lift = S.Ts->mc().identity();
      for (int k = 0; k < S.g.n; ++k) {
        Re v = S.Ts->rc().zero();
        S.Ts->rc().set_coef(v, 0, G0.rc().coef(G0.mc().entry(d0, k, k), 0));
        S.Ts->mc().set_entry(lift, k, k, v);
      }
      diag_vals[i] = tw.theta_m1.value(S.Ts->index_of(lift));
    }
    chi.assign(G0.size(), 0.0);
    double gsz = (double)G0.size();
    for (size_t c = 0; c < cc.classes.size(); ++c) {
      cplx acc = 0;
      for (size_t i = 0; i < K.counts[c].size(); ++i)
        if (K.counts[c][i]) acc += (double)K.counts[c][i] * diag_vals[i];
      cplx v = acc * gsz / ((double)cc.classes[c].size() * K.psz);
      for (int e : cc.classes[c]) chi[e] = v;
    }
  }

  const FixedGroup* cur_grp = &G0;
  int cur_level = 0;
  for (int i = 0; i <= tw.d(); ++i) {
    if (i > 0) {
      // induce from G^{i-1} into G^i at the previous level
      const FixedGroup& Gi_prev = HC.levi_group(tw.levis[i], cur_level);
      chi = induce_between(HC, Gi_prev, tw.levis[i - 1], pb.step_lower[i - 1], *cur_grp, chi);
      cur_grp = &Gi_prev;
    }
    // inflate to depth r_i and twist by theta_i
    const FixedGroup& Gi = HC.levi_group(tw.levis[i], tw.depths[i]);
    std::vector<cplx> lifted(Gi.size());
    for (size_t e = 0; e < Gi.size(); ++e) {
      Mat red = cur_grp->mc().zero();
      for (int a = 0; a < S.g.n; ++a)
        for (int b = 0; b < S.g.n; ++b) {
          Re src = Gi.mc().entry(Gi[e], a, b);
          Re dst = cur_grp->rc().zero();
          for (int lev = 0; lev <= cur_level; ++lev)
            cur_grp->rc().set_coef(dst, lev, Gi.rc().coef(src, lev));
          cur_grp->mc().set_entry(red, a, b, dst);
        }
      lifted[e] = chi[cur_grp->index_of(red)] * levi_char_value(HC, tw.thetas[i], Gi[e]);
    }
    chi = std::move(lifted);
    cur_grp = &Gi;
    cur_level = tw.depths[i];
  }

  // top group coincides with the session group element-for-element
  ClassFunction out(*S.Gs);
  for (size_t e = 0; e < cur_grp->size(); ++e)
    out.v[S.Gs->index_of((*cur_grp)[e])] = chi[e];
  return out;
}

}  // namespace jetchar
