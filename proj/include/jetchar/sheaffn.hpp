#pragma once

// Function avatar of the sheaf calculus on the level-r congruence quotient:
// finite Fourier transform on g = M_n(F_q) (trace pairing), convolution,
// generic idempotents e_psi / f_psi, Lie-algebra parabolic induction and the
// Harish-Chandra transform.  Everything here is for the split form over F_q.

#include "jetchar/genericity.hpp"

namespace jetchar {

// finite F_q-vector space of matrices, optionally restricted to a block
// pattern (Levi) or trace zero (sl_2)
struct LieSpace {
  const FieldCtx* fc = nullptr;
  int n = 2;
  std::shared_ptr<RingCtx> rc0;
  std::shared_ptr<MatCtx> mc0;
  std::optional<StdParabolic> blocks;  // restrict to block diagonal
  bool trace_zero = false;

  std::vector<Mat> pts;
  std::unordered_map<std::string, int> index;

  LieSpace(const FieldCtx& f, int n_, std::optional<StdParabolic> levi = std::nullopt,
           bool sl2 = false)
      : fc(&f), n(n_), blocks(std::move(levi)), trace_zero(sl2) {
    rc0 = std::make_shared<RingCtx>(f, 0);
    mc0 = std::make_shared<MatCtx>(*rc0, n);
    enumerate();
  }

  size_t size() const { return pts.size(); }
  int index_of(const Mat& m) const {
    auto it = index.find(std::string(m.begin(), m.end()));
    require(it != index.end(), Err::Internal, "point not in Lie space");
    return it->second;
  }
  bool contains(const Mat& m) const {
    return index.find(std::string(m.begin(), m.end())) != index.end();
  }

  bool allowed(int i, int j) const {
    return !blocks || blocks->block_of(i) == blocks->block_of(j);
  }

  // trace-pairing angle: Tr_abs(Tr(a b)) as numerator over p
  int pairing_angle(const Mat& a, const Mat& b) const {
    Mat prod = mc0->mul(a, b);
    return fc->trace_abs(rc0->coef(mc0->trace(prod), 0));
  }

 private:
  void enumerate() {
    std::vector<std::pair<int, int>> free_pos;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (allowed(i, j)) free_pos.push_back({i, j});
    int e = fc->deg();
    std::vector<uint8_t> digits(free_pos.size() * e, 0);
    while (true) {
      Mat m = mc0->zero();
      for (size_t k = 0; k < free_pos.size(); ++k) {
        Fe c(digits.begin() + k * e, digits.begin() + (k + 1) * e);
        mc0->set_entry(m, free_pos[k].first, free_pos[k].second, rc0->from_field(c));
      }
      bool ok = true;
      if (trace_zero) ok = fc->is_zero(rc0->coef(mc0->trace(m), 0));
      if (ok) {
        index[std::string(m.begin(), m.end())] = static_cast<int>(pts.size());
        pts.push_back(m);
      }
      size_t i = 0;
      for (; i < digits.size(); ++i) {
        if (digits[i] + 1 < fc->p) {
          ++digits[i];
          break;
        }
        digits[i] = 0;
      }
      if (i == digits.size()) break;
    }
  }
};

struct LieFn {
  const LieSpace* dom = nullptr;
  std::vector<cplx> v;
  LieFn() = default;
  explicit LieFn(const LieSpace& d, cplx fill = 0.0) : dom(&d), v(d.size(), fill) {}
  cplx& operator[](size_t i) { return v[i]; }
  const cplx& operator[](size_t i) const { return v[i]; }
};

// FT(f)(X) = sum_Y f(Y) psi_0(<X,Y>)
inline LieFn fourier(const LieFn& f) {
  const LieSpace& V = *f.dom;
  LieFn out(V);
  int p = V.fc->p;
  for (size_t x = 0; x < V.size(); ++x) {
    cplx acc = 0;
    for (size_t y = 0; y < V.size(); ++y) {
      if (f.v[y] == cplx(0)) continue;
      acc += f.v[y] * unit_root(V.pairing_angle(V.pts[x], V.pts[y]), p);
    }
    out.v[x] = acc;
  }
  return out;
}

// group convolution (f * g)(x) = sum_h f(h) g(h^-1 x) on a fixed group
inline ClassFunction convolve(const ClassFunction& f, const ClassFunction& g) {
  require(f.dom == g.dom, Err::DomainMismatch, "convolution domains differ");
  const FixedGroup& G = *f.dom;
  ClassFunction out(G);
  std::vector<int> supp;
  for (size_t h = 0; h < G.size(); ++h)
    if (f.v[h] != cplx(0)) supp.push_back((int)h);
  for (int h : supp) {
    int hi = G.inv(h);
    for (size_t x = 0; x < G.size(); ++x) out.v[x] += f.v[h] * g.v[G.mul(hi, (int)x)];
  }
  return out;
}

// level-r congruence part of a group element as a Lie matrix, or nullopt
inline std::optional<Mat> congruence_part(const FixedGroup& G, const LieSpace& V,
                                          const Mat& g) {
  const MatCtx& mc = G.mc();
  const RingCtx& rc = G.rc();
  int r = G.gctx->r;
  if (mc.reduce_mod(g, r - 1) != mc.identity()) return std::nullopt;
  // level-r coefficient of g equals that of g - 1 (the 1 sits at level 0)
  Mat y = V.mc0->zero();
  for (int i = 0; i < mc.n; ++i)
    for (int j = 0; j < mc.n; ++j) {
      Fe c = rc.coef(mc.entry(g, i, j), r);
      V.mc0->set_entry(y, i, j, V.rc0->from_field(c));
    }
  if (!V.contains(y)) return std::nullopt;
  return y;
}

// diagonal realization of a coefficient vector as a Lie matrix
inline Mat coeff_matrix(const LieSpace& V, const GenericElement& X) {
  Mat m = V.mc0->zero();
  for (size_t i = 0; i < X.c.size(); ++i)
    V.mc0->set_entry(m, (int)i, (int)i, V.rc0->from_field(X.c[i]));
  return m;
}

// coadjoint orbit of X under G_0(F_q) (trace form identifies g* with g)
inline std::vector<Mat> coadjoint_orbit(const LieSpace& V, const GroupTable& G0, const Mat& X) {
  require(V.contains(X), Err::BadInput, "orbit seed not in the space");
  std::vector<Mat> orbit;
  std::unordered_map<std::string, char> seen;
  for (size_t i = 0; i < G0.size(); ++i) {
    Mat y = G0.mc().mul(G0.mc().mul(G0[i], X), G0.mc().inv(G0[i]));
    std::string k(y.begin(), y.end());
    if (!seen.count(k)) {
      seen[k] = 1;
      orbit.push_back(y);
    }
  }
  return orbit;
}

// e_psi on the Levi fixed group: supported on the level-r congruence
// subgroup, value psi_0(<X,Y>) / |l|
inline ClassFunction generic_idem_e(const FixedGroup& L, const LieSpace& l_space,
                                    const GenericElement& X) {
  ClassFunction out(L);
  Mat Xm = coeff_matrix(l_space, X);
  double lsz = 0;
  std::vector<std::pair<int, int>> hits;  // (group index, angle)
  for (size_t i = 0; i < L.size(); ++i) {
    auto y = congruence_part(L, l_space, L[i]);
    if (!y) continue;
    lsz += 1;
    hits.push_back({(int)i, l_space.pairing_angle(Xm, *y)});
  }
  for (auto& [idx, ang] : hits) out.v[idx] = unit_root(ang, l_space.fc->p) / lsz;
  return out;
}

// f_psi on the ambient fixed group: supported on the level-r congruence
// subgroup, value sum over the coadjoint orbit of psi_0(<Z,Y>) / |g|
inline ClassFunction generic_idem_f(const FixedGroup& G, const LieSpace& g_space,
                                    const std::vector<Mat>& orbit) {
  ClassFunction out(G);
  double gsz = 0;
  std::vector<std::pair<int, Mat>> hits;
  for (size_t i = 0; i < G.size(); ++i) {
    auto y = congruence_part(G, g_space, G[i]);
    if (!y) continue;
    gsz += 1;
    hits.push_back({(int)i, *y});
  }
  for (auto& [idx, y] : hits) {
    cplx acc = 0;
    for (const Mat& z : orbit) acc += unit_root(g_space.pairing_angle(z, y), g_space.fc->p);
    out.v[idx] = acc / gsz;
  }
  return out;
}

// Lie-level parabolic induction, normalized so that inducing e_psi-type
// functions lands exactly on f_psi-type functions:
//   (Ind f)(Z) = 1/(|P_0| |u|) sum_{x in G_0} [Ad(x^-1) Z in p] f(pr_l(Ad(x^-1) Z))
inline LieFn lie_parabolic_induce(const LieFn& f, const LieSpace& g_space,
                                  const GroupTable& G0, const StdParabolic& P) {
  const LieSpace& l_space = *f.dom;
  LieFn out(g_space);
  const MatCtx& m0 = G0.mc();
  int n = m0.n;
  // |P_0| and |u|
  double p0 = 0;
  for (size_t i = 0; i < G0.size(); ++i)
    if (G0.in_subgroup(G0[i], Sub::P, &P)) p0 += 1;
  double usz = 1;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (P.block_of(i) < P.block_of(j)) usz *= (double)g_space.fc->card();

  std::vector<Mat> invs(G0.size());
  for (size_t x = 0; x < G0.size(); ++x) invs[x] = m0.inv(G0[x]);
  for (size_t zi = 0; zi < g_space.size(); ++zi) {
    cplx acc = 0;
    for (size_t x = 0; x < G0.size(); ++x) {
      Mat ad = m0.mul(m0.mul(invs[x], g_space.pts[zi]), G0[x]);
      // in p: block lower part zero
      bool in_p = true;
      for (int i = 0; i < n && in_p; ++i)
        for (int j = 0; j < n && in_p; ++j)
          if (P.block_of(i) > P.block_of(j) &&
              !g_space.rc0->is_zero(m0.entry(ad, i, j)))
            in_p = false;
      if (!in_p) continue;
      // project to the Levi blocks
      Mat pr = l_space.mc0->zero();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (P.block_of(i) == P.block_of(j)) l_space.mc0->set_entry(pr, i, j, m0.entry(ad, i, j));
      acc += f.v[l_space.index_of(pr)];
    }
    out.v[zi] = acc / (p0 * usz);
  }
  return out;
}

// Harish-Chandra transform: sum over U_P^sigma-cosets
struct CosetSpace {
  std::vector<int> coset_of;       // element index -> coset id
  std::vector<int> reps;           // coset id -> representative element index
  std::vector<char> in_borel_img;  // coset meets B (resp. P)
};

inline CosetSpace coset_space(const FixedGroup& G, const StdParabolic& P) {
  // right cosets x U_P^sigma
  std::vector<int> u_idx;
  for (size_t i = 0; i < G.size(); ++i)
    if (mat_in_subgroup(G.mc(), G[i], Sub::UP, &P)) u_idx.push_back((int)i);
  CosetSpace cs;
  cs.coset_of.assign(G.size(), -1);
  for (size_t i = 0; i < G.size(); ++i) {
    if (cs.coset_of[i] >= 0) continue;
    int cid = (int)cs.reps.size();
    bool meets_p = false;
    for (int u : u_idx) {
      int e = G.mul((int)i, u);
      cs.coset_of[e] = cid;
      if (mat_in_subgroup(G.mc(), G[e], Sub::P, &P)) meets_p = true;
    }
    cs.reps.push_back((int)i);
    cs.in_borel_img.push_back(meets_p ? 1 : 0);
  }
  return cs;
}

inline std::vector<cplx> hc_transform(const ClassFunction& f, const CosetSpace& cs) {
  std::vector<cplx> out(cs.reps.size(), 0.0);
  for (size_t i = 0; i < f.v.size(); ++i) out[cs.coset_of[i]] += f.v[i];
  return out;
}

}  // namespace jetchar
