#pragma once

// Twisted Frobenius sigma = Ad(w_lift) o (q-power), sigma-fixed subgroups via
// the F_p-linear fixed-space of the semilinear map, the twisted Lang solver,
// and very-regular element detection.

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "jetchar/bruhat.hpp"
#include "jetchar/linalg.hpp"

namespace jetchar {

struct FrobTwist {
  WeylElem w;
  int n = 1;  // minimal with sigma^n(B_r) = B_r; permutation lifts make this ord(w)

  static FrobTwist split(int rank) { return FrobTwist{WeylElem::identity(rank), 1}; }
  static FrobTwist from_weyl(const WeylElem& w_) { return FrobTwist{w_, w_.order()}; }
  bool is_split() const { return w.is_identity(); }
};

// sigma^k(g) = L^k g^(q^k) L^-k with L the lift of the twist
inline Mat apply_sigma(const MatCtx& mc, const RootDatum& rd, const Mat& g, const FrobTwist& tw,
                       long long k) {
  Mat out = mc.frob_q(g, k);
  long long kk = ((k % tw.n) + tw.n) % tw.n;
  if (kk == 0) return out;
  Mat L = rd.lift(tw.w);
  Mat Lk = mc.identity();
  for (long long i = 0; i < kk; ++i) Lk = mc.mul(Lk, L);
  return mc.mul(mc.mul(Lk, out), mc.inv(Lk));
}

// Semilinear maps x -> A sigma^k(x) B are F_p-linear on matrix coordinates;
// build the matrix of x -> lhs(x) - rhs(x) and return its kernel basis as
// matrices.
template <typename F>
inline std::vector<Mat> semilinear_kernel(const MatCtx& mc, F&& op) {
  int D = mc.size();
  int p = mc.rc->fc->p;
  // columns indexed by coefficient positions
  std::vector<std::vector<uint8_t>> rows(D, std::vector<uint8_t>(D, 0));
  Mat basis = mc.zero();
  for (int j = 0; j < D; ++j) {
    basis[j] = 1;
    Mat img = op(basis);
    basis[j] = 0;
    for (int i = 0; i < D; ++i) rows[i][j] = img[i];
  }
  auto kb = fp_kernel(p, std::move(rows), D);
  std::vector<Mat> out;
  out.reserve(kb.size());
  for (auto& v : kb) out.push_back(Mat(v.begin(), v.end()));
  return out;
}

struct FixedGroup {
  // ambient data
  const GroupContext* gctx = nullptr;
  int m = 1;  // working extension multiplier
  FrobTwist tw;
  int power = 1;                 // fixes (Ad(conj) o sigma^power)
  std::optional<Mat> conjugator;

  std::shared_ptr<MatCtx> mc_store;
  std::shared_ptr<RingCtx> rc_store;
  std::vector<Mat> elems;
  std::unordered_map<std::string, int> index;

  const MatCtx& mc() const { return *mc_store; }
  const RingCtx& rc() const { return *rc_store; }
  size_t size() const { return elems.size(); }
  const Mat& operator[](size_t i) const { return elems[i]; }

  int index_of(const Mat& g) const {
    auto it = index.find(std::string(g.begin(), g.end()));
    require(it != index.end(), Err::Internal, "element not in fixed group");
    return it->second;
  }
  bool contains(const Mat& g) const {
    return index.find(std::string(g.begin(), g.end())) != index.end();
  }
  int mul(int a, int b) const { return index_of(mc().mul(elems[a], elems[b])); }
  int inv(int a) const { return index_of(mc().inv(elems[a])); }
  int id_index() const { return index_of(mc().identity()); }
};

// All invertible solutions of (Ad(conj) o sigma^k)(x) = x over F_{q^m}.
// Restricting `pattern` keeps only matrices supported on given entries (used
// for torus forms); cap guards the kernel enumeration.
inline FixedGroup fixed_group(const GroupContext& g, FieldTower& tower, int m,
                              const FrobTwist& tw, int k,
                              const std::optional<Mat>& conjugator = std::nullopt,
                              long long cap = (1 << 24)) {
  FixedGroup out;
  out.gctx = &g;
  out.m = m;
  out.tw = tw;
  out.power = k;
  out.conjugator = conjugator;
  out.rc_store = std::make_shared<RingCtx>(tower.ctx(m), g.r);
  out.mc_store = std::make_shared<MatCtx>(*out.rc_store, g.n);
  const MatCtx& mc = *out.mc_store;
  RootDatum rd(mc, g.kind);

  std::optional<Mat> cinv;
  if (conjugator) cinv = mc.inv(*conjugator);
  auto op = [&](const Mat& x) {
    Mat y = apply_sigma(mc, rd, x, tw, k);
    if (conjugator) y = mc.mul(mc.mul(*conjugator, y), *cinv);
    return mc.sub(y, x);
  };
  auto kb = semilinear_kernel(mc, op);

  long long total = 1;
  int p = mc.rc->fc->p;
  for (size_t i = 0; i < kb.size(); ++i) {
    total *= p;
    require(total <= cap, Err::CapExceeded, "fixed-space enumeration too large");
  }
  std::vector<int> digits(kb.size(), 0);
  Mat cur = mc.zero();
  while (true) {
    // build combination
    Mat cand = mc.zero();
    for (size_t i = 0; i < kb.size(); ++i) {
      if (!digits[i]) continue;
      for (int j = 0; j < mc.size(); ++j)
        cand[j] = static_cast<uint8_t>((cand[j] + digits[i] * kb[i][j]) % p);
    }
    bool ok = mc.rc->is_unit(mc.det(cand));
    if (ok && g.kind == GroupKind::SL2)
      ok = mc.rc->is_zero(mc.rc->sub(mc.det(cand), mc.rc->one()));
    if (ok) out.elems.push_back(cand);
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
  (void)cur;
  std::sort(out.elems.begin(), out.elems.end());
  for (size_t i = 0; i < out.elems.size(); ++i)
    out.index[std::string(out.elems[i].begin(), out.elems[i].end())] = static_cast<int>(i);
  return out;
}

// Torus form: diagonal matrices fixed by the twist.  A sigma-fixed diagonal
// satisfies d[w(i)] = d[i]^q along each cycle of the twist, so it is
// determined by one unit per cycle with entries in the q^(cycle length)
// subfield; enumerate those heads instead of all diagonal tuples.
inline FixedGroup torus_fixed_group(const GroupContext& g, FieldTower& tower, int m,
                                    const FrobTwist& tw) {
  FixedGroup out;
  out.gctx = &g;
  out.m = m;
  out.tw = tw;
  out.power = 1;
  out.rc_store = std::make_shared<RingCtx>(tower.ctx(m), g.r);
  out.mc_store = std::make_shared<MatCtx>(*out.rc_store, g.n);
  const MatCtx& mc = *out.mc_store;
  const RingCtx& rc = *out.rc_store;
  RootDatum rd(mc, g.kind);

  int n = g.n;
  std::vector<std::vector<int>> cycles;
  {
    std::vector<char> seen(n, 0);
    for (int i = 0; i < n; ++i) {
      if (seen[i]) continue;
      std::vector<int> cyc;
      int j = i;
      while (!seen[j]) {
        seen[j] = 1;
        cyc.push_back(j);
        j = tw.w.perm[j];
      }
      cycles.push_back(cyc);
    }
  }
  // per-cycle head units over the q^(cycle length) subfield
  std::vector<std::vector<Re>> head_units(cycles.size());
  for (size_t ci = 0; ci < cycles.size(); ++ci) {
    int c = (int)cycles[ci].size();
    require(m % c == 0, Err::TwistIncompatible, "cycle length does not divide the extension");
    const FieldCtx& sub = tower.ctx(c);
    const Embedding& emb = tower.embedding(c, m);
    RingCtx rc_sub(sub, g.r);
    rc_sub.for_each([&](const Re& x) {
      if (!rc_sub.is_unit(x)) return;
      Re up = rc.zero();
      for (int lev = 0; lev <= g.r; ++lev) rc.set_coef(up, lev, emb.up(rc_sub.coef(x, lev)));
      head_units[ci].push_back(up);
    });
  }
  std::vector<size_t> idx(cycles.size(), 0);
  while (true) {
    Mat d = mc.identity();
    for (size_t ci = 0; ci < cycles.size(); ++ci) {
      Re v = head_units[ci][idx[ci]];
      for (int j : cycles[ci]) {
        mc.set_entry(d, j, j, v);
        v = rc.frob_q(v, 1);
      }
    }
    bool ok = true;
    if (g.kind == GroupKind::SL2) ok = rc.is_zero(rc.sub(mc.det(d), rc.one()));
    if (ok) {
      require(apply_sigma(mc, rd, d, tw, 1) == d, Err::Internal, "head fill not sigma-fixed");
      out.elems.push_back(d);
    }
    size_t i = 0;
    for (; i < cycles.size(); ++i) {
      if (idx[i] + 1 < head_units[i].size()) {
        ++idx[i];
        break;
      }
      idx[i] = 0;
    }
    if (i == cycles.size()) break;
  }
  std::sort(out.elems.begin(), out.elems.end());
  for (size_t i = 0; i < out.elems.size(); ++i)
    out.index[std::string(out.elems[i].begin(), out.elems[i].end())] = static_cast<int>(i);
  return out;
}

// Solve (optionally conjugated) twisted Lang equations
//   sigma^k(x) = g . x             (no conjugator)
//   sigma^k(x) = g . x . c^-1      (conjugator c)
// in GL_n over a large enough extension: every solution satisfies
// sigma^(k K)(x) = x for K = lcm(ord g, ord c), so the kernel over F_{q^(kK)}
// already contains the full solution set.  The returned solution is verified
// by substitution; failure to find an invertible kernel element would mean a
// bug, not a mathematical obstruction.
struct LangSolution {
  Mat x;
  int working_m;  // extension multiplier of the context the solution lives in
};

inline LangSolution solve_twisted_lang(const GroupContext& g, FieldTower& tower, int src_m,
                                       const Mat& gmat, const FrobTwist& tw, int k,
                                       const std::optional<Mat>& conj = std::nullopt,
                                       uint64_t seed = 0) {
  // order of g (and c) in the source group
  RingCtx rc_src(tower.ctx(src_m), g.r);
  MatCtx mc_src(rc_src, g.n);
  long long K = mc_src.order(gmat);
  if (conj) K = std::lcm(K, (long long)mc_src.order(*conj));
  int m_work = static_cast<int>(std::lcm((long long)src_m, (long long)k * K));

  RingCtx rc(tower.ctx(m_work), g.r);
  MatCtx mc(rc, g.n);
  RootDatum rd(mc, g.kind);
  const Embedding& emb = tower.embedding(src_m, m_work);

  auto up = [&](const Mat& m_small) {
    Mat out = mc.zero();
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        Re e = mc_src.entry(m_small, i, j);
        Re big = rc.zero();
        for (int lev = 0; lev <= g.r; ++lev) rc.set_coef(big, lev, emb.up(rc_src.coef(e, lev)));
        mc.set_entry(out, i, j, big);
      }
    return out;
  };

  Mat G = up(gmat);
  std::optional<Mat> C;
  if (conj) C = up(*conj);
  std::optional<Mat> Cinv;
  if (C) Cinv = mc.inv(*C);

  auto op = [&](const Mat& x) {
    Mat y = apply_sigma(mc, rd, x, tw, k);
    Mat rhs = mc.mul(G, x);
    if (Cinv) rhs = mc.mul(rhs, *Cinv);
    return mc.sub(y, rhs);
  };
  auto kb = semilinear_kernel(mc, op);
  require(!kb.empty(), Err::NoInvertibleSolution, "empty solution space");

  int p = rc.fc->p;
  auto try_comb = [&](const std::vector<int>& digits) -> std::optional<Mat> {
    Mat cand = mc.zero();
    for (size_t i = 0; i < kb.size(); ++i) {
      if (!digits[i]) continue;
      for (int j = 0; j < mc.size(); ++j)
        cand[j] = static_cast<uint8_t>((cand[j] + digits[i] * kb[i][j]) % p);
    }
    if (!mc.rc->is_unit(mc.det(cand))) return std::nullopt;
    return cand;
  };

  std::optional<Mat> sol;
  // deterministic first passes: single basis vectors, then pairs
  for (size_t i = 0; i < kb.size() && !sol; ++i) {
    std::vector<int> d(kb.size(), 0);
    d[i] = 1;
    sol = try_comb(d);
  }
  for (size_t i = 0; i < kb.size() && !sol; ++i)
    for (size_t j = i + 1; j < kb.size() && !sol; ++j) {
      std::vector<int> d(kb.size(), 0);
      d[i] = 1;
      d[j] = 1;
      sol = try_comb(d);
    }
  std::mt19937_64 rng(seed);
  for (int tries = 0; tries < 4096 && !sol; ++tries) {
    std::vector<int> d(kb.size());
    for (auto& v : d) v = static_cast<int>(rng() % p);
    sol = try_comb(d);
  }
  require(sol.has_value(), Err::NoInvertibleSolution,
          "no invertible element found in solution space");

  // hard postcondition: verify by substitution
  Mat lhs = apply_sigma(mc, rd, *sol, tw, k);
  Mat rhs = mc.mul(G, *sol);
  if (Cinv) rhs = mc.mul(rhs, *Cinv);
  require(lhs == rhs, Err::Internal, "Lang solution failed substitution check");
  return LangSolution{*sol, m_work};
}

struct VeryRegularReport {
  bool is_vreg = false;
  std::string witness;
};

namespace detail {

// characteristic polynomial coefficients (monic, ascending) of the residue
inline std::vector<Fe> residue_charpoly(const MatCtx& mc, const Mat& g) {
  const FieldCtx& fc = *mc.rc->fc;
  int n = mc.n;
  auto e = [&](int i, int j) { return mc.rc->coef(mc.entry(g, i, j), 0); };
  std::vector<Fe> c(n + 1, fc.zero());
  c[n] = fc.one();
  if (n == 1) {
    c[0] = fc.neg(e(0, 0));
  } else if (n == 2) {
    Fe tr = fc.add(e(0, 0), e(1, 1));
    Fe det = fc.sub(fc.mul(e(0, 0), e(1, 1)), fc.mul(e(0, 1), e(1, 0)));
    c[1] = fc.neg(tr);
    c[0] = det;
  } else {
    Fe tr = fc.add(fc.add(e(0, 0), e(1, 1)), e(2, 2));
    auto minor2 = [&](int a, int b) {
      return fc.sub(fc.mul(e(a, a), e(b, b)), fc.mul(e(a, b), e(b, a)));
    };
    Fe m2 = fc.add(fc.add(minor2(0, 1), minor2(0, 2)), minor2(1, 2));
    // det via full expansion
    Fe det = fc.zero();
    int idx[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}, {1, 0, 2}, {0, 2, 1}};
    for (int s = 0; s < 6; ++s) {
      Fe term = fc.mul(fc.mul(e(0, idx[s][0]), e(1, idx[s][1])), e(2, idx[s][2]));
      det = s < 3 ? fc.add(det, term) : fc.sub(det, term);
    }
    c[2] = fc.neg(tr);
    c[1] = m2;
    c[0] = fc.neg(det);
  }
  return c;
}

inline int fe_poly_deg(const FieldCtx& fc, const std::vector<Fe>& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (!fc.is_zero(a[i])) return i;
  return -1;
}

inline std::vector<Fe> fe_poly_gcd(const FieldCtx& fc, std::vector<Fe> a, std::vector<Fe> b) {
  while (fe_poly_deg(fc, b) >= 0) {
    int db = fe_poly_deg(fc, b);
    Fe li = fc.inv(b[db]);
    int da;
    while ((da = fe_poly_deg(fc, a)) >= db) {
      Fe c = fc.mul(a[da], li);
      for (int i = 0; i <= db; ++i)
        a[da - db + i] = fc.sub(a[da - db + i], fc.mul(c, b[i]));
    }
    std::swap(a, b);
  }
  return a;
}

}  // namespace detail

// very regular <=> reduction mod t is regular semisimple <=> squarefree
// residue characteristic polynomial (hyperspecial case)
inline VeryRegularReport is_very_regular(const MatCtx& mc, const Mat& g) {
  const FieldCtx& fc = *mc.rc->fc;
  VeryRegularReport rep;
  auto chi = detail::residue_charpoly(mc, g);
  // derivative
  std::vector<Fe> dchi(chi.size() - 1, fc.zero());
  for (size_t i = 1; i < chi.size(); ++i) dchi[i - 1] = fc.scale(chi[i], static_cast<int>(i % fc.p));
  auto gc = detail::fe_poly_gcd(fc, chi, dchi);
  rep.is_vreg = detail::fe_poly_deg(fc, gc) == 0;
  if (rep.is_vreg) {
    rep.witness = "reduction is regular semisimple";
    return rep;
  }
  // witness: for diagonal reductions report an explicit root pair
  bool diag = true;
  for (int i = 0; i < mc.n && diag; ++i)
    for (int j = 0; j < mc.n && diag; ++j)
      if (i != j && !fc.is_zero(mc.rc->coef(mc.entry(g, i, j), 0))) diag = false;
  if (diag) {
    for (int i = 0; i < mc.n; ++i)
      for (int j = i + 1; j < mc.n; ++j)
        if (mc.rc->coef(mc.entry(g, i, i), 0) == mc.rc->coef(mc.entry(g, j, j), 0)) {
          rep.witness = "alpha(" + std::to_string(i) + "," + std::to_string(j) + ") = 1";
          return rep;
        }
  }
  rep.witness = "characteristic polynomial has a repeated factor";
  return rep;
}

}  // namespace jetchar
