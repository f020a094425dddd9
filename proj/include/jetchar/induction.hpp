#pragma once

// Induced characters of G_r^sigma: ordinary split parabolic induction, the
// fixed-point coset formula (Z_g partition), twisted induction through the
// torus, Mackey decomposition by double cosets, and the Frobenius-power
// proportionality check.
//
// The Z_g partition for g in G_r^sigma counts cosets h T_r^sigma(U cap sU)
// with h^-1 s(h) in s(U_r) and s^N(h)^-1 g h in T_r^sigma (U cap s(U)),
// N = n*m, graded by the torus part tau of s^N(h)^-1 g h.  Three routes are
// implemented:
//   * flag route (fast): untwist by one Lang element x with s^N(x) = g x;
//     cosets biject with F_{q^N}-rational flags h'B with
//     h'^-1 (x^-1 s(x)) s(h') in B_r s(B_r), and tau is the product of the
//     Frobenius translates of the torus part of that double-coset element.
//   * per-tau route: solve s^N(x_tau) = g x_tau tau^-1 per tau, translate by
//     the fixed group of the tau-conjugated Frobenius, filter and dedupe.
// The two routes are cross-checked against each other and against blind
// enumeration over small rational slices in the test suite.

#include <functional>
#include <thread>

#include "jetchar/sheaffn.hpp"

namespace jetchar {

// ---------------------------------------------------------------------------
// session: owns the tower and the standard objects for one configuration

struct Session {
  std::unique_ptr<FieldTower> tower;
  GroupContext g;
  FrobTwist tw;

  std::unique_ptr<FixedGroup> Gs;  // sigma-fixed points of G_r
  std::unique_ptr<FixedGroup> Ts;  // sigma-fixed points of T_r
  std::unique_ptr<AbelianStructure> Tst;
  std::vector<TorusChar> theta;
  std::unique_ptr<ConjClasses> classes;

  Session(GroupKind kind, int n, int p, int f, int r, FrobTwist tw_)
      : tw(tw_) {
    tower = std::make_unique<FieldTower>(p, f);
    g.kind = kind;
    g.n = n;
    g.r = r;
    g.fc = &tower->ctx(1);
    int mt = tw.n;
    Gs = std::make_unique<FixedGroup>(fixed_group(g, *tower, mt, tw, 1));
    Ts = std::make_unique<FixedGroup>(torus_fixed_group(g, *tower, mt, tw));
    Tst = std::make_unique<AbelianStructure>(abelian_structure(*Ts));
    theta = characters(*Tst);
  }

  const ConjClasses& conj_classes() {
    if (!classes) classes = std::make_unique<ConjClasses>(conjugacy_classes(*Gs));
    return *classes;
  }
};

// ---------------------------------------------------------------------------
// ordinary induction through a parabolic pattern

struct LeviSubgroup {
  const FixedGroup* G = nullptr;
  StdParabolic P;
  bool lower = false;  // use the opposite (block lower) parabolic
  std::vector<int> elems;                // G-indices of Levi-pattern elements
  std::unordered_map<int, int> local;    // G-index -> local index
  double psz = 0;                        // |P^sigma|

  LeviSubgroup() = default;
  LeviSubgroup(const FixedGroup& g, StdParabolic p, bool lower_ = false)
      : G(&g), P(std::move(p)), lower(lower_) {
    for (size_t i = 0; i < g.size(); ++i) {
      if (mat_in_subgroup(g.mc(), g[i], Sub::L, &P)) {
        local[(int)i] = (int)elems.size();
        elems.push_back((int)i);
      }
      if (in_parabolic(g[i])) psz += 1;
    }
  }

  bool in_parabolic(const Mat& m) const {
    int n = G->mc().n, esz = G->mc().esz();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        bool kill = lower ? P.block_of(i) < P.block_of(j) : P.block_of(i) > P.block_of(j);
        if (!kill) continue;
        const uint8_t* e = m.data() + (i * n + j) * esz;
        for (int b = 0; b < esz; ++b)
          if (e[b]) return false;
      }
    return true;
  }

  int levi_local(const Mat& m) const {  // block-diagonal part
    Mat d = G->mc().zero();
    int n = G->mc().n, esz = G->mc().esz();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (P.block_of(i) == P.block_of(j))
          std::copy(m.begin() + (i * n + j) * esz, m.begin() + (i * n + j + 1) * esz,
                    d.begin() + (i * n + j) * esz);
    return local.at(G->index_of(d));
  }
};

// counts[k][levi_local] = #{x in G : x^-1 g_k x in P, levi part = that};
// direct double loop, used for small instances and as a cross-check
inline std::vector<std::vector<int>> induction_counts(const LeviSubgroup& L,
                                                      const std::vector<int>& gs) {
  const FixedGroup& G = *L.G;
  std::vector<std::vector<int>> out(gs.size(), std::vector<int>(L.elems.size(), 0));
  std::vector<Mat> invs(G.size());
  for (size_t x = 0; x < G.size(); ++x) invs[x] = G.mc().inv(G[x]);
  for (size_t k = 0; k < gs.size(); ++k) {
    const Mat& gm = G[gs[k]];
    for (size_t x = 0; x < G.size(); ++x) {
      Mat c = G.mc().mul(G.mc().mul(invs[x], gm), G[x]);
      if (!L.in_parabolic(c)) continue;
      ++out[k][L.levi_local(c)];
    }
  }
  return out;
}

// chi(g) = |P|^-1 sum over counts of Levi-character values
inline cplx induced_value(const LeviSubgroup& L, const std::vector<int>& counts,
                          const std::function<cplx(int)>& levi_val) {
  cplx acc = 0;
  for (size_t i = 0; i < counts.size(); ++i)
    if (counts[i]) acc += (double)counts[i] * levi_val((int)i);
  return acc / L.psz;
}

// Class-fused induction kernel: substituting y = x^-1 g x in the induced
// character formula turns the sum over G into one sweep over P, each y in
// class(g) hit |C_G(g)| times:
//   Ind chi (class c) = (|G| / (|c| |P|)) sum_{y in P, class(y) = c} chi~(y)
struct ClassInductionKernel {
  std::vector<std::vector<long long>> counts;  // [class][levi_local]
  double psz = 0;
};

inline ClassInductionKernel induction_class_counts(const LeviSubgroup& L,
                                                   const ConjClasses& cc) {
  const FixedGroup& G = *L.G;
  ClassInductionKernel out;
  out.psz = L.psz;
  out.counts.assign(cc.classes.size(), std::vector<long long>(L.elems.size(), 0));
  for (size_t y = 0; y < G.size(); ++y) {
    if (!L.in_parabolic(G[y])) continue;
    ++out.counts[cc.class_of[y]][L.levi_local(G[y])];
  }
  return out;
}

// full induced character on G^sigma from the class-fused kernel
inline ClassFunction induce_class_function(Session& S, const LeviSubgroup& L,
                                           const std::function<cplx(int)>& levi_val) {
  const ConjClasses& cc = S.conj_classes();
  ClassInductionKernel K = induction_class_counts(L, cc);
  double gsz = (double)S.Gs->size();
  ClassFunction out(*S.Gs);
  for (size_t c = 0; c < cc.classes.size(); ++c) {
    cplx acc = 0;
    for (size_t i = 0; i < K.counts[c].size(); ++i)
      if (K.counts[c][i]) acc += (double)K.counts[c][i] * levi_val((int)i);
    cplx v = acc * gsz / ((double)cc.classes[c].size() * K.psz);
    for (int e : cc.classes[c]) out.v[e] = v;
  }
  return out;
}

// the ordinary induced character of a torus character through B (split twist)
inline ClassFunction induce_split(Session& S, const TorusChar& th) {
  require(S.tw.is_split(), Err::TwistNotSplit, "split parabolic induction needs a split twist");
  StdParabolic B = StdParabolic::borel(S.g.n);
  LeviSubgroup L(*S.Gs, B);
  // Levi = torus: local index -> Ts index
  std::vector<int> to_ts(L.elems.size());
  for (size_t i = 0; i < L.elems.size(); ++i)
    to_ts[i] = S.Ts->index_of((*S.Gs)[L.elems[i]]);
  auto val = [&](int loc) { return th.value(to_ts[loc]); };
  return induce_class_function(S, L, val);
}

// ---------------------------------------------------------------------------
// flags

// coset representatives of G/B over the element field; direct line
// parametrization for n = 2, coset sweep otherwise
inline std::vector<Mat> flag_reps(const MatCtx& mc, GroupKind kind) {
  const RingCtx& rc = *mc.rc;
  int n = mc.n;
  if (n == 2) {
    std::vector<Mat> out;
    std::vector<Re> all;
    rc.for_each([&](const Re& x) { all.push_back(x); });
    for (const Re& c : all) {  // lines (1, c): rep [[1, 0], [c, 1]]
      Mat m = mc.identity();
      mc.set_entry(m, 1, 0, c);
      out.push_back(m);
    }
    for (const Re& d : all) {  // lines (d, 1), d not a unit: rep [[d, +-1], [1, 0]]
      if (rc.is_unit(d)) continue;
      Mat m = mc.zero();
      mc.set_entry(m, 0, 0, d);
      mc.set_entry(m, 0, 1, kind == GroupKind::SL2 ? rc.neg(rc.one()) : rc.one());
      mc.set_entry(m, 1, 0, rc.one());
      out.push_back(m);
    }
    return out;
  }
  fail(Err::CapExceeded, "flag enumeration beyond n=2 requires an enumerated group");
}

inline std::vector<Mat> flag_reps_enumerated(const GroupTable& G) {
  std::vector<char> seen(G.size(), 0);
  std::vector<int> B = G.subgroup_indices(Sub::B);
  std::vector<Mat> out;
  for (size_t i = 0; i < G.size(); ++i) {
    if (seen[i]) continue;
    out.push_back(G[i]);
    for (int b : B) seen[G.mul((int)i, b)] = 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Z_g machinery

struct ZPartition {
  int g_index = -1;
  std::vector<long long> counts;  // indexed by Ts element
  long long total = 0;
};

class ZMachine {
 public:
  // N = tw.n * m_power: the Frobenius power sigma^N used in the coset formula
  ZMachine(Session& S, int m_power = 1) : S_(&S), m_(m_power) {
    N_ = S.tw.n * m_power;
    rc_flag_ = std::make_unique<RingCtx>(S.tower->ctx(N_), S.g.r);
    mc_flag_ = std::make_unique<MatCtx>(*rc_flag_, S.g.n);
    rd_flag_ = std::make_unique<RootDatum>(*mc_flag_, S.g.kind);
    flags_ = flag_reps(*mc_flag_, S.g.kind);
    for (auto& h : flags_) flag_invs_.push_back(mc_flag_->inv(h));
    wlift_ = rd_flag_->lift(S.tw.w);
  }

  int sigma_power() const { return N_; }
  size_t flag_count() const { return flags_.size(); }

  // fast route
  ZPartition z_partition(int g_index) {
    Session& S = *S_;
    const Mat& gm = (*S.Gs)[g_index];
    LangSolution xs = solve_twisted_lang(S.g, *S.tower, S.tw.n, gm, S.tw, N_);
    // c = x^-1 sigma(x), rational over F_{q^N}; map down to the flag context
    RingCtx rcw(S.tower->ctx(xs.working_m), S.g.r);
    MatCtx mcw(rcw, S.g.n);
    RootDatum rdw(mcw, S.g.kind);
    Mat c_big = mcw.mul(mcw.inv(xs.x), apply_sigma(mcw, rdw, xs.x, S.tw, 1));
    require(apply_sigma(mcw, rdw, c_big, S.tw, N_) == c_big, Err::Internal,
            "untwisting element is not sigma^N-rational");
    Mat c = mat_change_ctx(*S.tower, S.g, c_big, xs.working_m, N_);

    ZPartition out;
    out.g_index = g_index;
    out.counts.assign(S.Ts->size(), 0);
    for (size_t fi = 0; fi < flags_.size(); ++fi) {
      Mat z = mc_flag_->mul(mc_flag_->mul(flag_invs_[fi], c),
                            apply_sigma(*mc_flag_, *rd_flag_, flags_[fi], S.tw, 1));
      auto tau = flag_tau(z);
      if (!tau) continue;
      ++out.counts[*tau];
      ++out.total;
    }
    return out;
  }

  // value of the torus part for one flag, or nullopt if the incidence
  // condition fails
  std::optional<int> flag_tau(const Mat& z) {
    Session& S = *S_;
    // z in B_r sigma(B_r) <=> z wlift in B_r w B_r
    Mat A = mc_flag_->mul(z, wlift_);
    BruhatFactor bf = ring_bruhat_factor(*mc_flag_, A, S.tw.w, wlift_);
    if (!bf.in_cell) return std::nullopt;
    // tau = prod_{j<N} sigma^j(t)
    Mat t = mc_flag_->identity();
    for (int i = 0; i < S.g.n; ++i) mc_flag_->set_entry(t, i, i, bf.tvec[i]);
    Mat tau = mc_flag_->identity();
    Mat cur = t;
    for (int j = 0; j < N_; ++j) {
      tau = mc_flag_->mul(tau, cur);
      cur = apply_sigma(*mc_flag_, *rd_flag_, cur, S.tw, 1);
    }
    Mat tau_small = mat_change_ctx(*S.tower, S.g, tau, N_, S.Ts->m);
    return S.Ts->index_of(tau_small);
  }

  // chi(g) = sum_tau theta(tau) count(tau)
  cplx value(const TorusChar& th, const ZPartition& zp) const {
    cplx acc = 0;
    for (size_t t = 0; t < zp.counts.size(); ++t)
      if (zp.counts[t]) acc += (double)zp.counts[t] * th.value((int)t);
    return acc;
  }

  // character table over the whole group, computed per conjugacy class;
  // partitions are cached so different characters reuse them
  ClassFunction character(const TorusChar& th) {
    Session& S = *S_;
    const ConjClasses& cc = S.conj_classes();
    const auto& parts = partitions_by_class();
    ClassFunction out(*S.Gs);
    for (size_t c = 0; c < cc.classes.size(); ++c) {
      cplx v = value(th, parts[c]);
      for (int e : cc.classes[c]) out.v[e] = v;
    }
    return out;
  }

  const std::vector<ZPartition>& partitions_by_class() {
    if (parts_.empty()) {
      Session& S = *S_;
      const ConjClasses& cc = S.conj_classes();
      parts_.reserve(cc.classes.size());
      for (const auto& cls : cc.classes) parts_.push_back(z_partition(cls[0]));
    }
    return parts_;
  }

  // reference route: per-tau Lang untwisting with fixed-group translates.
  // The fixed group of Ad(tau^-1) o sigma^N lives over F_{q^(N ord tau)}, so
  // it is enumerated there (gray-code sweep, residue-determinant filter) and
  // only its invertible elements are lifted to the common field of x_tau.
  ZPartition z_partition_per_tau(int g_index, long long kernel_cap = (1 << 22)) {
    Session& S = *S_;
    const Mat& gm = (*S.Gs)[g_index];
    ZPartition out;
    out.g_index = g_index;
    out.counts.assign(S.Ts->size(), 0);
    for (size_t ti = 0; ti < S.Ts->size(); ++ti) {
      const Mat& tau = (*S.Ts)[ti];
      int ord_tau = (int)detail::elem_order(*S.Ts, (int)ti);
      int m_fix = N_ * ord_tau;

      // h = x k with sigma^N(x) = g x tau^-1 runs over all exact-tau
      // representatives; the filter h^-1 s(h) = k^-1 c s(k) only needs
      // c = x^-1 s(x), which satisfies sigma^(N ord tau)(c) = c and so lives
      // over F_{q^m_fix}
      LangSolution xs = solve_twisted_lang(S.g, *S.tower, S.Gs->m, gm, S.tw, N_, tau);
      RingCtx rcw(S.tower->ctx(xs.working_m), S.g.r);
      MatCtx mcw(rcw, S.g.n);
      RootDatum rdw(mcw, S.g.kind);
      Mat c_big = mcw.mul(mcw.inv(xs.x), apply_sigma(mcw, rdw, xs.x, S.tw, 1));
      Mat c = mat_change_ctx(*S.tower, S.g, c_big, xs.working_m, m_fix);

      RingCtx rcf(S.tower->ctx(m_fix), S.g.r);
      MatCtx mcf(rcf, S.g.n);
      RootDatum rdf(mcf, S.g.kind);
      std::vector<Mat> survivors, stab;
      per_tau_scan(tau, m_fix, c, kernel_cap, survivors, stab);
      require(!stab.empty(), Err::Internal, "coset stabilizer is empty");
      require(survivors.size() % stab.size() == 0, Err::Internal,
              "survivors not a union of stabilizer cosets");
      // dedupe by canonical representative under right multiplication
      std::unordered_map<std::string, char> seen;
      long long cosets = 0;
      for (const Mat& k : survivors) {
        std::string best;
        for (const Mat& s2 : stab) {
          Mat kk = mcf.mul(k, s2);
          std::string key(kk.begin(), kk.end());
          if (best.empty() || key < best) best = key;
        }
        if (!seen.count(best)) {
          seen[best] = 1;
          ++cosets;
        }
      }
      out.counts[ti] = cosets;
      out.total += cosets;
    }
    return out;
  }

  // One sweep over the solution space of sigma^N(k) = tau k tau^-1 over
  // F_{q^m_fix}: collects coset survivors (k^-1 c sigma(k) in sigma(U_r)) and
  // the stabilizer subgroup Fix cap T^sigma (U cap sigma U).  Candidates are
  // prefiltered on the residue level.
  void per_tau_scan(const Mat& tau, int m_fix, const Mat& c, long long cap,
                    std::vector<Mat>& survivors, std::vector<Mat>& stab) {
    Session& S = *S_;
    RingCtx rcf(S.tower->ctx(m_fix), S.g.r);
    MatCtx mcf(rcf, S.g.n);
    RootDatum rdf(mcf, S.g.kind);
    Mat tau_up = mat_change_ctx(*S.tower, S.g, tau, S.Ts->m, m_fix);
    Mat tau_up_inv = mcf.inv(tau_up);
    auto op = [&](const Mat& k) {
      Mat y = apply_sigma(mcf, rdf, k, S.tw, N_);
      return mcf.sub(y, mcf.mul(mcf.mul(tau_up, k), tau_up_inv));
    };
    auto kb = semilinear_kernel(mcf, op);
    long long total = 1;
    for (size_t i = 0; i < kb.size(); ++i) {
      total *= rcf.fc->p;
      require(total <= cap, Err::CapExceeded, "per-tau kernel too large");
    }

    // residue layer over the same field
    RingCtx rc0(S.tower->ctx(m_fix), 0);
    MatCtx mc0(rc0, S.g.n);
    RootDatum rd0(mc0, S.g.kind);
    Mat c0 = residue_of(mcf, mc0, c);

    // byte-level support mask for T (U cap sigma(U)): diagonal plus positions
    // that are upper for both B and sigma(B)
    std::vector<char> tu_mask(S.g.n * S.g.n, 0);
    {
      WeylElem winv = S.tw.w.inverse();
      for (int i = 0; i < S.g.n; ++i)
        for (int j = 0; j < S.g.n; ++j)
          if (i == j || (i < j && winv.perm[i] < winv.perm[j])) tu_mask[i * S.g.n + j] = 1;
    }
    auto tu_support_ok = [&](const Mat& k) {
      int esz = mcf.esz();
      for (int i = 0; i < S.g.n; ++i)
        for (int j = 0; j < S.g.n; ++j) {
          if (tu_mask[i * S.g.n + j]) continue;
          int off = (i * S.g.n + j) * esz;
          for (int b = 0; b < esz; ++b)
            if (k[off + b]) return false;
        }
      return true;
    };

    std::vector<int> digits(kb.size(), 0);
    Mat cur = mcf.zero();
    int p = rcf.fc->p;
    int sz = mcf.size();
    while (true) {
      if (mcf.residue_invertible(cur)) {
        Mat k0 = residue_of(mcf, mc0, cur);
        Mat u0 = mc0.mul(mc0.mul(mc0.inv_adjugate(k0), c0),
                         apply_sigma(mc0, rd0, k0, S.tw, 1));
        if (in_sigma_u(mc0, u0)) {
          Mat u = mcf.mul(mcf.mul(mcf.inv(cur), c), apply_sigma(mcf, rdf, cur, S.tw, 1));
          if (in_sigma_u(mcf, u)) survivors.push_back(cur);
        }
        if (tu_support_ok(cur) && in_t_sigma_u_cap(mcf, rdf, cur)) stab.push_back(cur);
      }
      size_t i = 0;
      for (; i < digits.size(); ++i) {
        if (digits[i] + 1 < p) {
          ++digits[i];
          for (int j = 0; j < sz; ++j)
            cur[j] = static_cast<uint8_t>((cur[j] + kb[i][j]) % p);
          break;
        }
        // roll over: adding one more copy wraps the digit to zero mod p
        digits[i] = 0;
        for (int j = 0; j < sz; ++j)
          cur[j] = static_cast<uint8_t>((cur[j] + kb[i][j]) % p);
      }
      if (i == digits.size()) break;
    }
  }

  static Mat residue_of(const MatCtx& src, const MatCtx& dst0, const Mat& m) {
    Mat out = dst0.zero();
    for (int i = 0; i < src.n; ++i)
      for (int j = 0; j < src.n; ++j)
        dst0.set_entry(out, i, j, dst0.rc->from_field(src.rc->coef(src.entry(m, i, j), 0)));
    return out;
  }

  // membership of h^-1 sigma(h) in sigma(U_r) = Ad(wlift) U_r; sign factors
  // in an SL_2 lift cannot change the zero pattern or the diagonal, so a
  // permutation shuffle suffices
  bool in_sigma_u(const MatCtx& mcw, const Mat& u) const {
    Mat v = mcw.perm_conj(u, S_->tw.w.inverse().perm);
    return mat_in_subgroup(mcw, v, Sub::U);
  }

  // membership in T^sigma (U_r cap sigma(U_r)); for an element of T.(U cap sU)
  // the torus part is the plain diagonal, and a sigma-fixed diagonal over any
  // extension already lies in T^sigma
  bool in_t_sigma_u_cap(const MatCtx& mcw, const RootDatum& rdw, const Mat& k) const {
    Session& S = *S_;
    Mat d = mcw.identity();
    for (int i = 0; i < S.g.n; ++i) mcw.set_entry(d, i, i, mcw.entry(k, i, i));
    if (!mcw.rc->is_unit(mcw.det(d))) return false;
    Mat v = mcw.mul(mcw.inv(d), k);
    if (!mat_in_subgroup(mcw, v, Sub::U)) return false;
    Mat v2 = mcw.perm_conj(v, S.tw.w.inverse().perm);
    if (!mat_in_subgroup(mcw, v2, Sub::U)) return false;
    return apply_sigma(mcw, rdw, d, S.tw, 1) == d;
  }

 private:
  Session* S_;
  int m_;
  int N_;
  std::unique_ptr<RingCtx> rc_flag_;
  std::unique_ptr<MatCtx> mc_flag_;
  std::unique_ptr<RootDatum> rd_flag_;
  std::vector<Mat> flags_, flag_invs_;
  Mat wlift_;
  std::vector<ZPartition> parts_;
};

struct InducedCharacter {
  TorusChar source;
  ClassFunction chi;
  std::string provenance;  // split-ordinary | z-formula | dl-normalized
};

// Weyl elements commuting with the twist (they act on T^sigma)
inline std::vector<WeylElem> sigma_fixed_weyl(const Session& S) {
  std::vector<WeylElem> out;
  for (const auto& w : WeylElem::all(S.g.n))
    if (w.compose(S.tw.w) == S.tw.w.compose(w)) out.push_back(w);
  return out;
}

// The coset sum computes the twisted trace tr(g . sigma^N) of the induced
// virtual representation, which differs from its character by one global
// constant.  The constant is pinned at a very regular torus element, where
// the character value is the Weyl-orbit sum of theta; for a generic theta
// that value is nonzero at some such element.
inline InducedCharacter dl_character(Session& S, ZMachine& Z, const TorusChar& th) {
  auto rep = is_generic_character(*S.tower, th);
  require(rep.ge1 && rep.ge2, Err::NotGeneric, "character is not (T,G)-generic");
  std::vector<int> vreg;
  for (size_t i = 0; i < S.Ts->size(); ++i)
    if (is_very_regular(S.Ts->mc(), (*S.Ts)[i]).is_vreg) vreg.push_back((int)i);
  require(!vreg.empty(), Err::NoVeryRegularElement,
          "no very regular element in T_r^sigma at this q");

  std::vector<TorusChar> orbit;
  for (const auto& w : sigma_fixed_weyl(S)) orbit.push_back(weyl_conjugate(th, w));

  InducedCharacter out;
  out.source = th;
  out.chi = Z.character(th);
  // pin the constant where the Weyl-orbit sum is largest
  int best = -1;
  double best_abs = 0;
  cplx best_sum = 0;
  for (int t : vreg) {
    cplx s = 0;
    for (const auto& o : orbit) s += o.value(t);
    if (std::abs(s) > best_abs) {
      best_abs = std::abs(s);
      best = t;
      best_sum = s;
    }
  }
  require(best >= 0 && best_abs > 1e-9, Err::Internal,
          "Weyl-orbit sum vanishes at every very regular element");
  cplx raw = out.chi.v[S.Gs->index_of((*S.Ts)[best])];
  require(std::abs(raw) > 1e-12, Err::Internal, "coset sum vanishes at the pinning element");
  cplx rho = best_sum / raw;
  for (auto& v : out.chi.v) v *= rho;
  out.provenance = "dl-normalized";
  return out;
}

// ---------------------------------------------------------------------------
// Mackey decomposition by double cosets

struct MackeyCosetReport {
  size_t size = 0;
  bool meets_pnp = false;     // coset meets P' N(T) P
  double max_contrib = 0;     // sup over L' of the coset's contribution
  std::vector<cplx> pairing;  // <restricted contribution, theta'> per theta'
};

struct MackeyReport {
  std::vector<MackeyCosetReport> cosets;
  size_t weyl_coset_bound = 0;  // |W_{L'} \ W / W_L|
  bool vanishing_off_pnp = true;
  double worst_off_pnp = 0;
  size_t surviving = 0;  // cosets with a nonzero contribution
};

// deterministic generating set among a subgroup's elements
inline std::vector<int> subgroup_generators(const FixedGroup& G, const std::vector<int>& members) {
  std::vector<char> member_flag(G.size(), 0);
  for (int m : members) member_flag[m] = 1;
  std::vector<int> gens;
  std::vector<char> in(G.size(), 0);
  std::vector<int> reach = {G.id_index()};
  in[G.id_index()] = 1;
  for (int cand : members) {
    if (reach.size() == members.size()) break;
    if (in[cand]) continue;
    gens.push_back(cand);
    for (size_t qi = 0; qi < reach.size(); ++qi)
      for (int g : gens) {
        int nx = G.mul(reach[qi], g);
        if (!in[nx]) {
          in[nx] = 1;
          reach.push_back(nx);
        }
      }
  }
  require(reach.size() == members.size(), Err::Internal, "generator sweep incomplete");
  return gens;
}

// contribution of each (P', P) double coset to <Res_{L'} Ind_P chi, theta'>
inline MackeyReport verify_mackey(Session& S, const LeviSubgroup& L,
                                  const LeviSubgroup& Lp,
                                  const std::function<cplx(int)>& levi_val,
                                  const std::vector<std::function<cplx(int)>>& test_chars,
                                  double tol = 1e-8) {
  const FixedGroup& G = *S.Gs;
  std::vector<int> p_idx, pp_idx;
  for (size_t i = 0; i < G.size(); ++i) {
    if (L.in_parabolic(G[i])) p_idx.push_back((int)i);
    if (Lp.in_parabolic(G[i])) pp_idx.push_back((int)i);
  }
  std::vector<int> p_gens = subgroup_generators(G, p_idx);
  std::vector<int> pp_gens = subgroup_generators(G, pp_idx);

  // P' N(T) P as an index set: flood from the monomial seeds
  RootDatum rd(G.mc(), S.g.kind);
  std::vector<char> in_pnp(G.size(), 0);
  {
    std::vector<int> stack;
    for (const auto& w : WeylElem::all(S.g.n))
      for (size_t t = 0; t < S.Ts->size(); ++t) {
        Mat nt = G.mc().mul(rd.lift(w), (*S.Ts)[t]);
        if (!G.contains(nt)) continue;
        int i = G.index_of(nt);
        if (!in_pnp[i]) {
          in_pnp[i] = 1;
          stack.push_back(i);
        }
      }
    for (size_t s = 0; s < stack.size(); ++s) {
      for (int a : pp_gens) {
        int nx = G.mul(a, stack[s]);
        if (!in_pnp[nx]) {
          in_pnp[nx] = 1;
          stack.push_back(nx);
        }
      }
      for (int b : p_gens) {
        int nx = G.mul(stack[s], b);
        if (!in_pnp[nx]) {
          in_pnp[nx] = 1;
          stack.push_back(nx);
        }
      }
    }
  }

  MackeyReport rep;
  std::vector<int> coset_of(G.size(), -1);
  int ncosets = 0;
  for (size_t i = 0; i < G.size(); ++i) {
    if (coset_of[i] >= 0) continue;
    int cid = ncosets++;
    MackeyCosetReport cr;
    std::vector<int> stack = {(int)i};
    coset_of[i] = cid;
    for (size_t s = 0; s < stack.size(); ++s) {
      for (int a : pp_gens) {
        int nx = G.mul(a, stack[s]);
        if (coset_of[nx] < 0) {
          coset_of[nx] = cid;
          stack.push_back(nx);
        }
      }
      for (int b : p_gens) {
        int nx = G.mul(stack[s], b);
        if (coset_of[nx] < 0) {
          coset_of[nx] = cid;
          stack.push_back(nx);
        }
      }
    }
    cr.size = stack.size();
    cr.meets_pnp = false;
    for (int e : stack)
      if (in_pnp[e]) cr.meets_pnp = true;
    rep.cosets.push_back(cr);
  }

  // Contribution of coset c to the unipotent-summed restriction of the
  // induced character, evaluated at l' in L':
  //   R_c(l') = |P|^-1 sum_{u' in U', x in c, x^-1 l'u' x in P} chi~(x^-1 l'u' x)
  // The y = l'u' range over the opposite-ordered parabolic P' exactly once.
  std::vector<Mat> invs(G.size());
  for (size_t x = 0; x < G.size(); ++x) invs[x] = G.mc().inv(G[x]);
  std::vector<std::pair<int, int>> pp_with_levi;  // (element, L'-local of its Levi part)
  for (int y : pp_idx) pp_with_levi.push_back({y, Lp.levi_local(G[y])});

  size_t ncosets_sz = rep.cosets.size();
  std::vector<std::vector<cplx>> contrib(ncosets_sz, std::vector<cplx>(Lp.elems.size(), 0.0));
  {
    unsigned nthreads = std::min(2u, std::thread::hardware_concurrency());
    if (nthreads == 0) nthreads = 1;
    std::vector<std::vector<std::vector<cplx>>> partial(
        nthreads, std::vector<std::vector<cplx>>(ncosets_sz,
                                                 std::vector<cplx>(Lp.elems.size(), 0.0)));
    auto worker = [&](unsigned tid) {
      Mat t1 = G.mc().zero(), t2 = G.mc().zero();
      for (size_t x = tid; x < G.size(); x += nthreads) {
        for (auto& [y, lloc] : pp_with_levi) {
          G.mc().mul_into(invs[x], G[y], t1);
          G.mc().mul_into(t1, G[x], t2);
          if (!L.in_parabolic(t2)) continue;
          partial[tid][coset_of[x]][lloc] += levi_val(L.levi_local(t2));
        }
      }
    };
    std::vector<std::thread> threads;
    for (unsigned t = 0; t < nthreads; ++t) threads.emplace_back(worker, t);
    for (auto& t : threads) t.join();
    for (unsigned t = 0; t < nthreads; ++t)
      for (size_t c = 0; c < ncosets_sz; ++c)
        for (size_t l = 0; l < Lp.elems.size(); ++l) contrib[c][l] += partial[t][c][l];
  }
  for (auto& cr : rep.cosets) cr.pairing.assign(test_chars.size(), 0.0);
  for (size_t c = 0; c < ncosets_sz; ++c) {
    for (size_t l = 0; l < Lp.elems.size(); ++l) {
      cplx v = contrib[c][l] / L.psz;
      rep.cosets[c].max_contrib = std::max(rep.cosets[c].max_contrib, std::abs(v));
      for (size_t tc = 0; tc < test_chars.size(); ++tc)
        rep.cosets[c].pairing[tc] +=
            v * std::conj(test_chars[tc]((int)l)) / (double)Lp.elems.size();
    }
  }

  // Weyl double coset bound |W_{L'} \ W / W_L|
  auto wl = L.P.levi_weyl();
  auto wlp = Lp.P.levi_weyl();
  std::vector<WeylElem> all = WeylElem::all(S.g.n);
  std::vector<char> seen(all.size(), 0);
  auto windex = [&](const WeylElem& w) {
    for (size_t i = 0; i < all.size(); ++i)
      if (all[i] == w) return (int)i;
    return -1;
  };
  size_t wcosets = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    if (seen[i]) continue;
    ++wcosets;
    for (const auto& a : wlp)
      for (const auto& b : wl) seen[windex(a.compose(all[i]).compose(b))] = 1;
  }
  rep.weyl_coset_bound = wcosets;
  for (const auto& cr : rep.cosets) {
    if (cr.max_contrib >= tol) ++rep.surviving;
    if (cr.meets_pnp) continue;
    rep.worst_off_pnp = std::max(rep.worst_off_pnp, cr.max_contrib);
  }
  rep.vanishing_off_pnp = rep.worst_off_pnp < tol;
  return rep;
}

// ---------------------------------------------------------------------------
// Frobenius power proportionality

struct FrobScalarReport {
  std::vector<cplx> c_m;         // fitted constants, c_1 = 1
  std::vector<double> residual;  // relative least-squares residual per m
  bool pass = true;
};

inline FrobScalarReport frobenius_scalar_check(Session& S, const TorusChar& th, int m_max,
                                               double tol = 1e-6) {
  FrobScalarReport rep;
  std::vector<std::vector<cplx>> vecs;
  for (int m = 1; m <= m_max; ++m) {
    ZMachine Z(S, m);
    const ConjClasses& cc = S.conj_classes();
    std::vector<cplx> v;
    for (const auto& cls : cc.classes) {
      ZPartition zp = Z.z_partition(cls[0]);
      cplx val = Z.value(th, zp);
      for (size_t rep_i = 0; rep_i < cls.size(); ++rep_i) v.push_back(val);
    }
    vecs.push_back(std::move(v));
  }
  for (int m = 0; m < m_max; ++m) {
    cplx num = 0;
    double den = 0;
    for (size_t i = 0; i < vecs[0].size(); ++i) {
      num += vecs[m][i] * std::conj(vecs[0][i]);
      den += std::norm(vecs[0][i]);
    }
    cplx c = num / den;
    double res = 0, scale = 0;
    for (size_t i = 0; i < vecs[0].size(); ++i) {
      res += std::norm(vecs[m][i] - c * vecs[0][i]);
      scale += std::norm(vecs[m][i]);
    }
    rep.c_m.push_back(c);
    rep.residual.push_back(scale > 0 ? std::sqrt(res / scale) : std::sqrt(res));
    if (rep.residual.back() >= tol) rep.pass = false;
  }
  return rep;
}

}  // namespace jetchar
