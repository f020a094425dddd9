#include <catch2/catch_amalgamated.hpp>

#include "jetchar/charfn.hpp"

using namespace jetchar;

namespace {
GroupContext make_ctx(GroupKind k, int n, int r, const FieldCtx& fc) {
  GroupContext g;
  g.kind = k;
  g.n = n;
  g.r = r;
  g.fc = &fc;
  return g;
}
}  // namespace

TEST_CASE("apply_sigma: split rational fix, swap action, sigma^n trivial") {
  FieldTower tw(2, 1);
  GroupContext g = make_ctx(GroupKind::GL, 2, 1, tw.ctx(1));
  RingCtx rc(tw.ctx(2), 1);
  MatCtx mc(rc, 2);
  RootDatum rd(mc, GroupKind::GL);
  FrobTwist split = FrobTwist::split(2);
  FrobTwist swap = FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1));
  REQUIRE(swap.n == 2);

  // split twist fixes elements with prime-field entries
  Mat a = mc.identity();
  mc.set_entry(a, 0, 1, rc.one());
  REQUIRE(apply_sigma(mc, rd, a, split, 1) == a);

  // swap on diag(x, y) -> diag(y^q, x^q)
  const FieldCtx& F4 = tw.ctx(2);
  Fe om = F4.zero();
  om[1] = 1;
  Mat d = mc.identity();
  mc.set_entry(d, 0, 0, rc.from_field(om));
  Mat img = apply_sigma(mc, rd, d, swap, 1);
  REQUIRE(mc.entry(img, 1, 1) == rc.from_field(F4.frob_q(om, 1)));
  REQUIRE(mc.entry(img, 0, 0) == rc.one());

  // sigma^n on F_{q^n}-points is trivial; sigma^(k+k') composes
  for (long long trial = 0; trial < 10; ++trial) {
    Mat m = mc.zero();
    std::mt19937_64 rng(trial);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Re e = rc.zero();
        for (int lev = 0; lev <= 1; ++lev) rc.set_coef(e, lev, F4.unpack(rng() % 4));
        mc.set_entry(m, i, j, e);
      }
    REQUIRE(apply_sigma(mc, rd, m, swap, 2) == m);
    REQUIRE(apply_sigma(mc, rd, apply_sigma(mc, rd, m, swap, 1), swap, 1) ==
            apply_sigma(mc, rd, m, swap, 2));
  }
}

TEST_CASE("fixed groups: orders, closure, torus order formula") {
  // split GL_2 q=2 r=1: order 96 by the kernel route
  FieldTower t2(2, 1);
  GroupContext g2 = make_ctx(GroupKind::GL, 2, 1, t2.ctx(1));
  FixedGroup G96 = fixed_group(g2, t2, 1, FrobTwist::split(2), 1);
  REQUIRE(G96.size() == 96);
  // closure under product and inverse, exhaustive
  for (size_t a = 0; a < G96.size(); ++a) {
    REQUIRE(G96.contains(G96.mc().inv(G96[a])));
    for (size_t b = 0; b < G96.size(); ++b)
      REQUIRE(G96.contains(G96.mc().mul(G96[a], G96[b])));
  }
  // every element satisfies its defining equation
  RootDatum rd(G96.mc(), GroupKind::GL);
  for (size_t a = 0; a < G96.size(); ++a)
    REQUIRE(apply_sigma(G96.mc(), rd, G96[a], G96.tw, 1) == G96[a]);

  // swap-twisted torus: (F_4[t]/t^2)^x of order 12
  FrobTwist swap = FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1));
  FixedGroup T12 = torus_fixed_group(g2, t2, 2, swap);
  REQUIRE(T12.size() == 12);

  // |T_r^sigma| = prod over cycles (q^c - 1) q^(c r), n = 2, 3 and q = 2, 3
  for (int p : {2, 3}) {
    FieldTower tw(p, 1);
    for (int n : {2, 3}) {
      for (const auto& w : WeylElem::all(n)) {
        FrobTwist twist = FrobTwist::from_weyl(w);
        GroupContext g = make_ctx(GroupKind::GL, n, 1, tw.ctx(1));
        FixedGroup T = torus_fixed_group(g, tw, twist.n, twist);
        long long expect = 1;
        std::vector<char> seen(n, 0);
        for (int i = 0; i < n; ++i) {
          if (seen[i]) continue;
          int c = 0, j = i;
          while (!seen[j]) {
            seen[j] = 1;
            j = w.perm[j];
            ++c;
          }
          long long qc = 1;
          for (int k = 0; k < c; ++k) qc *= p;
          expect *= (qc - 1) * qc;  // (q^c - 1) q^(c r), r = 1
        }
        REQUIRE((long long)T.size() == expect);
      }
    }
  }

  // any twist with k = ord(tw) * m gives the full group of F_{q^k}-points
  FixedGroup full = fixed_group(g2, t2, 2, swap, 2, std::nullopt, 1 << 26);
  REQUIRE(full.size() == 46080);  // |GL_2(F_4[t]/t^2)|
}

TEST_CASE("twisted Lang solver: substitution contract and torsor structure") {
  FieldTower t2(2, 1);
  GroupContext g = make_ctx(GroupKind::GL, 2, 1, t2.ctx(1));
  FrobTwist swap = FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1));
  FixedGroup Gs = fixed_group(g, t2, 2, swap, 1);
  // identity: x = identity is a valid solution of sigma^k(x) = x
  LangSolution s0 = solve_twisted_lang(g, t2, 2, Gs.mc().identity(), swap, 2);
  (void)s0;  // substitution check is built into the solver
  // random fixed g: substitution holds (solver-internal), torsor property:
  // x k is again a solution exactly for k in the fixed group of sigma^k
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 4; ++trial) {
    int gi = (int)(rng() % Gs.size());
    LangSolution sol = solve_twisted_lang(g, t2, 2, Gs[gi], swap, 2, std::nullopt, trial);
    RingCtx rc(t2.ctx(sol.working_m), g.r);
    MatCtx mc(rc, 2);
    RootDatum rd(mc, GroupKind::GL);
    Mat G_up = mat_change_ctx(t2, g, Gs[gi], 2, sol.working_m);
    int hits = 0;
    for (int sample = 0; sample < 24; ++sample) {
      // translate by a random rational element of the sigma^2-fixed form
      // (entries over F_4 embedded up): rational translates that stay in the
      // fixed group keep the equation; others must break it
      Mat k = mat_change_ctx(t2, g, Gs[rng() % Gs.size()], 2, sol.working_m);
      Mat cand = mc.mul(sol.x, k);
      bool solves = apply_sigma(mc, rd, cand, swap, 2) == mc.mul(G_up, cand);
      bool in_fix = apply_sigma(mc, rd, k, swap, 2) == k;
      REQUIRE(solves == in_fix);
      if (solves) ++hits;
    }
    REQUIRE(hits > 0);  // at least the sigma^2-rational translates hit
  }
}

TEST_CASE("very regular detection") {
  FieldTower t3(3, 1);
  RingCtx rc(t3.ctx(1), 1);
  MatCtx mc(rc, 2);
  // identity: false with a root witness
  auto rep1 = is_very_regular(mc, mc.identity());
  REQUIRE_FALSE(rep1.is_vreg);
  REQUIRE(rep1.witness.find("alpha") != std::string::npos);
  // diag(1, 2): true for any lift
  Mat d = mc.identity();
  mc.set_entry(d, 1, 1, rc.from_field(t3.ctx(1).from_int(2)));
  Re e00 = mc.entry(d, 0, 0);
  rc.set_coef(e00, 1, t3.ctx(1).one());  // perturb the lift above the reduction
  mc.set_entry(d, 0, 0, e00);
  REQUIRE(is_very_regular(mc, d).is_vreg);

  // exhaustive q=3: the very regular locus is the full preimage of the
  // regular semisimple locus; discriminant oracle tr^2 - 4 det != 0 (p odd)
  GroupContext g = make_ctx(GroupKind::GL, 2, 1, t3.ctx(1));
  GroupTable G(g, t3, 1);
  G.enumerate();
  const FieldCtx& fc = t3.ctx(1);
  for (size_t i = 0; i < G.size(); ++i) {
    Mat red = G.mc().reduce_mod(G[i], 0);
    Fe tr = fc.add(rc.coef(G.mc().entry(red, 0, 0), 0), rc.coef(G.mc().entry(red, 1, 1), 0));
    Fe det = fc.sub(fc.mul(rc.coef(G.mc().entry(red, 0, 0), 0), rc.coef(G.mc().entry(red, 1, 1), 0)),
                    fc.mul(rc.coef(G.mc().entry(red, 0, 1), 0), rc.coef(G.mc().entry(red, 1, 0), 0)));
    Fe disc = fc.sub(fc.mul(tr, tr), fc.scale(det, 4));
    bool oracle = !fc.is_zero(disc);
    REQUIRE(is_very_regular(G.mc(), G[i]).is_vreg == oracle);
    // and the lift-independence: same verdict as the reduction's
    REQUIRE(is_very_regular(G.mc(), G[i]).is_vreg == is_very_regular(G.mc(), red).is_vreg);
  }

  // swap-twisted torus at q=2: the F_4-part distinguishes
  FieldTower t2(2, 1);
  GroupContext g2 = make_ctx(GroupKind::GL, 2, 1, t2.ctx(1));
  FrobTwist swap = FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1));
  FixedGroup T = torus_fixed_group(g2, t2, 2, swap);
  const FieldCtx& F4 = t2.ctx(2);
  int vreg_count = 0;
  for (size_t i = 0; i < T.size(); ++i) {
    Fe a0 = T.rc().coef(T.mc().entry(T[i], 0, 0), 0);
    bool in_f2 = F4.frob_q(a0, 1) == a0;
    REQUIRE(is_very_regular(T.mc(), T[i]).is_vreg == !in_f2);
    if (!in_f2) ++vreg_count;
  }
  REQUIRE(vreg_count == 8);  // omega-part: (4 - 2) residue choices * 4 lifts
}
