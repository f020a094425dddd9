#include <catch2/catch_amalgamated.hpp>

#include "jetchar/induction.hpp"

using namespace jetchar;

TEST_CASE("abelian structures of the standard tori") {
  // split GL_2, q=3, r=1: order 36, primary structure (Z/2)^2 x (Z/3)^2
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  REQUIRE(S.Ts->size() == 36);
  std::multiset<long long> orders(S.Tst->orders.begin(), S.Tst->orders.end());
  REQUIRE(orders == std::multiset<long long>{2, 2, 3, 3});

  // swap-twisted, q=2, r=1: order 12, structure Z/3 x Z/2 x Z/2
  Session S2(GroupKind::GL, 2, 2, 1, 1, FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1)));
  REQUIRE(S2.Ts->size() == 12);
  std::multiset<long long> o2(S2.Tst->orders.begin(), S2.Tst->orders.end());
  REQUIRE(o2 == std::multiset<long long>{2, 2, 3});

  // trivial group edge: GL_1 over F_2 at r = 0 has a single unit
  FieldTower t2(2, 1);
  GroupContext g1;
  g1.kind = GroupKind::GL;
  g1.n = 1;
  g1.r = 0;
  g1.fc = &t2.ctx(1);
  FixedGroup triv = torus_fixed_group(g1, t2, 1, FrobTwist::split(1));
  REQUIRE(triv.size() == 1);
  AbelianStructure st = abelian_structure(triv);
  REQUIRE(st.ngens() == 0);
  REQUIRE(characters(st).size() == 1);
}

TEST_CASE("character table orthogonality, rows and columns") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  auto chars = S.theta;
  size_t n = S.Ts->size();
  REQUIRE(chars.size() == n);
  for (size_t a = 0; a < chars.size(); ++a)
    for (size_t b = 0; b < chars.size(); ++b) {
      cplx acc = 0;
      for (size_t i = 0; i < n; ++i) acc += chars[a].value((int)i) * std::conj(chars[b].value((int)i));
      acc /= (double)n;
      REQUIRE(std::abs(acc - (a == b ? cplx(1) : cplx(0))) < 1e-10);
    }
  // column orthogonality: sum over characters vanishes off the identity
  for (size_t i = 0; i < n; ++i) {
    cplx acc = 0;
    for (auto& ch : chars) acc += ch.value((int)i);
    if ((int)i == S.Ts->id_index())
      REQUIRE(std::abs(acc - cplx((double)n)) < 1e-9);
    else
      REQUIRE(std::abs(acc) < 1e-9);
  }
}

TEST_CASE("Weyl conjugation is a group action and swaps split coordinates") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  WeylElem s = WeylElem::transposition(2, 0, 1);
  for (auto& th : S.theta) {
    REQUIRE(weyl_conjugate(th, WeylElem::identity(2)) == th);
    TorusChar tw1 = weyl_conjugate(weyl_conjugate(th, s), s);
    REQUIRE(tw1 == th);
  }
  // split swap exchanges the two unit-group coordinates: compare evaluation
  // tables directly
  for (auto& th : S.theta) {
    TorusChar ths = weyl_conjugate(th, s);
    for (size_t t = 0; t < S.Ts->size(); ++t) {
      const Mat& d = (*S.Ts)[t];
      Mat swapped = S.Ts->mc().perm_conj(d, s.perm);
      REQUIRE(std::abs(ths.value((int)t) - th.value(S.Ts->index_of(swapped))) < 1e-12);
    }
  }
}

TEST_CASE("inner products: trivial, regular representation, Mackey norm count") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  ClassFunction one(*S.Gs, 1.0);
  REQUIRE(std::abs(inner_product(one, one) - cplx(1)) < 1e-12);
  ClassFunction reg(*S.Gs, 0.0);
  reg.v[S.Gs->id_index()] = (double)S.Gs->size();
  REQUIRE(std::abs(inner_product(reg, one) - cplx(1)) < 1e-12);
  // domain mismatch raises
  Session S2(GroupKind::GL, 2, 2, 1, 1, FrobTwist::split(2));
  ClassFunction other(*S2.Gs, 1.0);
  REQUIRE_THROWS_AS(inner_product(one, other), Error);

  // <Ind theta, Ind theta> = #{w in W : theta^w = theta} for generic theta:
  // the kernel double cosets contribute nothing there
  WeylElem s = WeylElem::transposition(2, 0, 1);
  for (auto& th : S.theta) {
    if (depth(th) != 1) continue;
    auto rep = is_generic_character(*S.tower, th);
    if (!(rep.ge1 && rep.ge2)) continue;
    ClassFunction chi = induce_split(S, th);
    long long stab = weyl_conjugate(th, s) == th ? 2 : 1;
    REQUIRE(std::abs(inner_product(chi, chi) - cplx((double)stab)) < 1e-9);
  }
}

TEST_CASE("depth: the exhaustive split at q=3 and the filtration property") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  // exhaustive restriction oracle: depth 0 iff trivial on the level-1 part
  auto lvl1 = congruence_indices(*S.Ts, 1);
  REQUIRE(lvl1.size() == 9);
  int d0 = 0, d1 = 0;
  for (auto& th : S.theta) {
    bool triv = true;
    for (int i : lvl1)
      if (!th.is_trivial_on(i)) triv = false;
    int d = depth(th);
    REQUIRE(d == (triv ? 0 : 1));
    (d == 0 ? d0 : d1)++;
  }
  REQUIRE(d0 == 4);   // = |T_0^sigma| = (q-1)^2
  REQUIRE(d1 == 32);
  // trivial character has depth 0; a character supported on the level-r part
  // has depth r by construction
  REQUIRE(depth(S.theta[0]) == 0);
  // restriction to the congruence subgroup is again a character: evaluate
  // homomorphism property on the subgroup
  for (auto& th : S.theta) {
    for (int a : lvl1)
      for (int b : lvl1) {
        int ab = S.Ts->mul(a, b);
        long long N = th.st->exponent;
        REQUIRE((th.angle(a) + th.angle(b)) % N == th.angle(ab));
      }
  }
}

TEST_CASE("conjugacy classes partition fixed groups") {
  Session S(GroupKind::GL, 2, 2, 1, 1, FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1)));
  const ConjClasses& cc = S.conj_classes();
  size_t total = 0;
  for (const auto& cls : cc.classes) total += cls.size();
  REQUIRE(total == S.Gs->size());
  // class function property: z-characters are constant on classes by
  // construction; check conjugation-invariance directly on a sample
  ZMachine Z(S);
  ClassFunction chi = Z.character(S.theta[3]);
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    int a = (int)(rng() % S.Gs->size());
    int x = (int)(rng() % S.Gs->size());
    int conj = S.Gs->mul(S.Gs->mul(x, a), S.Gs->inv(x));
    REQUIRE(std::abs(chi.v[a] - chi.v[conj]) < 1e-9);
  }
}
