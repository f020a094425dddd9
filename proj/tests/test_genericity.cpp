#include <catch2/catch_amalgamated.hpp>

#include "jetchar/induction.hpp"

using namespace jetchar;

TEST_CASE("coefficient extraction and rebuild round trip, split q=3") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  const FieldCtx& fc = *S.Ts->rc().fc;
  auto cycles = twist_cycles(S.tw.w);
  for (auto& th : S.theta) {
    if (depth(th) != 1) continue;
    GenericElement X = extract_generic_element(*S.tower, th, 1);
    // rebuild the level-1 restriction from X and compare on every element
    for (long long a = 0; a < 3; ++a)
      for (long long b = 0; b < 3; ++b) {
        std::vector<Fe> heads = {fc.from_int(a), fc.from_int(b)};
        Mat e = level_elem_from_heads(*S.Ts, 1, cycles, heads);
        Fe pair = fc.add(fc.mul(X.c[0], fc.from_int(a)), fc.mul(X.c[1], fc.from_int(b)));
        long long want = S.tower->ctx(1).trace_abs(pair);
        REQUIRE(th.angle(S.Ts->index_of(e)) * 3 == want * th.st->exponent);
      }
  }
  // depth mismatch raises
  REQUIRE_THROWS_AS(extract_generic_element(*S.tower, S.theta[0], 1), Error);
}

TEST_CASE("Lie-level genericity reports") {
  FieldCtx f3(3, 1, 1);
  // X = (c, c): ge1 fails for L = T
  GenericElement X;
  X.level = 1;
  X.c = {f3.from_int(1), f3.from_int(1)};
  auto r1 = is_generic(f3, X, StdParabolic::borel(2));
  REQUIRE_FALSE(r1.ge1);
  REQUIRE_FALSE(r1.ge2);
  REQUIRE(r1.type_a_coincide);
  // X = (c1, c2) distinct, L = T: both hold
  X.c = {f3.from_int(1), f3.from_int(2)};
  auto r2 = is_generic(f3, X, StdParabolic::borel(2));
  REQUIRE(r2.ge1);
  REQUIRE(r2.ge2);
  // GL_3, L = GL_2 x GL_1, X = (c, c, c') with c != c'
  FieldCtx f2(2, 1, 1);
  GenericElement Y;
  Y.level = 1;
  Y.c = {f2.from_int(1), f2.from_int(1), f2.from_int(0)};
  auto r3 = is_generic(f2, Y, StdParabolic::from_composition({2, 1}));
  REQUIRE(r3.ge1);
  REQUIRE(r3.ge2);  // stabilizer is exactly the block S_2
  auto r4 = is_generic(f2, Y, StdParabolic::borel(3));
  REQUIRE_FALSE(r4.ge1);
  REQUIRE_FALSE(r4.ge2);
}

TEST_CASE("character-level genericity, split q=3") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  int n_generic = 0;
  for (auto& th : S.theta) {
    if (depth(th) != 1) continue;
    auto rep = is_generic_character(*S.tower, th);
    REQUIRE(rep.type_a_coincide);  // ge1 <=> ge2 for GL_n with L = T
    GenericElement X = extract_generic_element(*S.tower, th, 1);
    bool distinct = !(X.c[0] == X.c[1]);
    REQUIRE(rep.ge1 == distinct);
    if (rep.ge1 && rep.ge2) ++n_generic;
  }
  REQUIRE(n_generic == 24);  // 6 distinct ordered coefficient pairs x 4 depth-0 parts
  // det-pullback characters are never generic: X = (c, c)
  // trivial character fails the depth precondition
  REQUIRE_THROWS_AS(is_generic_character(*S.tower, S.theta[0]), Error);
}

TEST_CASE("character-level genericity, swap twist q=2") {
  Session S(GroupKind::GL, 2, 2, 1, 1, FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1)));
  int n_generic = 0, n_depth1 = 0;
  for (auto& th : S.theta) {
    if (depth(th) != 1) continue;
    ++n_depth1;
    auto rep = is_generic_character(*S.tower, th);
    if (rep.ge1 && rep.ge2) ++n_generic;
    REQUIRE(rep.type_a_coincide);
  }
  REQUIRE(n_depth1 == 9);
  REQUIRE(n_generic == 6);  // coefficient in F_4 with nonzero trace, 3 depth-0 parts
}

TEST_CASE("genericity is Weyl-equivariant") {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  WeylElem s = WeylElem::transposition(2, 0, 1);
  for (auto& th : S.theta) {
    if (depth(th) != 1) continue;
    auto a = is_generic_character(*S.tower, th);
    auto b = is_generic_character(*S.tower, weyl_conjugate(th, s));
    REQUIRE(a.ge1 == b.ge1);
    REQUIRE(a.ge2 == b.ge2);
  }
}

TEST_CASE("generic datum structure validation") {
  GenericDatum d;
  d.tw = FrobTwist::split(3);
  d.levis = {StdParabolic::borel(3), StdParabolic::from_composition({2, 1}),
             StdParabolic::full(3)};
  d.depths = {1, 2, 2};
  REQUIRE_NOTHROW(d.validate(3, 2));
  // non-refining tower rejected
  GenericDatum bad = d;
  bad.levis[0] = StdParabolic::from_composition({1, 2});
  REQUIRE_THROWS_AS(bad.validate(3, 2), Error);
  // non-increasing depths rejected
  GenericDatum bad2 = d;
  bad2.depths = {2, 1, 2};
  REQUIRE_THROWS_AS(bad2.validate(3, 2), Error);
}
