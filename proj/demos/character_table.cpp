// Prints the induced-character table of the swap-twisted GL_2 over
// F_2[t]/t^2: one row per generic torus character, one column per conjugacy
// class, values normalized at a very regular element.

#include <cstdio>

#include "jetchar/jetchar.hpp"

using namespace jetchar;

int main() {
  Session S(GroupKind::GL, 2, 2, 1, 1, FrobTwist::from_weyl(WeylElem::transposition(2, 0, 1)));
  ZMachine Z(S);
  const ConjClasses& cc = S.conj_classes();
  std::printf("group order %zu, torus order %zu, %zu classes\n\n", S.Gs->size(), S.Ts->size(),
              cc.classes.size());
  std::printf("%8s", "class:");
  for (size_t c = 0; c < cc.classes.size(); ++c) std::printf(" %10zu", c);
  std::printf("\n%8s", "size:");
  for (auto& cls : cc.classes) std::printf(" %10zu", cls.size());
  std::printf("\n\n");
  for (size_t i = 0; i < S.theta.size(); ++i) {
    if (depth(S.theta[i]) != 1) continue;
    auto rep = is_generic_character(*S.tower, S.theta[i]);
    if (!(rep.ge1 && rep.ge2)) continue;
    InducedCharacter dl = dl_character(S, Z, S.theta[i]);
    std::printf("theta%-3zu", i);
    for (auto& cls : cc.classes) {
      cplx v = dl.chi.v[cls[0]];
      if (std::abs(v.imag()) < 1e-9)
        std::printf(" %10.3f", v.real());
      else
        std::printf(" %5.2f%+5.2fi", v.real(), v.imag());
    }
    std::printf("\n");
  }
  return 0;
}
