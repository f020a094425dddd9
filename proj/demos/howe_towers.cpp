// Factorizes every character of the split torus of GL_2(F_3[t]/t^2) and
// prints the tower shapes: Levi partitions, depths, and verification status.

#include <cstdio>

#include "jetchar/jetchar.hpp"

using namespace jetchar;

int main() {
  Session S(GroupKind::GL, 2, 3, 1, 1, FrobTwist::split(2));
  HoweCtx HC(S);
  for (size_t i = 0; i < S.theta.size(); ++i) {
    HoweTower tw = factorize(HC, S.theta[i]);
    auto chk = verify_factorization(HC, tw, S.theta[i]);
    std::printf("theta%-3zu depth %d  d=%d  depths:", i, depth(S.theta[i]), tw.d());
    for (int d : tw.depths) std::printf(" %d", d);
    std::printf("  levis:");
    for (auto& L : tw.levis) {
      std::printf(" [");
      for (int b : L.blocks) std::printf("%d", b);
      std::printf("]");
    }
    std::printf("  %s\n", chk.pass() ? "verified" : "FAILED");
  }
  return 0;
}
