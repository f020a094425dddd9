#pragma once

// R = F_{p^(f*m)}[t]/t^(r+1), the coordinate ring of level-r jet groups.
// Elements are flat byte buffers: (r+1) field coefficients of deg() bytes
// each, coefficient of t^i at block i.  R is local; x is a unit iff the
// constant coefficient is nonzero.

#include <cstdint>
#include <vector>

#include "jetchar/field.hpp"

namespace jetchar {

using Re = std::vector<uint8_t>;  // ring element, length = (r+1) * field deg

struct RingCtx {
  const FieldCtx* fc = nullptr;
  int r = 1;

  RingCtx() = default;
  RingCtx(const FieldCtx& f, int r_) : fc(&f), r(r_) {
    require(r >= 0, Err::BadInput, "level r must be >= 0");
  }

  int nlev() const { return r + 1; }
  int fdeg() const { return fc->deg(); }
  int size() const { return nlev() * fdeg(); }
  long long card() const {
    long long c = 1;
    for (int i = 0; i < nlev(); ++i) c *= fc->card();
    return c;
  }
  long long unit_count() const {
    long long c = fc->card() - 1;
    for (int i = 1; i < nlev(); ++i) c *= fc->card();
    return c;
  }

  Re zero() const { return Re(size(), 0); }
  Re one() const {
    Re a(size(), 0);
    a[0] = 1;
    return a;
  }
  Re from_field(const Fe& x) const {
    Re a(size(), 0);
    std::copy(x.begin(), x.end(), a.begin());
    return a;
  }
  // c * t^k
  Re monomial(const Fe& c, int k) const {
    require(k >= 0 && k <= r, Err::BadInput, "monomial degree out of range");
    Re a(size(), 0);
    std::copy(c.begin(), c.end(), a.begin() + k * fdeg());
    return a;
  }

  Fe coef(const Re& a, int k) const {
    return Fe(a.begin() + k * fdeg(), a.begin() + (k + 1) * fdeg());
  }
  void set_coef(Re& a, int k, const Fe& c) const {
    std::copy(c.begin(), c.end(), a.begin() + k * fdeg());
  }

  bool is_zero(const Re& a) const {
    for (auto c : a)
      if (c) return false;
    return true;
  }
  bool is_unit(const Re& a) const {
    for (int i = 0; i < fdeg(); ++i)
      if (a[i]) return true;
    return false;
  }

  Re add(const Re& a, const Re& b) const {
    Re out(size());
    int p = fc->p;
    for (int i = 0; i < size(); ++i) out[i] = static_cast<uint8_t>((a[i] + b[i]) % p);
    return out;
  }
  Re sub(const Re& a, const Re& b) const {
    Re out(size());
    int p = fc->p;
    for (int i = 0; i < size(); ++i) out[i] = static_cast<uint8_t>((a[i] + p - b[i]) % p);
    return out;
  }
  Re neg(const Re& a) const {
    Re out(size());
    int p = fc->p;
    for (int i = 0; i < size(); ++i) out[i] = static_cast<uint8_t>((p - a[i]) % p);
    return out;
  }

  Re mul(const Re& a, const Re& b) const {
    if (fdeg() == 1 && nlev() <= 8) {
      int p = fc->p, L = nlev();
      int acc[8] = {0};
      for (int u = 0; u < L; ++u) {
        if (!a[u]) continue;
        for (int v = 0; v + u < L; ++v) acc[u + v] += a[u] * b[v];
      }
      Re out(L);
      for (int l = 0; l < L; ++l) out[l] = static_cast<uint8_t>(acc[l] % p);
      return out;
    }
    Re out = zero();
    for (int i = 0; i <= r; ++i) {
      Fe ai = coef(a, i);
      if (fc->is_zero(ai)) continue;
      for (int j = 0; i + j <= r; ++j) {
        Fe bj = coef(b, j);
        if (fc->is_zero(bj)) continue;
        Fe pr = fc->mul(ai, bj);
        int off = (i + j) * fdeg();
        for (int k = 0; k < fdeg(); ++k)
          out[off + k] = static_cast<uint8_t>((out[off + k] + pr[k]) % fc->p);
      }
    }
    return out;
  }

  // triangular solve for the inverse of a unit, level by level
  Re inv(const Re& a) const {
    require(is_unit(a), Err::NotAUnit, "ring inverse of a non-unit");
    Re out = zero();
    Fe a0i = fc->inv(coef(a, 0));
    set_coef(out, 0, a0i);
    for (int k = 1; k <= r; ++k) {
      Fe acc = fc->zero();
      for (int i = 1; i <= k; ++i) acc = fc->add(acc, fc->mul(coef(a, i), coef(out, k - i)));
      set_coef(out, k, fc->neg(fc->mul(a0i, acc)));
    }
    return out;
  }

  // entrywise q-power Frobenius, q = p^f
  Re frob_q(const Re& a, long long k) const {
    Re out(size());
    for (int i = 0; i <= r; ++i) {
      Fe c = fc->frob_q(coef(a, i), k);
      std::copy(c.begin(), c.end(), out.begin() + i * fdeg());
    }
    return out;
  }

  Re pow(const Re& a, long long k) const {
    Re acc = one(), base = a;
    if (k < 0) {
      base = inv(a);
      k = -k;
    }
    while (k) {
      if (k & 1) acc = mul(acc, base);
      base = mul(base, base);
      k >>= 1;
    }
    return acc;
  }

  // truncate to level s (zero out t^i for i > s); reduction map R -> R_s kept
  // in the same byte layout
  Re reduce_mod(const Re& a, int s) const {
    Re out = a;
    for (int i = s + 1; i <= r; ++i)
      std::fill(out.begin() + i * fdeg(), out.begin() + (i + 1) * fdeg(), 0);
    return out;
  }

  // enumerate all ring elements in lexicographic coefficient order
  template <typename F>
  void for_each(F&& fn) const {
    Re cur = zero();
    int p = fc->p;
    while (true) {
      fn(cur);
      int i = 0;
      for (; i < size(); ++i) {
        if (cur[i] + 1 < p) {
          ++cur[i];
          break;
        }
        cur[i] = 0;
      }
      if (i == size()) break;
    }
  }
};

}  // namespace jetchar
