#pragma once

// Exact arithmetic for F_{p^(f*m)}: q = p^f is the base field size, m the
// working extension multiplier.  Elements are coefficient vectors in the
// polynomial basis modulo a deterministically chosen irreducible.  Contexts
// for different m over the same (p, f) form a tower with cached embeddings.

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "jetchar/error.hpp"

namespace jetchar {

using Fe = std::vector<uint8_t>;  // field element, length = ctx.deg()

namespace detail {

inline uint8_t fp_inv(int p, int a) {
  a %= p;
  require(a != 0, Err::NotAUnit, "inverse of 0 in F_p");
  int t = 1, x = a;
  // a^(p-2) by square-and-multiply
  int e = p - 2;
  while (e) {
    if (e & 1) t = (t * x) % p;
    x = (x * x) % p;
    e >>= 1;
  }
  return static_cast<uint8_t>(t);
}

// polynomial helpers over F_p, coefficient vectors lowest degree first
inline int poly_deg(const std::vector<uint8_t>& a) {
  for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i)
    if (a[i]) return i;
  return -1;
}

inline std::vector<uint8_t> poly_mulmod(int p, const std::vector<uint8_t>& a,
                                        const std::vector<uint8_t>& b,
                                        const std::vector<uint8_t>& mod) {
  int e = static_cast<int>(mod.size()) - 1;
  std::vector<int> acc(2 * e - 1, 0);
  for (int i = 0; i < e; ++i) {
    if (i >= (int)a.size() || !a[i]) continue;
    int ai = a[i];
    for (int j = 0; j < e; ++j) {
      if (j >= (int)b.size() || !b[j]) continue;
      acc[i + j] += ai * b[j];
    }
  }
  // reduce mod the monic modulus
  for (int i = 2 * e - 2; i >= e; --i) {
    int c = acc[i] % p;
    if (!c) continue;
    for (int j = 0; j < e; ++j) acc[i - e + j] = (acc[i - e + j] + (p - mod[j]) * c) % p;
    acc[i] = 0;
  }
  std::vector<uint8_t> out(e);
  for (int i = 0; i < e; ++i) out[i] = static_cast<uint8_t>(acc[i] % p);
  return out;
}

inline std::vector<uint8_t> poly_powmod_p(int p, std::vector<uint8_t> base, long long k_exp_p,
                                          const std::vector<uint8_t>& mod) {
  // base^(p^k_exp_p) mod `mod` via iterated p-th powers
  for (long long i = 0; i < k_exp_p; ++i) {
    std::vector<uint8_t> r = base;
    std::vector<uint8_t> acc(mod.size() - 1, 0);
    acc[0] = 1;
    int e = p;
    while (e) {  // base^p
      if (e & 1) acc = poly_mulmod(p, acc, r, mod);
      r = poly_mulmod(p, r, r, mod);
      e >>= 1;
    }
    base = acc;
  }
  return base;
}

inline std::vector<uint8_t> poly_gcd(int p, std::vector<uint8_t> a, std::vector<uint8_t> b) {
  while (poly_deg(b) >= 0) {
    // a mod b
    int db = poly_deg(b);
    uint8_t lead_inv = fp_inv(p, b[db]);
    while (poly_deg(a) >= db) {
      int da = poly_deg(a);
      int c = (a[da] * lead_inv) % p;
      for (int i = 0; i <= db; ++i) {
        int idx = da - db + i;
        a[idx] = static_cast<uint8_t>((a[idx] + (p - b[i]) * c % p) % p);
      }
    }
    std::swap(a, b);
  }
  return a;
}

inline bool is_irreducible(int p, const std::vector<uint8_t>& mod) {
  int e = static_cast<int>(mod.size()) - 1;
  if (e < 1 || mod[e] != 1) return false;
  // x^(p^e) == x mod f
  std::vector<uint8_t> x(e, 0);
  if (e == 1) {
    return true;  // monic linear
  }
  x[1] = 1;
  std::vector<uint8_t> xq = poly_powmod_p(p, x, e, mod);
  if (xq != x) return false;
  // gcd(x^(p^(e/l)) - x, f) == 1 for prime divisors l of e
  int n = e;
  for (int l = 2; l * l <= n; ++l) {
    if (n % l) continue;
    while (n % l == 0) n /= l;
    std::vector<uint8_t> y = poly_powmod_p(p, x, e / l, mod);
    // y - x
    std::vector<uint8_t> d = y;
    d[1] = static_cast<uint8_t>((d[1] + p - 1) % p);
    if (poly_deg(poly_gcd(p, d, mod)) != 0) return false;
  }
  if (n > 1) {
    std::vector<uint8_t> y = poly_powmod_p(p, x, e / n, mod);
    std::vector<uint8_t> d = y;
    d[1] = static_cast<uint8_t>((d[1] + p - 1) % p);
    if (poly_deg(poly_gcd(p, d, mod)) != 0) return false;
  }
  return true;
}

// First monic irreducible of degree e over F_p, scanning low coefficients as
// a base-p counter.  Deterministic, so encodings are reproducible across runs.
inline std::vector<uint8_t> find_irreducible(int p, int e) {
  std::vector<uint8_t> mod(e + 1, 0);
  mod[e] = 1;
  for (long long ctr = 0;; ++ctr) {
    long long c = ctr;
    for (int i = 0; i < e; ++i) {
      mod[i] = static_cast<uint8_t>(c % p);
      c /= p;
    }
    require(c == 0, Err::Internal, "irreducible scan exhausted");
    if (mod[0] == 0) continue;  // must have nonzero constant term (e >= 1)
    if (is_irreducible(p, mod)) return mod;
  }
}

}  // namespace detail

struct FieldCtx {
  int p = 2;  // prime
  int f = 1;  // base extension degree: q = p^f
  int m = 1;  // working extension multiplier
  std::vector<uint8_t> modulus;  // monic, degree f*m

  int deg() const { return f * m; }
  long long card() const {
    long long c = 1;
    for (int i = 0; i < deg(); ++i) c *= p;
    return c;
  }

  // p-power Frobenius as an F_p-linear map, column j = x^(j*p) mod modulus
  std::vector<Fe> frob_cols;
  std::vector<uint8_t> trace_row;  // absolute trace to F_p of basis elements

  // lookup tables when the field is small
  bool small = false;
  std::vector<uint16_t> mul_tab, inv_tab;

  FieldCtx() = default;
  FieldCtx(int p_, int f_, int m_) : p(p_), f(f_), m(m_) {
    require(p >= 2, Err::BadInput, "p must be >= 2");
    for (int d = 2; d * d <= p; ++d) require(p % d, Err::BadInput, "p must be prime");
    modulus = detail::find_irreducible(p, deg());
    init();
  }

  Fe zero() const { return Fe(deg(), 0); }
  Fe one() const {
    Fe a(deg(), 0);
    a[0] = 1;
    return a;
  }
  Fe from_int(long long v) const {
    Fe a(deg(), 0);
    long long r = ((v % p) + p) % p;
    a[0] = static_cast<uint8_t>(r);
    return a;
  }
  bool is_zero(const Fe& a) const {
    for (auto c : a)
      if (c) return false;
    return true;
  }

  Fe add(const Fe& a, const Fe& b) const {
    Fe r(deg());
    for (int i = 0; i < deg(); ++i) r[i] = static_cast<uint8_t>((a[i] + b[i]) % p);
    return r;
  }
  Fe sub(const Fe& a, const Fe& b) const {
    Fe r(deg());
    for (int i = 0; i < deg(); ++i) r[i] = static_cast<uint8_t>((a[i] + p - b[i]) % p);
    return r;
  }
  Fe neg(const Fe& a) const {
    Fe r(deg());
    for (int i = 0; i < deg(); ++i) r[i] = static_cast<uint8_t>((p - a[i]) % p);
    return r;
  }
  Fe scale(const Fe& a, int c) const {
    Fe r(deg());
    c = ((c % p) + p) % p;
    for (int i = 0; i < deg(); ++i) r[i] = static_cast<uint8_t>((a[i] * c) % p);
    return r;
  }

  Fe mul(const Fe& a, const Fe& b) const {
    if (small) return unpack(mul_tab[pack(a) * card() + pack(b)]);
    return detail::poly_mulmod(p, a, b, modulus);
  }

  Fe inv(const Fe& a) const {
    require(!is_zero(a), Err::NotAUnit, "field inverse of 0");
    if (small) return unpack(inv_tab[pack(a)]);
    // a^(p^e - 2) would be slow for big e; use extended Euclid instead
    return euclid_inv(a);
  }

  Fe pow(const Fe& a, long long k) const {
    Fe acc = one(), base = a;
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

  // a^(p) via the precomputed linear map
  Fe frob_p(const Fe& a) const {
    Fe r(deg(), 0);
    for (int j = 0; j < deg(); ++j) {
      if (!a[j]) continue;
      int c = a[j];
      const Fe& col = frob_cols[j];
      for (int i = 0; i < deg(); ++i) r[i] = static_cast<uint8_t>((r[i] + c * col[i]) % p);
    }
    return r;
  }

  // a^(q^k), q = p^f; p-power applied (f*k mod deg) times since x^(p^deg) = x
  Fe frob_q(const Fe& a, long long k) const {
    long long cnt = (f * (((k % deg()) + deg()) % deg())) % deg();
    Fe r = a;
    for (long long i = 0; i < cnt; ++i) r = frob_p(r);
    return r;
  }

  // absolute trace to F_p
  int trace_abs(const Fe& a) const {
    int t = 0;
    for (int j = 0; j < deg(); ++j) t += trace_row[j] * a[j];
    return t % p;
  }

  long long pack(const Fe& a) const {
    long long v = 0;
    for (int i = deg() - 1; i >= 0; --i) v = v * p + a[i];
    return v;
  }
  Fe unpack(long long v) const {
    Fe a(deg());
    for (int i = 0; i < deg(); ++i) {
      a[i] = static_cast<uint8_t>(v % p);
      v /= p;
    }
    return a;
  }

 private:
  Fe euclid_inv(const Fe& a) const {
    // extended Euclid in F_p[x] for gcd(a, modulus) = 1
    std::vector<uint8_t> r0(modulus), r1(a);
    r1.resize(modulus.size(), 0);
    std::vector<uint8_t> s0(modulus.size(), 0), s1(modulus.size(), 0);
    s1[0] = 1;
    while (true) {
      int d1 = detail::poly_deg(r1);
      require(d1 >= 0, Err::NotAUnit, "element not invertible");
      if (d1 == 0) break;
      int d0 = detail::poly_deg(r0);
      if (d0 < d1) {
        std::swap(r0, r1);
        std::swap(s0, s1);
        continue;
      }
      uint8_t li = detail::fp_inv(p, r1[d1]);
      while ((d0 = detail::poly_deg(r0)) >= d1) {
        int c = (r0[d0] * li) % p;
        int sh = d0 - d1;
        for (int i = 0; i <= d1; ++i)
          r0[i + sh] = static_cast<uint8_t>((r0[i + sh] + (p - r1[i]) * c % p) % p);
        for (size_t i = 0; i + sh < s0.size(); ++i)
          s0[i + sh] = static_cast<uint8_t>((s0[i + sh] + (p - s1[i]) * c % p) % p);
      }
      std::swap(r0, r1);
      std::swap(s0, s1);
    }
    uint8_t li = detail::fp_inv(p, r1[0]);
    Fe out(deg());
    for (int i = 0; i < deg(); ++i) out[i] = static_cast<uint8_t>((s1[i] * li) % p);
    return out;
  }

  void init() {
    int e = deg();
    // Frobenius columns: x^(j*p) = (x^p)^j
    Fe x(e, 0);
    std::vector<uint8_t> xp;
    if (e == 1) {
      xp = {1};
      frob_cols.assign(1, Fe{1});
      frob_cols[0][0] = 1;
    } else {
      x[1] = 1;
      xp = detail::poly_powmod_p(p, x, 1, modulus);
      frob_cols.resize(e);
      Fe cur(e, 0);
      cur[0] = 1;
      for (int j = 0; j < e; ++j) {
        frob_cols[j] = cur;
        cur = detail::poly_mulmod(p, cur, xp, modulus);
      }
    }
    // trace row
    trace_row.assign(e, 0);
    for (int j = 0; j < e; ++j) {
      Fe basis(e, 0);
      basis[j] = 1;
      Fe y = basis, acc = basis;
      for (int i = 1; i < e; ++i) {
        y = frob_p(y);
        for (int k = 0; k < e; ++k) acc[k] = static_cast<uint8_t>((acc[k] + y[k]) % p);
      }
      for (int k = 1; k < e; ++k)
        require(acc[k] == 0, Err::Internal, "trace not in prime field");
      trace_row[j] = acc[0];
    }
    // small-field tables
    if (card() <= 256) {
      small = false;  // build via generic path first, then flip
      long long n = card();
      mul_tab.resize(n * n);
      inv_tab.assign(n, 0);
      for (long long i = 0; i < n; ++i) {
        Fe a = unpack(i);
        for (long long j = 0; j <= i; ++j) {
          Fe b = unpack(j);
          long long v = pack(detail::poly_mulmod(p, a, b, modulus));
          mul_tab[i * n + j] = static_cast<uint16_t>(v);
          mul_tab[j * n + i] = static_cast<uint16_t>(v);
          if (v == 1) {
            inv_tab[i] = static_cast<uint16_t>(j);
            inv_tab[j] = static_cast<uint16_t>(i);
          }
        }
      }
      small = true;
    }
  }
};

// Embedding F_{p^se} -> F_{p^de} for se | de, as an F_p-linear map with a
// cached section for mapping back down.
struct Embedding {
  int p = 2, src_e = 1, dst_e = 1;
  std::vector<Fe> cols;      // dst-side images of src basis x^j
  std::vector<Fe> down_rows; // left inverse rows (src_e x dst_e), F_p entries

  Fe up(const Fe& a) const {
    Fe r(dst_e, 0);
    for (int j = 0; j < src_e; ++j) {
      if (!a[j]) continue;
      for (int i = 0; i < dst_e; ++i)
        r[i] = static_cast<uint8_t>((r[i] + a[j] * cols[j][i]) % p);
    }
    return r;
  }

  // returns false if a is not in the image
  bool down(const Fe& a, Fe& out) const {
    out.assign(src_e, 0);
    for (int i = 0; i < src_e; ++i) {
      int acc = 0;
      for (int j = 0; j < dst_e; ++j) acc += down_rows[i][j] * a[j];
      out[i] = static_cast<uint8_t>(acc % p);
    }
    // verify: up(out) == a
    Fe chk(dst_e, 0);
    for (int j = 0; j < src_e; ++j) {
      if (!out[j]) continue;
      for (int i = 0; i < dst_e; ++i)
        chk[i] = static_cast<uint8_t>((chk[i] + out[j] * cols[j][i]) % p);
    }
    return chk == a;
  }
};

// Tower registry: one context per (p, f, m) plus cached embeddings between
// extensions over the same (p, f).  Embeddings for chained degrees are derived
// by composition so that composites agree with direct embeddings.
class FieldTower {
 public:
  explicit FieldTower(int p, int f) : p_(p), f_(f) {}

  const FieldCtx& ctx(int m) {
    auto it = ctxs_.find(m);
    if (it == ctxs_.end())
      it = ctxs_.emplace(m, std::make_unique<FieldCtx>(p_, f_, m)).first;
    return *it->second;
  }

  const Embedding& embedding(int src_m, int dst_m) {
    require(dst_m % src_m == 0, Err::IncompatibleTower,
            "source extension does not divide destination");
    auto key = std::make_pair(src_m, dst_m);
    auto it = embs_.find(key);
    if (it != embs_.end()) return *it->second;

    const FieldCtx& src = ctx(src_m);
    const FieldCtx& dst = ctx(dst_m);
    auto emb = std::make_unique<Embedding>();
    emb->p = p_;
    emb->src_e = src.deg();
    emb->dst_e = dst.deg();

    if (src_m == dst_m) {
      emb->cols.resize(src.deg());
      for (int j = 0; j < src.deg(); ++j) {
        emb->cols[j] = dst.zero();
        emb->cols[j][j] = 1;
      }
    } else {
      // prefer composing through a registered intermediate so compositions of
      // embeddings agree with the direct embedding
      Fe root;
      bool derived = false;
      for (auto& [k, e2] : embs_) {
        if (k.second != dst_m) continue;
        int mid = k.first;
        if (mid == src_m || mid % src_m != 0 || mid == dst_m) continue;
        auto mid_key = std::make_pair(src_m, mid);
        auto mit = embs_.find(mid_key);
        if (mit == embs_.end()) continue;
        // root of src modulus in mid, pushed up to dst
        Fe xr = mit->second->cols.size() > 1 ? mit->second->cols[1] : ctx(mid).one();
        root = e2->up(xr);
        derived = true;
        break;
      }
      if (!derived) root = find_root(src, dst);
      emb->cols.resize(src.deg());
      Fe cur = dst.one();
      for (int j = 0; j < src.deg(); ++j) {
        emb->cols[j] = cur;
        cur = dst.mul(cur, root);
      }
    }
    build_down_map(*emb);
    auto& ref = *emb;
    embs_.emplace(key, std::move(emb));
    return ref;
  }

  int p() const { return p_; }
  int f() const { return f_; }

 private:
  Fe find_root(const FieldCtx& src, const FieldCtx& dst) {
    // enumerate the subfield of dst of size p^src.deg() as the fixed space of
    // Frobenius^src.deg(), then take the first root of src.modulus in scan order
    int es = src.deg(), ed = dst.deg();
    require(src.card() <= (1 << 20), Err::CapExceeded, "subfield too large for root scan");
    // fixed space of M^es - I as F_p-linear map on dst
    std::vector<std::vector<uint8_t>> mat(ed, std::vector<uint8_t>(ed, 0));
    for (int j = 0; j < ed; ++j) {
      Fe b = dst.zero();
      b[j] = 1;
      for (int i = 0; i < es; ++i) b = dst.frob_p(b);
      for (int i = 0; i < ed; ++i) mat[i][j] = b[i];
      mat[j][j] = static_cast<uint8_t>((mat[j][j] + p_ - 1) % p_);
    }
    std::vector<Fe> basis = kernel_basis(mat);
    require((int)basis.size() == es, Err::Internal, "subfield dimension mismatch");
    // scan F_p-combinations in lexicographic counter order
    long long total = 1;
    for (int i = 0; i < es; ++i) total *= p_;
    for (long long ctr = 1; ctr < total; ++ctr) {
      long long c = ctr;
      Fe cand = dst.zero();
      for (int i = 0; i < es; ++i) {
        int d = static_cast<int>(c % p_);
        c /= p_;
        if (d)
          for (int k = 0; k < ed; ++k)
            cand[k] = static_cast<uint8_t>((cand[k] + d * basis[i][k]) % p_);
      }
      // evaluate src.modulus at cand (Horner; coefficients are scalars)
      Fe acc = dst.zero();
      for (int i = es; i >= 0; --i) {
        acc = dst.mul(acc, cand);
        acc[0] = static_cast<uint8_t>((acc[0] + src.modulus[i]) % p_);
      }
      if (dst.is_zero(acc)) return cand;
    }
    fail(Err::Internal, "no root of modulus in destination subfield");
  }

  std::vector<Fe> kernel_basis(std::vector<std::vector<uint8_t>> mat) {
    int n = static_cast<int>(mat.size());
    std::vector<int> pivot_col(n, -1);
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
      int piv = -1;
      for (int r = rank; r < n; ++r)
        if (mat[r][col]) {
          piv = r;
          break;
        }
      if (piv < 0) continue;
      std::swap(mat[rank], mat[piv]);
      uint8_t li = detail::fp_inv(p_, mat[rank][col]);
      for (int j = 0; j < n; ++j) mat[rank][j] = static_cast<uint8_t>((mat[rank][j] * li) % p_);
      for (int r = 0; r < n; ++r) {
        if (r == rank || !mat[r][col]) continue;
        int c = mat[r][col];
        for (int j = 0; j < n; ++j)
          mat[r][j] = static_cast<uint8_t>((mat[r][j] + (p_ - mat[rank][j]) * c % p_) % p_);
      }
      pivot_col[rank++] = col;
    }
    std::vector<bool> is_pivot(n, false);
    for (int i = 0; i < rank; ++i) is_pivot[pivot_col[i]] = true;
    std::vector<Fe> basis;
    for (int free = 0; free < n; ++free) {
      if (is_pivot[free]) continue;
      Fe v(n, 0);
      v[free] = 1;
      for (int i = 0; i < rank; ++i) {
        int c = mat[i][free];
        if (c) v[pivot_col[i]] = static_cast<uint8_t>((p_ - c) % p_);
      }
      basis.push_back(v);
    }
    return basis;
  }

  void build_down_map(Embedding& emb) {
    // left inverse D (es x de) of the embedding matrix C: row-reduce [C^T | I]
    int ed = emb.dst_e, es = emb.src_e;
    std::vector<std::vector<uint8_t>> aug(es, std::vector<uint8_t>(ed + es, 0));
    for (int r = 0; r < es; ++r)
      for (int c = 0; c < ed; ++c) aug[r][c] = emb.cols[r][c];
    for (int r = 0; r < es; ++r) aug[r][ed + r] = 1;
    // eliminate to echelon over F_p
    int rank = 0;
    std::vector<int> piv(es, -1);
    for (int col = 0; col < ed && rank < es; ++col) {
      int pr = -1;
      for (int r = rank; r < es; ++r)
        if (aug[r][col]) {
          pr = r;
          break;
        }
      if (pr < 0) continue;
      std::swap(aug[rank], aug[pr]);
      uint8_t li = detail::fp_inv(p_, aug[rank][col]);
      for (int j = 0; j < ed + es; ++j)
        aug[rank][j] = static_cast<uint8_t>((aug[rank][j] * li) % p_);
      for (int r = 0; r < es; ++r) {
        if (r == rank || !aug[r][col]) continue;
        int c = aug[r][col];
        for (int j = 0; j < ed + es; ++j)
          aug[r][j] = static_cast<uint8_t>((aug[r][j] + (p_ - aug[rank][j]) * c % p_) % p_);
      }
      piv[rank++] = col;
    }
    require(rank == es, Err::Internal, "embedding not injective");
    // rows of aug now: sum_j aug[r][j<ed] x_j-basis = combination; the right
    // block records the src coordinates.  Build D with D[i][pivcol] pattern:
    emb.down_rows.assign(es, Fe(ed, 0));
    for (int r = 0; r < rank; ++r) {
      int col = piv[r];
      for (int i = 0; i < es; ++i)
        if (aug[r][ed + i]) {
          // x_col contributes aug[r][ed+i] to source coordinate i
          emb.down_rows[i][col] = aug[r][ed + i];
        }
    }
  }

  int p_, f_;
  std::map<int, std::unique_ptr<FieldCtx>> ctxs_;
  std::map<std::pair<int, int>, std::unique_ptr<Embedding>> embs_;
};

}  // namespace jetchar
