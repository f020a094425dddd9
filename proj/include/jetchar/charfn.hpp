#pragma once

// Characters of the finite abelian groups T_r^sigma, class functions on fixed
// groups, inner products, Weyl conjugation.  Character values are roots of
// unity tracked as exact integer angles (multiples of 2 pi / N).

#include <complex>
#include <map>
#include <numeric>

#include "jetchar/frobenius.hpp"

namespace jetchar {

using cplx = std::complex<double>;

constexpr double kSumTol = 1e-8;       // tolerance per summed term
constexpr double kIntegralityTol = 1e-6;

inline cplx unit_root(long long num, long long den) {
  double ang = 2.0 * 3.14159265358979323846 * (double)(((num % den) + den) % den) / (double)den;
  return {std::cos(ang), std::sin(ang)};
}

// convert matrices between working extensions of the same tower
inline Mat mat_change_ctx(FieldTower& tower, const GroupContext& g, const Mat& m, int src_m,
                          int dst_m) {
  if (src_m == dst_m) return m;
  RingCtx rs(tower.ctx(src_m), g.r), rd_(tower.ctx(dst_m), g.r);
  MatCtx ms(rs, g.n), md(rd_, g.n);
  Mat out = md.zero();
  if (dst_m % src_m == 0) {
    const Embedding& e = tower.embedding(src_m, dst_m);
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j) {
        Re src = ms.entry(m, i, j);
        Re dst = rd_.zero();
        for (int lev = 0; lev <= g.r; ++lev) rd_.set_coef(dst, lev, e.up(rs.coef(src, lev)));
        md.set_entry(out, i, j, dst);
      }
    return out;
  }
  require(src_m % dst_m == 0, Err::IncompatibleTower, "no embedding between extensions");
  const Embedding& e = tower.embedding(dst_m, src_m);
  for (int i = 0; i < g.n; ++i)
    for (int j = 0; j < g.n; ++j) {
      Re src = ms.entry(m, i, j);
      Re dst = rd_.zero();
      for (int lev = 0; lev <= g.r; ++lev) {
        Fe down;
        require(e.down(rs.coef(src, lev), down), Err::IncompatibleTower,
                "entry not in subfield");
        rd_.set_coef(dst, lev, down);
      }
      md.set_entry(out, i, j, dst);
    }
  return out;
}

struct AbelianStructure {
  const FixedGroup* grp = nullptr;
  std::vector<int> gens;          // indices of basis elements, prime-power orders
  std::vector<long long> orders;  // orders[i] = ord(gens[i])
  long long exponent = 1;         // lcm of orders
  std::vector<std::vector<int>> dlog;  // element index -> exponent vector

  size_t ngens() const { return gens.size(); }
  long long size() const { return grp->size(); }
};

namespace detail {

inline int pow_index(const FixedGroup& G, int g, long long e) {
  int acc = G.id_index();
  int base = g;
  while (e) {
    if (e & 1) acc = G.mul(acc, base);
    base = G.mul(base, base);
    e >>= 1;
  }
  return acc;
}

inline long long elem_order(const FixedGroup& G, int g) {
  long long k = 1;
  int acc = g;
  int id = G.id_index();
  while (acc != id) {
    acc = G.mul(acc, g);
    ++k;
  }
  return k;
}

// closure of a generating set, as a sorted index set
inline std::vector<int> subgroup_closure(const FixedGroup& G, std::vector<int> gens) {
  std::vector<char> in(G.size(), 0);
  std::vector<int> queue = {G.id_index()};
  in[G.id_index()] = 1;
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    for (int g : gens) {
      int nx = G.mul(queue[qi], g);
      if (!in[nx]) {
        in[nx] = 1;
        queue.push_back(nx);
      }
    }
  }
  std::sort(queue.begin(), queue.end());
  return queue;
}

}  // namespace detail

// primary-decomposition basis of a finite abelian group
inline AbelianStructure abelian_structure(const FixedGroup& T) {
  // abelian check
  for (size_t a = 0; a < T.size(); ++a)
    for (size_t b = a + 1; b < T.size(); ++b)
      require(T.mul((int)a, (int)b) == T.mul((int)b, (int)a), Err::NotAbelian,
              "group is not abelian");

  AbelianStructure out;
  out.grp = &T;
  long long n = (long long)T.size();
  std::vector<long long> ords(T.size());
  for (size_t i = 0; i < T.size(); ++i) ords[i] = detail::elem_order(T, (int)i);

  // prime factors of |T|
  std::vector<long long> primes;
  long long nn = n;
  for (long long d = 2; d * d <= nn; ++d)
    if (nn % d == 0) {
      primes.push_back(d);
      while (nn % d == 0) nn /= d;
    }
  if (nn > 1) primes.push_back(nn);

  for (long long ell : primes) {
    // Sylow subgroup: elements of ell-power order
    std::vector<int> syl;
    for (size_t i = 0; i < T.size(); ++i) {
      long long o = ords[i];
      while (o % ell == 0) o /= ell;
      if (o == 1) syl.push_back((int)i);
    }
    std::vector<int> basis_here;
    std::vector<int> H = {T.id_index()};
    while ((long long)H.size() < (long long)syl.size()) {
      // element of maximal order in the quotient by <basis_here>
      std::vector<char> inH(T.size(), 0);
      for (int h : H) inH[h] = 1;
      int best = -1;
      long long best_d = 0;
      for (int s : syl) {
        if (inH[s]) continue;
        long long d = 1;
        int acc = s;
        while (!inH[acc]) {
          acc = detail::pow_index(T, s, ++d);
        }
        if (d > best_d) {
          best_d = d;
          best = s;
        }
      }
      require(best >= 0, Err::Internal, "basis extraction stalled");
      // adjust so the relative order becomes the true order: find y in H with
      // y^d = (best^d)^-1, replace best by best*y; scan the coset as fallback
      int target = T.inv(detail::pow_index(T, best, best_d));
      int adjusted = -1;
      for (int y : H)
        if (detail::pow_index(T, y, best_d) == target) {
          adjusted = T.mul(best, y);
          break;
        }
      if (adjusted < 0) {
        for (int y : H) {
          int cand = T.mul(best, y);
          if (ords[cand] == best_d) {
            adjusted = cand;
            break;
          }
        }
      }
      require(adjusted >= 0 && ords[adjusted] == best_d, Err::Internal,
              "no direct-summand representative in coset");
      basis_here.push_back(adjusted);
      H = detail::subgroup_closure(T, basis_here);
    }
    for (int b : basis_here) {
      out.gens.push_back(b);
      out.orders.push_back(ords[b]);
    }
  }

  for (long long o : out.orders) out.exponent = std::lcm(out.exponent, o);
  if (out.orders.empty()) out.exponent = 1;

  // discrete log by enumerating the exponent box
  long long total = 1;
  for (long long o : out.orders) total *= o;
  require(total == n, Err::Internal, "basis orders do not multiply to |T|");
  out.dlog.assign(T.size(), {});
  std::vector<int> vec(out.gens.size(), 0);
  long long seen = 0;
  while (true) {
    int e = T.id_index();
    for (size_t i = 0; i < out.gens.size(); ++i)
      if (vec[i]) e = T.mul(e, detail::pow_index(T, out.gens[i], vec[i]));
    require(out.dlog[e].empty() || e == T.id_index(),  // id hit once (vec=0)
            Err::Internal, "exponent box not injective");
    out.dlog[e] = vec;
    ++seen;
    size_t i = 0;
    for (; i < vec.size(); ++i) {
      if (vec[i] + 1 < out.orders[i]) {
        ++vec[i];
        break;
      }
      vec[i] = 0;
    }
    if (i == vec.size()) break;
  }
  require(seen == total, Err::Internal, "exponent box enumeration mismatch");
  for (size_t i = 0; i < T.size(); ++i)
    require(!out.dlog[i].empty() || (int)i == T.id_index(), Err::Internal,
            "element missed by exponent box");
  return out;
}

struct TorusChar {
  const AbelianStructure* st = nullptr;
  std::vector<long long> k;  // exponent on generator i, modulo orders[i]

  // exact angle numerator over st->exponent
  long long angle(int elem_index) const {
    const auto& d = st->dlog[elem_index];
    long long N = st->exponent, acc = 0;
    for (size_t i = 0; i < k.size(); ++i)
      acc = (acc + (k[i] % st->orders[i]) * (d[i] % st->orders[i]) % N * (N / st->orders[i])) % N;
    return acc;
  }
  cplx value(int elem_index) const { return unit_root(angle(elem_index), st->exponent); }
  bool is_trivial_on(int elem_index) const { return angle(elem_index) == 0; }

  TorusChar mul(const TorusChar& o) const {
    TorusChar out = *this;
    for (size_t i = 0; i < k.size(); ++i) out.k[i] = (k[i] + o.k[i]) % st->orders[i];
    return out;
  }
  TorusChar inverse() const {
    TorusChar out = *this;
    for (size_t i = 0; i < k.size(); ++i) out.k[i] = (st->orders[i] - k[i] % st->orders[i]) % st->orders[i];
    return out;
  }
  bool operator==(const TorusChar& o) const { return st == o.st && k == o.k; }
};

inline std::vector<TorusChar> characters(const AbelianStructure& st) {
  std::vector<TorusChar> out;
  std::vector<long long> vec(st.ngens(), 0);
  while (true) {
    out.push_back(TorusChar{&st, vec});
    size_t i = 0;
    for (; i < vec.size(); ++i) {
      if (vec[i] + 1 < st.orders[i]) {
        ++vec[i];
        break;
      }
      vec[i] = 0;
    }
    if (i == vec.size()) break;
    if (st.ngens() == 0) break;
  }
  if (st.ngens() == 0) out.resize(1);
  return out;
}

// build the character with prescribed exact values on the basis; angles are
// numerators over st.exponent and must be divisible by exponent/order
inline TorusChar char_from_gen_angles(const AbelianStructure& st,
                                      const std::vector<long long>& angles) {
  TorusChar out{&st, std::vector<long long>(st.ngens(), 0)};
  long long N = st.exponent;
  for (size_t i = 0; i < st.ngens(); ++i) {
    long long step = N / st.orders[i];
    long long a = ((angles[i] % N) + N) % N;
    require(a % step == 0, Err::Internal, "value order incompatible with generator order");
    out.k[i] = (a / step) % st.orders[i];
  }
  return out;
}

// theta^w(t) = theta(wlift^-1 t wlift); checks that the lift normalizes the
// torus fixed group and commutes with sigma on it
inline TorusChar weyl_conjugate(const TorusChar& th, const WeylElem& w) {
  const FixedGroup& T = *th.st->grp;
  const MatCtx& mc = T.mc();
  RootDatum rd(mc, T.gctx->kind);
  Mat L = rd.lift(w);
  Mat Li = mc.inv(L);
  std::vector<long long> angles(th.st->ngens());
  for (size_t i = 0; i < th.st->ngens(); ++i) {
    Mat conj = mc.mul(mc.mul(Li, T[th.st->gens[i]]), L);
    require(T.contains(conj), Err::TwistIncompatible,
            "Weyl lift does not normalize the fixed torus");
    angles[i] = th.angle(T.index_of(conj));
  }
  // commutation with sigma on T^sigma: conjugation keeps sigma-fixedness,
  // verified by membership above
  return char_from_gen_angles(*th.st, angles);
}

// indices of T^sigma with t == 1 mod t^s
inline std::vector<int> congruence_indices(const FixedGroup& T, int s) {
  std::vector<int> out;
  if (s <= 0) {
    out.resize(T.size());
    std::iota(out.begin(), out.end(), 0);
    return out;
  }
  const MatCtx& mc = T.mc();
  for (size_t i = 0; i < T.size(); ++i)
    if (mc.reduce_mod(T[i], s - 1) == mc.identity()) out.push_back((int)i);
  return out;
}

// largest s in [0, r] with theta nontrivial on T^sigma cap G_{s:r+}
inline int depth(const TorusChar& th) {
  const FixedGroup& T = *th.st->grp;
  int r = T.gctx->r;
  for (int s = r; s >= 1; --s) {
    for (int idx : congruence_indices(T, s))
      if (!th.is_trivial_on(idx)) return s;
  }
  return 0;
}

// ---------------------------------------------------------------------------
// class functions

struct ClassFunction {
  const FixedGroup* dom = nullptr;
  std::vector<cplx> v;

  ClassFunction() = default;
  ClassFunction(const FixedGroup& g, cplx fill = 0.0) : dom(&g), v(g.size(), fill) {}
  cplx& operator[](size_t i) { return v[i]; }
  const cplx& operator[](size_t i) const { return v[i]; }
};

inline cplx inner_product(const ClassFunction& f, const ClassFunction& g) {
  require(f.dom == g.dom, Err::DomainMismatch, "class functions on different groups");
  cplx acc = 0;
  for (size_t i = 0; i < f.v.size(); ++i) acc += f.v[i] * std::conj(g.v[i]);
  return acc / (double)f.v.size();
}

struct ConjClasses {
  std::vector<std::vector<int>> classes;
  std::vector<int> class_of;  // element index -> class id
};

// generator set: deterministic sweep adding elements until closure is full
inline std::vector<int> small_generating_set(const FixedGroup& G) {
  std::vector<int> gens;
  std::vector<char> in(G.size(), 0);
  std::vector<int> reach = {G.id_index()};
  in[G.id_index()] = 1;
  size_t probe = 0;
  std::mt19937_64 rng(12345);
  while (reach.size() < G.size()) {
    int cand;
    if (probe < G.size()) {
      cand = (int)((probe * 2654435761u) % G.size());
      ++probe;
    } else {
      cand = (int)(rng() % G.size());
    }
    if (in[cand]) continue;
    gens.push_back(cand);
    // extend closure
    for (size_t qi = 0; qi < reach.size(); ++qi)
      for (int g : gens) {
        int nx = G.mul(reach[qi], g);
        if (!in[nx]) {
          in[nx] = 1;
          reach.push_back(nx);
        }
      }
  }
  return gens;
}

inline ConjClasses conjugacy_classes(const FixedGroup& G) {
  std::vector<int> gens = small_generating_set(G);
  std::vector<int> gen_inv(gens.size());
  for (size_t i = 0; i < gens.size(); ++i) gen_inv[i] = G.inv(gens[i]);
  ConjClasses out;
  out.class_of.assign(G.size(), -1);
  for (size_t start = 0; start < G.size(); ++start) {
    if (out.class_of[start] >= 0) continue;
    int cid = (int)out.classes.size();
    std::vector<int> cls = {(int)start};
    out.class_of[start] = cid;
    for (size_t qi = 0; qi < cls.size(); ++qi) {
      for (size_t gi = 0; gi < gens.size(); ++gi) {
        int nx = G.mul(G.mul(gens[gi], cls[qi]), gen_inv[gi]);
        if (out.class_of[nx] < 0) {
          out.class_of[nx] = cid;
          cls.push_back(nx);
        }
      }
    }
    out.classes.push_back(std::move(cls));
  }
  return out;
}

}  // namespace jetchar
