#pragma once

// Group contexts for GL_n (n <= 3) and SL_2 over truncated rings, exhaustive
// enumeration with canonical ordering, subgroup membership predicates, and a
// simple disk cache keyed by (kind, n, q, m, r).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <string>
#include <unordered_map>
#include <vector>

#include "jetchar/weyl.hpp"

namespace jetchar {

struct GroupContext {
  GroupKind kind = GroupKind::GL;
  int n = 2;
  int r = 1;
  const FieldCtx* fc = nullptr;  // base field context (m = 1)
  long long cap = 100000000;     // enumeration cap

  int dim_g() const { return kind == GroupKind::SL2 ? 3 : n * n; }
  int dim_gr() const { return (r + 1) * dim_g(); }
  long long q() const {
    long long v = 1;
    for (int i = 0; i < fc->f; ++i) v *= fc->p;
    return v;
  }
};

inline long long predicted_order(const GroupContext& g, int m) {
  // |GL_n(F_s)| * s^(r * dim), s = q^m; |SL_2| = |GL_2|/(s-1)
  long long s = 1;
  for (int i = 0; i < m; ++i) s *= g.q();
  auto powll = [](long long b, int e) {
    long long v = 1;
    while (e--) v *= b;
    return v;
  };
  long long gl0 = 1;
  for (int i = 0; i < g.n; ++i) gl0 *= (powll(s, g.n) - powll(s, i));
  long long ord0 = g.kind == GroupKind::SL2 ? gl0 / (s - 1) : gl0;
  return ord0 * powll(s, g.r * g.dim_g());
}

enum class Sub { B, T, U, UP, L, P, Congruence };

// entry-pattern membership tests shared by enumerated groups and fixed groups
inline bool mat_in_subgroup(const MatCtx& mc, const Mat& g, Sub s,
                            const StdParabolic* pb = nullptr, int lvl = 1) {
  const RingCtx& rc = *mc.rc;
  int n = mc.n;
  switch (s) {
    case Sub::B:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
          if (!rc.is_zero(mc.entry(g, i, j))) return false;
      return true;
    case Sub::T:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && !rc.is_zero(mc.entry(g, i, j))) return false;
      return true;
    case Sub::U: {
      if (!mat_in_subgroup(mc, g, Sub::B)) return false;
      for (int i = 0; i < n; ++i)
        if (!rc.is_zero(rc.sub(mc.entry(g, i, i), rc.one()))) return false;
      return true;
    }
    case Sub::UP: {
      require(pb, Err::BadInput, "parabolic required");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          int bi = pb->block_of(i), bj = pb->block_of(j);
          Re e = mc.entry(g, i, j);
          if (bi > bj && !rc.is_zero(e)) return false;
          if (bi == bj) {
            if (i == j) {
              if (!rc.is_zero(rc.sub(e, rc.one()))) return false;
            } else if (!rc.is_zero(e)) {
              return false;
            }
          }
        }
      return true;
    }
    case Sub::L: {
      require(pb, Err::BadInput, "parabolic required");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (pb->block_of(i) != pb->block_of(j) && !rc.is_zero(mc.entry(g, i, j)))
            return false;
      return true;
    }
    case Sub::P: {
      require(pb, Err::BadInput, "parabolic required");
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (pb->block_of(i) > pb->block_of(j) && !rc.is_zero(mc.entry(g, i, j)))
            return false;
      return true;
    }
    case Sub::Congruence: {
      if (lvl <= 0) return true;
      return mc.reduce_mod(g, lvl - 1) == mc.identity();
    }
  }
  return false;
}

// enumerated group of F_{q^m}-points with index lookup
class GroupTable {
 public:
  GroupTable(const GroupContext& g, FieldTower& tower, int m)
      : gctx_(g), m_(m), fc_(&tower.ctx(m)), rc_(*fc_, g.r), mc_(rc_, g.n) {}

  const GroupContext& gctx() const { return gctx_; }
  const RingCtx& rc() const { return rc_; }
  const MatCtx& mc() const { return mc_; }
  int m() const { return m_; }

  void enumerate() {
    if (!elems_.empty()) return;
    long long pred = predicted_order(gctx_, m_);
    require(pred <= gctx_.cap, Err::CapExceeded,
            "predicted order " + std::to_string(pred) + " exceeds cap");
    elems_.reserve(pred);
    Mat cur = mc_.zero();
    int p = fc_->p;
    int sz = mc_.size();
    // odometer over all matrices, filter invertible (and det 1 for SL2)
    while (true) {
      if (mc_.rc->is_unit(mc_.det(cur))) accept(cur);
      int i = 0;
      for (; i < sz; ++i) {
        if (cur[i] + 1 < p) {
          ++cur[i];
          break;
        }
        cur[i] = 0;
      }
      if (i == sz) break;
    }
    build_index();
    require((long long)elems_.size() == pred, Err::Internal,
            "enumeration count mismatch: got " + std::to_string(elems_.size()) +
                " expected " + std::to_string(pred));
  }

  // load from cache or enumerate and store
  void enumerate_cached(const std::string& cache_dir) {
    if (!elems_.empty()) return;
    if (cache_dir.empty()) {
      enumerate();
      return;
    }
    std::filesystem::create_directories(cache_dir);
    std::string path = cache_dir + "/" + cache_name();
    if (load(path)) return;
    enumerate();
    store(path);
  }

  size_t size() const { return elems_.size(); }
  const Mat& operator[](size_t i) const { return elems_[i]; }
  const std::vector<Mat>& elems() const { return elems_; }

  int index_of(const Mat& m) const {
    auto it = index_.find(key(m));
    require(it != index_.end(), Err::Internal, "element not in enumerated group");
    return it->second;
  }
  bool contains(const Mat& m) const { return index_.find(key(m)) != index_.end(); }

  int mul(int a, int b) const { return index_of(mc_.mul(elems_[a], elems_[b])); }
  int inv(int a) const { return index_of(mc_.inv(elems_[a])); }

  bool in_subgroup(const Mat& g, Sub s, const StdParabolic* pb = nullptr, int lvl = 1) const {
    return mat_in_subgroup(mc_, g, s, pb, lvl);
  }

  std::vector<int> subgroup_indices(Sub s, const StdParabolic* pb = nullptr, int lvl = 1) const {
    std::vector<int> out;
    for (size_t i = 0; i < elems_.size(); ++i)
      if (in_subgroup(elems_[i], s, pb, lvl)) out.push_back(static_cast<int>(i));
    return out;
  }

  std::string key(const Mat& m) const { return std::string(m.begin(), m.end()); }

  std::string cache_name() const {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s_n%d_q%lld_m%d_r%d.grp",
                  gctx_.kind == GroupKind::SL2 ? "SL" : "GL", gctx_.n, gctx_.q(), m_,
                  gctx_.r);
    return buf;
  }

 private:
  void accept(const Mat& m) {
    if (gctx_.kind == GroupKind::SL2) {
      Re d = mc_.det(m);
      if (!rc_.is_zero(rc_.sub(d, rc_.one()))) return;
    }
    elems_.push_back(m);
  }

  void build_index() {
    index_.reserve(elems_.size() * 2);
    for (size_t i = 0; i < elems_.size(); ++i) index_[key(elems_[i])] = static_cast<int>(i);
  }

  bool load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::string header;
    std::getline(in, header);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "jetchar-group-v1 %s count=%lld entry=%d",
                  cache_name().c_str(), predicted_order(gctx_, m_), mc_.size());
    if (header != buf) return false;  // parameter mismatch: refuse and re-enumerate
    long long cnt = predicted_order(gctx_, m_);
    elems_.assign(cnt, Mat(mc_.size()));
    for (auto& e : elems_) in.read(reinterpret_cast<char*>(e.data()), e.size());
    if (!in) {
      elems_.clear();
      return false;
    }
    build_index();
    return true;
  }

  void store(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "jetchar-group-v1 %s count=%lld entry=%d",
                  cache_name().c_str(), (long long)elems_.size(), mc_.size());
    out << buf << "\n";
    for (const auto& e : elems_) out.write(reinterpret_cast<const char*>(e.data()), e.size());
  }

  GroupContext gctx_;
  int m_;
  const FieldCtx* fc_;
  RingCtx rc_;
  MatCtx mc_;
  std::vector<Mat> elems_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace jetchar
