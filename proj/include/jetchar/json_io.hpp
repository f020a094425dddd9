#pragma once

// Canonical text encodings: a field element is the array of its fm
// coefficients, a ring element the array of its r+1 field elements, a matrix
// the row-major array of its entries.  Round trips are bit exact.

#include <json.hpp>

#include "jetchar/charfn.hpp"

namespace jetchar {

using json = nlohmann::json;

inline json fe_to_json(const Fe& a) {
  json out = json::array();
  for (auto c : a) out.push_back((int)c);
  return out;
}
inline Fe fe_from_json(const FieldCtx& fc, const json& j) {
  require(j.is_array() && (int)j.size() == fc.deg(), Err::BadInput, "bad field element");
  Fe a(fc.deg());
  for (int i = 0; i < fc.deg(); ++i) {
    int v = j[i].get<int>();
    require(v >= 0 && v < fc.p, Err::BadInput, "coefficient out of range");
    a[i] = (uint8_t)v;
  }
  return a;
}

inline json re_to_json(const RingCtx& rc, const Re& a) {
  json out = json::array();
  for (int k = 0; k <= rc.r; ++k) out.push_back(fe_to_json(rc.coef(a, k)));
  return out;
}
inline Re re_from_json(const RingCtx& rc, const json& j) {
  require(j.is_array() && (int)j.size() == rc.r + 1, Err::BadInput, "bad ring element");
  Re a = rc.zero();
  for (int k = 0; k <= rc.r; ++k) rc.set_coef(a, k, fe_from_json(*rc.fc, j[k]));
  return a;
}

inline json mat_to_json(const MatCtx& mc, const Mat& m) {
  json out = json::array();
  for (int i = 0; i < mc.n; ++i)
    for (int j = 0; j < mc.n; ++j) out.push_back(re_to_json(*mc.rc, mc.entry(m, i, j)));
  return out;
}
inline Mat mat_from_json(const MatCtx& mc, const json& j) {
  require(j.is_array() && (int)j.size() == mc.n * mc.n, Err::BadInput, "bad matrix");
  Mat m = mc.zero();
  for (int i = 0; i < mc.n; ++i)
    for (int k = 0; k < mc.n; ++k) mc.set_entry(m, i, k, re_from_json(*mc.rc, j[i * mc.n + k]));
  return m;
}

inline json char_to_json(const TorusChar& th) {
  json out;
  out["exponents"] = th.k;
  json orders = json::array();
  for (auto o : th.st->orders) orders.push_back(o);
  out["orders"] = orders;
  return out;
}

// class function exports: CSV rows (element encoding, re, im) and a JSON
// summary (degree, norm, selected values)
inline std::string class_function_csv(const ClassFunction& f) {
  std::string out = "element,re,im\n";
  char buf[64];
  for (size_t i = 0; i < f.v.size(); ++i) {
    const Mat& m = (*f.dom)[i];
    std::string enc;
    for (auto b : m) {
      std::snprintf(buf, sizeof(buf), "%02x", (unsigned)b);
      enc += buf;
    }
    std::snprintf(buf, sizeof(buf), ",%.12g,%.12g\n", f.v[i].real(), f.v[i].imag());
    out += enc + buf;
  }
  return out;
}

inline json class_function_summary(const ClassFunction& f) {
  json out;
  out["size"] = f.v.size();
  out["degree_re"] = f.v[f.dom->id_index()].real();
  cplx n = inner_product(f, f);
  out["norm_re"] = n.real();
  out["norm_im"] = n.imag();
  return out;
}

}  // namespace jetchar
