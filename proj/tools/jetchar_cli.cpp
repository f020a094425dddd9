// Command-line driver: builds the requested group configuration, runs one of
// the computations or verifiers, and emits JSON (plus CSV character tables).
// Exit codes: 0 pass, 1 computational error, 2 verification failure.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "jetchar/jetchar.hpp"

using namespace jetchar;

namespace {

struct JobConfig {
  std::string kind = "GL";
  int n = 2;
  long long q = 3;
  int r = 1;
  std::string twist = "id";
  std::string theta = "all";
  long long cap = 100000000;
  std::string cache_dir;
  double tol = 1e-8;
  uint64_t seed = 0;
  std::string out;
};

int factor_prime_power(long long q, int& p, int& f) {
  for (int d = 2; (long long)d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      f = 0;
      while (q > 1) {
        require(q % d == 0, Err::BadInput, "q must be a prime power");
        q /= d;
        ++f;
      }
      return 0;
    }
  }
  p = (int)q;
  f = 1;
  return 0;
}

WeylElem parse_twist(const std::string& s, int n) {
  if (s == "id" || s == "split") return WeylElem::identity(n);
  if (s == "swap") {
    require(n >= 2, Err::BadInput, "swap twist needs n >= 2");
    return WeylElem::transposition(n, 0, 1);
  }
  WeylElem w;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) w.perm.push_back(std::stoi(tok));
  require((int)w.perm.size() == n, Err::BadInput, "twist permutation has wrong length");
  return w;
}

std::vector<long long> parse_exponents(const std::string& s) {
  std::vector<long long> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stoll(tok));
  return out;
}

std::vector<int> select_thetas(Session& S, const std::string& sel) {
  std::vector<int> out;
  if (sel == "all") {
    for (size_t i = 0; i < S.theta.size(); ++i) out.push_back((int)i);
    return out;
  }
  if (sel == "generic") {
    for (size_t i = 0; i < S.theta.size(); ++i) {
      if (depth(S.theta[i]) != S.g.r) continue;
      auto rep = is_generic_character(*S.tower, S.theta[i]);
      if (rep.ge1 && rep.ge2) out.push_back((int)i);
    }
    return out;
  }
  auto k = parse_exponents(sel);
  require(k.size() == S.Tst->ngens(), Err::BadInput, "exponent vector has wrong length");
  for (size_t i = 0; i < k.size(); ++i) k[i] = ((k[i] % S.Tst->orders[i]) + S.Tst->orders[i]) %
                                               S.Tst->orders[i];
  for (size_t i = 0; i < S.theta.size(); ++i)
    if (S.theta[i].k == k) out.push_back((int)i);
  require(!out.empty(), Err::BadInput, "no character with that exponent vector");
  return out;
}

void emit(const JobConfig& cfg, const json& j) {
  std::string text = j.dump(2) + "\n";
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(cfg.out);
    f << text;
  }
}

json theta_row(Session& S, int i) {
  json row = char_to_json(S.theta[i]);
  row["index"] = i;
  row["depth"] = depth(S.theta[i]);
  if (depth(S.theta[i]) == S.g.r && S.g.r >= 1) {
    auto rep = is_generic_character(*S.tower, S.theta[i]);
    row["ge1"] = rep.ge1;
    row["ge2"] = rep.ge2;
  } else {
    row["ge1"] = false;
    row["ge2"] = false;
  }
  return row;
}

int run_command(const std::string& cmd, const std::string& verifier, const JobConfig& cfg,
                const std::string& theta2_sel) {
  int p, f;
  factor_prime_power(cfg.q, p, f);
  GroupKind kind = cfg.kind == "SL" ? GroupKind::SL2 : GroupKind::GL;
  if (kind == GroupKind::SL2) require(cfg.n == 2, Err::BadInput, "SL is implemented for n=2");
  require(cfg.n >= 1 && cfg.n <= 3, Err::BadInput, "n must be 1, 2, or 3");
  if (cfg.r >= p)
    std::cerr << "warning: r >= p leaves the primary elementary-abelian level structure\n";

  WeylElem tw_perm = parse_twist(cfg.twist, cfg.n);
  Session S(kind, cfg.n, p, f, cfg.r, FrobTwist::from_weyl(tw_perm));
  S.g.cap = cfg.cap;

  json out;
  out["config"] = {{"kind", cfg.kind}, {"n", cfg.n},    {"q", cfg.q},
                   {"r", cfg.r},       {"twist", cfg.twist}, {"seed", cfg.seed}};

  if (cmd == "group-info") {
    out["order"] = S.Gs->size();
    out["torus_order"] = S.Ts->size();
    out["dim_G_r"] = S.g.dim_gr();
    out["num_characters"] = S.theta.size();
    out["conjugacy_classes"] = S.conj_classes().classes.size();
    long long vreg = 0;
    for (size_t i = 0; i < S.Ts->size(); ++i)
      if (is_very_regular(S.Ts->mc(), (*S.Ts)[i]).is_vreg) ++vreg;
    out["torus_vreg_count"] = vreg;
    emit(cfg, out);
    return 0;
  }

  if (cmd == "char-list") {
    json rows = json::array();
    for (size_t i = 0; i < S.theta.size(); ++i) rows.push_back(theta_row(S, (int)i));
    out["characters"] = rows;
    emit(cfg, out);
    return 0;
  }

  if (cmd == "check-generic") {
    json rows = json::array();
    for (int i : select_thetas(S, cfg.theta)) {
      json row = theta_row(S, i);
      if (row["depth"].get<int>() >= 1 && row["depth"].get<int>() == S.g.r) {
        GenericElement X = extract_generic_element(*S.tower, S.theta[i], S.g.r);
        json xp = json::array();
        for (auto& c : X.c) xp.push_back(fe_to_json(c));
        row["X_psi"] = xp;
      }
      rows.push_back(row);
    }
    out["reports"] = rows;
    emit(cfg, out);
    return 0;
  }

  if (cmd == "induce-split" || cmd == "z-partition" || cmd == "dl-char" || cmd == "inner") {
    ZMachine Z(S);
    if (cmd == "z-partition") {
      const ConjClasses& cc = S.conj_classes();
      json rows = json::array();
      for (const auto& cls : cc.classes) {
        ZPartition zp = Z.z_partition(cls[0]);
        json row;
        row["class_rep"] = cls[0];
        row["class_size"] = cls.size();
        row["total"] = zp.total;
        row["counts"] = zp.counts;
        rows.push_back(row);
      }
      out["partitions"] = rows;
      emit(cfg, out);
      return 0;
    }
    json rows = json::array();
    for (int i : select_thetas(S, cfg.theta)) {
      ClassFunction chi;
      std::string provenance;
      if (cmd == "induce-split") {
        chi = induce_split(S, S.theta[i]);
        provenance = "split-ordinary";
      } else if (cmd == "dl-char") {
        InducedCharacter ic = dl_character(S, Z, S.theta[i]);
        chi = ic.chi;
        provenance = ic.provenance;
      } else {
        chi = Z.character(S.theta[i]);
        provenance = "z-formula";
      }
      json row = class_function_summary(chi);
      row["theta"] = i;
      row["provenance"] = provenance;
      if (cmd == "inner") {
        for (int j : select_thetas(S, theta2_sel.empty() ? cfg.theta : theta2_sel)) {
          ClassFunction chj = Z.character(S.theta[j]);
          cplx ip = inner_product(chi, chj);
          row["inner_with_" + std::to_string(j)] = {{"re", ip.real()}, {"im", ip.imag()}};
        }
      }
      if (!cfg.out.empty()) {
        std::ofstream csv(cfg.out + ".theta" + std::to_string(i) + ".csv");
        csv << class_function_csv(chi);
        row["csv"] = cfg.out + ".theta" + std::to_string(i) + ".csv";
      }
      rows.push_back(row);
    }
    out["characters"] = rows;
    emit(cfg, out);
    return 0;
  }

  if (cmd == "howe-factorize" || cmd == "tower-induce") {
    require(S.tw.is_split() || cmd == "howe-factorize", Err::TwistNotSplit,
            "tower induction needs a split twist");
    HoweCtx HC(S);
    json rows = json::array();
    for (int i : select_thetas(S, cfg.theta)) {
      HoweTower tower = factorize(HC, S.theta[i]);
      auto chk = verify_factorization(HC, tower, S.theta[i]);
      json row;
      row["theta"] = i;
      row["d"] = tower.d();
      row["depths"] = tower.depths;
      json levis = json::array();
      for (auto& L : tower.levis) levis.push_back(L.blocks);
      row["levis"] = levis;
      row["verified"] = chk.pass();
      if (cmd == "tower-induce") {
        TowerParabolics pb;
        pb.step_lower.assign(std::max(1, tower.d()), false);
        ClassFunction chi = tower_induce(HC, tower, pb);
        row["character"] = class_function_summary(chi);
      }
      rows.push_back(row);
    }
    out["towers"] = rows;
    emit(cfg, out);
    return 0;
  }

  if (cmd == "verify") {
    bool pass = true;
    json rep;
    if (verifier == "bruhat") {
      RootDatum rd(S.Gs->mc(), kind);
      GroupTable G(S.g, *S.tower, 1);
      G.enumerate_cached(cfg.cache_dir);
      RootDatum rdg(G.mc(), kind);
      json rows = json::array();
      Root alpha{0, 1};
      for (const auto& s : {WeylElem::transposition(cfg.n, 0, 1)})
        for (const auto& w : WeylElem::all(cfg.n)) {
          auto r2 = verify_bruhat_multiplication(G, rdg, s, w, alpha);
          json row;
          row["w"] = w.perm;
          row["length_additive"] = r2.length_additive;
          row["product_size"] = r2.product_size;
          row["expected_size"] = r2.expected_size;
          row["pass"] = r2.pass;
          if (!r2.pass) pass = false;
          rows.push_back(row);
        }
      rep["cases"] = rows;
    } else if (verifier == "oracle") {
      require(S.tw.is_split(), Err::TwistNotSplit, "oracle verifier is the split comparison");
      ZMachine Z(S);
      double worst = 0;
      for (auto& th : S.theta) {
        ClassFunction a = induce_split(S, th);
        ClassFunction b = Z.character(th);
        for (size_t i = 0; i < a.v.size(); ++i)
          worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
      }
      rep["max_pointwise_deviation"] = worst;
      pass = worst < cfg.tol;
    } else if (verifier == "vreg-values") {
      ZMachine Z(S);
      auto ws = sigma_fixed_weyl(S);
      double worst = 0;
      for (int i : select_thetas(S, "generic")) {
        InducedCharacter dl = dl_character(S, Z, S.theta[i]);
        std::vector<TorusChar> orbit;
        for (const auto& w : ws) orbit.push_back(weyl_conjugate(S.theta[i], w));
        for (size_t t = 0; t < S.Ts->size(); ++t) {
          if (!is_very_regular(S.Ts->mc(), (*S.Ts)[t]).is_vreg) continue;
          cplx expect = 0;
          for (auto& o : orbit) expect += o.value((int)t);
          cplx got = dl.chi.v[S.Gs->index_of((*S.Ts)[t])];
          worst = std::max(worst, std::abs(got - expect));
        }
      }
      rep["max_deviation"] = worst;
      pass = worst < cfg.tol;
    } else if (verifier == "frob-scalar") {
      int gi = select_thetas(S, cfg.theta == "all" ? "generic" : cfg.theta).at(0);
      auto r2 = frobenius_scalar_check(S, S.theta[gi], 2, cfg.tol);
      rep["c_m_re"] = json::array();
      for (auto c : r2.c_m) rep["c_m_re"].push_back(c.real());
      rep["residuals"] = r2.residual;
      pass = r2.pass;
    } else if (verifier == "fourier") {
      LieSpace gsp(*S.g.fc, S.g.n, std::nullopt, kind == GroupKind::SL2);
      LieFn fn(gsp);
      std::mt19937_64 rng(cfg.seed);
      for (auto& v : fn.v)
        v = cplx((double)(rng() % 1000) / 500.0 - 1.0, (double)(rng() % 1000) / 500.0 - 1.0);
      LieFn ff = fourier(fourier(fn));
      double worst = 0;
      for (size_t i = 0; i < gsp.size(); ++i) {
        Mat neg = gsp.mc0->sub(gsp.mc0->zero(), gsp.pts[i]);
        worst = std::max(worst,
                         std::abs(ff.v[i] - (double)gsp.size() * fn.v[gsp.index_of(neg)]));
      }
      rep["double_transform_deviation"] = worst;
      pass = worst < cfg.tol * (double)gsp.size();
    } else if (verifier == "idempotent" || verifier == "hc-support") {
      require(S.tw.is_split(), Err::TwistNotSplit, "idempotent verifiers use the split form");
      LieSpace gsp(*S.g.fc, S.g.n);
      LieSpace tsp(*S.g.fc, S.g.n, StdParabolic::borel(S.g.n));
      GroupContext g0 = S.g;
      g0.r = 0;
      GroupTable G0(g0, *S.tower, 1);
      G0.enumerate_cached(cfg.cache_dir);
      // generic X from the first generic character
      int gi = select_thetas(S, "generic").at(0);
      GenericElement X = extract_generic_element(*S.tower, S.theta[gi], S.g.r);
      Mat Xm = coeff_matrix(gsp, X);
      auto orbit = coadjoint_orbit(gsp, G0, Xm);
      ClassFunction fpsi = generic_idem_f(*S.Gs, gsp, orbit);
      if (verifier == "idempotent") {
        ClassFunction ff = convolve(fpsi, fpsi);
        double worst = 0;
        for (size_t i = 0; i < ff.v.size(); ++i)
          worst = std::max(worst, std::abs(ff.v[i] - fpsi.v[i]));
        rep["f_idempotency_deviation"] = worst;
        pass = worst < cfg.tol;
      } else {
        StdParabolic B = StdParabolic::borel(S.g.n);
        CosetSpace cs = coset_space(*S.Gs, B);
        const ConjClasses& cc = S.conj_classes();
        double worst = 0;
        for (const auto& cls : cc.classes) {
          ClassFunction ind(*S.Gs);
          for (int e : cls) ind.v[e] = 1.0;
          ClassFunction proj = convolve(fpsi, ind);
          auto hc = hc_transform(proj, cs);
          for (size_t c = 0; c < hc.size(); ++c)
            if (!cs.in_borel_img[c]) worst = std::max(worst, std::abs(hc[c]));
        }
        rep["off_torus_mass"] = worst;
        pass = worst < cfg.tol;
      }
    } else if (verifier == "mackey") {
      require(S.tw.is_split(), Err::TwistNotSplit, "Mackey verifier is split");
      StdParabolic B = StdParabolic::borel(S.g.n);
      LeviSubgroup L(*S.Gs, B), Lp(*S.Gs, B);
      int gi = select_thetas(S, "generic").at(0);
      std::vector<int> to_ts(L.elems.size());
      for (size_t i = 0; i < L.elems.size(); ++i)
        to_ts[i] = S.Ts->index_of((*S.Gs)[L.elems[i]]);
      auto val = [&](int loc) { return S.theta[gi].value(to_ts[loc]); };
      std::vector<std::function<cplx(int)>> tests;
      for (auto& th : S.theta)
        tests.push_back([&S, &th, &to_ts](int loc) { return th.value(to_ts[loc]); });
      auto r2 = verify_mackey(S, L, Lp, val, tests, cfg.tol);
      rep["num_double_cosets"] = r2.cosets.size();
      rep["weyl_bound"] = r2.weyl_coset_bound;
      rep["worst_off_pnp"] = r2.worst_off_pnp;
      pass = r2.vanishing_off_pnp;
    } else {
      fail(Err::BadInput, "unknown verifier: " + verifier);
    }
    out["verifier"] = verifier;
    out["report"] = rep;
    out["pass"] = pass;
    emit(cfg, out);
    return pass ? 0 : 2;
  }

  fail(Err::BadInput, "unknown command: " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact character computations on truncated-ring matrix groups"};
  app.require_subcommand(1);

  JobConfig cfg;
  std::string verifier, theta2;
  auto add_common = [&](CLI::App* c) {
    c->add_option("--kind", cfg.kind, "GL or SL");
    c->add_option("--n", cfg.n, "rank (1..3; SL only n=2)");
    c->add_option("--q", cfg.q, "base field size, a prime power");
    c->add_option("--r", cfg.r, "jet level r >= 1");
    c->add_option("--twist", cfg.twist, "id | swap | comma permutation");
    c->add_option("--theta", cfg.theta, "all | generic | exponent vector");
    c->add_option("--theta2", theta2, "second character selector (inner)");
    c->add_option("--cap", cfg.cap, "enumeration cap");
    c->add_option("--cache-dir", cfg.cache_dir, "group cache directory");
    c->add_option("--tol", cfg.tol, "tolerance");
    c->add_option("--seed", cfg.seed, "seed for randomized sampling");
    c->add_option("--out", cfg.out, "output path (default stdout)");
  };

  std::vector<std::string> cmds = {"group-info",   "char-list",   "check-generic",
                                   "induce-split", "z-partition", "dl-char",
                                   "inner",        "howe-factorize", "tower-induce"};
  for (auto& c : cmds) add_common(app.add_subcommand(c));
  CLI::App* ver = app.add_subcommand("verify");
  add_common(ver);
  ver->add_option("what", verifier,
                  "bruhat|mackey|fourier|idempotent|hc-support|frob-scalar|vreg-values|oracle")
      ->required();

  CLI11_PARSE(app, argc, argv);

  std::string cmd;
  for (auto* sc : app.get_subcommands()) cmd = sc->get_name();

  try {
    return run_command(cmd, verifier, cfg, theta2);
  } catch (const Error& e) {
    json err = {{"error", err_name(e.code())}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const std::exception& e) {
    json err = {{"error", "Internal"}, {"message", e.what()}};
    std::cerr << err.dump(2) << "\n";
    return 1;
  }
}
