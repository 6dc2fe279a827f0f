#include "oddform/homotope.hpp"

#include <functional>
#include <numeric>
#include <unordered_map>

namespace oddform {

namespace {

using U32 = std::uint32_t;

// Manual checks that do not fit the carrier iteration: counts per axiom and
// the first witness of each failure.
class Tally {
 public:
  explicit Tally(Report& rep, std::size_t witnesses = 1) : rep_(rep), witnesses_(witnesses) {}
  template <class W>
  void operator()(const std::string& axiom, bool ok, W&& witness) {
    auto [it, fresh] = pos_.try_emplace(axiom, stats_.size());
    if (fresh) stats_.push_back({axiom, 0, 0, true});
    AxiomStat& st = stats_[it->second];
    ++st.tuples;
    if (ok) return;
    if (st.failures++ < witnesses_) rep_.violations.push_back({axiom, witness()});
  }
  void sampled(const std::string& axiom) {
    auto [it, fresh] = pos_.try_emplace(axiom, stats_.size());
    if (fresh) stats_.push_back({axiom, 0, 0, false});
    stats_[it->second].exhaustive = false;
  }
  void done() {
    rep_.stats.insert(rep_.stats.end(), stats_.begin(), stats_.end());
    stats_.clear();
    pos_.clear();
  }

 private:
  Report& rep_;
  std::size_t witnesses_;
  std::vector<AxiomStat> stats_;
  std::unordered_map<std::string, std::size_t> pos_;
};

std::string lv(Elt s) { return "^(" + std::to_string(s) + ")"; }

template <class Add, class Neg, class In0, class Lact>
LevelPairs make_pairs(std::size_t n, U32 zero, Elt s, Add add, Neg neg, In0 in0, Lact lact) {
  LevelPairs p;
  p.level = s;
  p.m0_pos.assign(n, LevelPairs::npos);
  p.m0.push_back(zero);
  p.m0_pos[zero] = 0;
  for (U32 x = 0; x < n; ++x)
    if (in0(x) && x != zero) {
      p.m0_pos[x] = static_cast<U32>(p.m0.size());
      p.m0.push_back(x);
    }
  p.coset.assign(n, LevelPairs::npos);
  auto claim = [&](U32 m) {
    const U32 c = static_cast<U32>(p.reps.size());
    p.reps.push_back(m);
    for (U32 y : p.m0) p.coset[add(m, y)] = c;
  };
  claim(zero);
  for (U32 m = 0; m < n; ++m)
    if (p.coset[m] == LevelPairs::npos) claim(m);
  const std::size_t n0 = p.m0.size();
  p.shift.resize(n);
  for (U32 m = 0; m < n; ++m) {
    U32 y = add(neg(p.reps[p.coset[m]]), m);
    p.shift[m] = p.m0_pos[lact(s, y)];
  }
  p.add0.resize(n0 * n0);
  for (std::size_t a = 0; a < n0; ++a)
    for (std::size_t b = 0; b < n0; ++b) p.add0[a * n0 + b] = p.m0_pos[add(p.m0[a], p.m0[b])];
  return p;
}

Elt two(const CommRing& k) { return k.add(k.one(), k.one()); }

}  // namespace

U32 LevelPairs::index(U32 m, U32 x) const {
  const std::size_t n0 = m0.size();
  return static_cast<U32>(coset[m] * n0 + add0[m0_pos[x] * n0 + shift[m]]);
}

// ------------------------------------------------------------- fixtures

TableOFA tabulate(const MatrixOFA& a, std::size_t bound) {
  if (a.d_count() > bound) throw BoundExceeded("Delta exceeds tabulation bound");
  const auto rs = a.enumerate_r(bound);
  const auto ds = a.enumerate_d(bound);
  std::unordered_map<RElem, U32, RElemHash> ri;
  std::unordered_map<DElem, U32, DElemHash> di;
  for (U32 i = 0; i < rs.size(); ++i) ri.emplace(rs[i], i);
  for (U32 i = 0; i < ds.size(); ++i) di.emplace(ds[i], i);
  const std::size_t nr = rs.size(), nd = ds.size(), nk = a.base().size();
  TableOFA t;
  t.k = a.base_ptr();
  t.nr = nr;
  t.nd = nd;
  t.radd.resize(nr * nr);
  t.rmul.resize(nr * nr);
  t.rbar.resize(nr);
  t.rk.resize(nk * nr);
  t.phi_tab.resize(nr);
  for (U32 x = 0; x < nr; ++x) {
    t.rbar[x] = ri.at(a.r_bar(rs[x]));
    t.phi_tab[x] = di.at(a.phi(rs[x]));
    t.rnames.push_back(a.r_str(rs[x]));
    for (U32 y = 0; y < nr; ++y) {
      t.radd[x * nr + y] = ri.at(a.r_add(rs[x], rs[y]));
      t.rmul[x * nr + y] = ri.at(a.r_mul(rs[x], rs[y]));
    }
    for (Elt c = 0; c < nk; ++c) t.rk[c * nr + x] = ri.at(a.r_kmul(c, rs[x]));
  }
  t.rzero = ri.at(a.r_zero());
  t.rone = ri.at(a.r_one());
  t.dadd.resize(nd * nd);
  t.dact.resize(nd * nr);
  t.dk.resize(nd * nk);
  t.pi_tab.resize(nd);
  t.rho_tab.resize(nd);
  t.aug.resize(nd);
  t.augk.resize(nk * nd);
  for (U32 u = 0; u < nd; ++u) {
    const DElem& du = ds[u];
    t.pi_tab[u] = ri.at(a.pi(du));
    t.rho_tab[u] = ri.at(a.rho(du));
    t.aug[u] = a.in_aug(du);
    t.dnames.push_back(a.d_str(du));
    for (U32 v = 0; v < nd; ++v) t.dadd[u * nd + v] = di.at(a.d_add(du, ds[v]));
    for (U32 x = 0; x < nr; ++x) t.dact[u * nr + x] = di.at(a.d_act(du, rs[x]));
    for (Elt c = 0; c < nk; ++c) {
      t.dk[u * nk + c] = di.at(a.d_kact(du, c));
      t.augk[c * nd + u] = t.aug[u] ? di.at(a.aug_kmul(c, du)) : 0;
    }
  }
  t.dzero = di.at(a.d_zero());
  t.finalize();
  return t;
}

TableNilModule delta_module(const TableOFA& a) {
  if (!a.has_aug()) throw InvalidInput("algebra has no augmentation");
  TableNilModule m;
  m.k = a.k;
  m.nm = a.nd;
  m.madd = a.dadd;
  m.mzero = a.dzero;
  m.m0 = a.aug;
  m.ract_tab = a.dk;
  m.lact_tab = a.augk;
  const Elt minus = a.k->neg(a.k->one());
  m.tau_tab.resize(a.nd);
  for (U32 u = 0; u < a.nd; ++u) m.tau_tab[u] = a.d_add(u, a.d_kact(u, minus));
  m.names = a.dnames;
  m.finalize();
  return m;
}

TableNilModule scalar_nilmodule(RingPtr k) {
  TableNilModule m;
  const std::size_t n = k->size();
  m.nm = n;
  m.madd.resize(n * n);
  m.ract_tab.resize(n * n);
  m.lact_tab.resize(n * n);
  m.tau_tab.resize(n);
  m.m0.assign(n, 1);
  for (Elt x = 0; x < n; ++x) {
    m.names.push_back(k->str(x));
    m.tau_tab[x] = k->mul(two(*k), x);
    for (Elt c = 0; c < n; ++c) {
      m.madd[x * n + c] = k->add(x, c);
      m.ract_tab[x * n + c] = k->mul(k->mul(c, c), x);
      m.lact_tab[c * n + x] = k->mul(c, x);
    }
  }
  m.mzero = k->zero();
  m.k = std::move(k);
  m.finalize();
  return m;
}

// ------------------------------------------------------------- modules

U32 HomotopeModule::of(U32 m) const { return pairs.index(m, base.mzero); }
U32 HomotopeModule::iota(U32 x) const { return pairs.index(base.mzero, x); }

HomotopeModule homotope_module(const TableNilModule& m, Elt s) {
  const CommRing& K = *m.k;
  HomotopeModule h;
  h.base = m;
  h.pairs = make_pairs(
      m.nm, m.mzero, s, [&](U32 x, U32 y) { return m.add(x, y); },
      [&](U32 x) { return m.neg(x); }, [&](U32 x) { return m.in_m0(x); },
      [&](Elt c, U32 x) { return m.lact(c, x); });
  const LevelPairs& P = h.pairs;
  const std::size_t n = P.size(), nk = K.size();
  TableNilModule& t = h.mod;
  t.k = m.k;
  t.nm = n;
  t.mzero = 0;
  t.madd.resize(n * n);
  t.ract_tab.resize(n * nk);
  t.lact_tab.assign(nk * n, 0);
  t.tau_tab.resize(n);
  t.m0.resize(n);
  for (U32 e = 0; e < n; ++e) {
    const U32 r = P.rep_m(e), x = P.rep_x(e);
    t.m0[e] = P.coset[r] == 0;
    t.names.push_back(m.str(r) + lv(s) + "+i(" + m.str(x) + ")");
    for (U32 f = 0; f < n; ++f)
      t.madd[e * n + f] = P.index(m.add(r, P.rep_m(f)), m.add(x, P.rep_x(f)));
    for (Elt c = 0; c < nk; ++c) {
      t.ract_tab[e * nk + c] = P.index(m.ract(r, c), m.lact(K.mul(c, c), x));
      if (t.m0[e]) t.lact_tab[c * n + e] = P.index(m.mzero, m.lact(c, x));
    }
    t.tau_tab[e] = P.index(m.mzero, m.add(m.lact(s, m.tau(r)), m.lact(two(K), x)));
  }
  t.finalize();
  return h;
}

Report check_homotope_module(const TableNilModule& m, const HomotopeModule& h,
                             const CheckConfig& cfg) {
  Report rep;
  const CommRing& K = *m.k;
  const Elt s = h.pairs.level;
  const TableNilModule& t = h.mod;
  const bool ex = m.exhaustive_ok(cfg.exhaustive_limit);
  const Carrier<U32> cm = m.m_carrier().renamed("m"), cn = cm.renamed("n");
  const Carrier<U32> c0 = m.m0_carrier().renamed("x");
  const Carrier<Elt> kk = k_carrier(K, "k");
  auto chk = [&](const std::string& name, auto pred, const auto&... cs) {
    check_axiom(rep, cfg, ex, name, pred, cs...);
  };
  chk("m^(s)+n^(s)=(m+n)^(s)", [&](U32 x, U32 y) {
    return t.add(h.of(x), h.of(y)) == h.of(m.add(x, y));
  }, cm, cn);
  chk("m^(s)=i((sm)^(s)) on M0", [&](U32 x) { return h.of(x) == h.iota(m.lact(s, x)); }, c0);
  chk("tau(m^(s))=(s tau(m))^(s)", [&](U32 x) {
    return t.tau(h.of(x)) == h.iota(m.lact(s, m.tau(x)));
  }, cm);
  chk("tau(i(x^(s)))=(2x)^(s)", [&](U32 x) {
    return t.tau(h.iota(x)) == h.iota(m.lact(two(K), x));
  }, c0);
  chk("[m^(s),n^(s)]=(s[m,n])^(s)", [&](U32 x, U32 y) {
    return nil_bracket(t, h.of(x), h.of(y)) == h.iota(m.lact(s, nil_bracket(m, x, y)));
  }, cm, cn);
  chk("m^(s).k=(mk)^(s)", [&](U32 x, Elt c) { return t.ract(h.of(x), c) == h.of(m.ract(x, c)); },
      cm, kk);
  chk("i(x^(s)).k=i((k^2x)^(s)), k i(x^(s))=i((kx)^(s))", [&](U32 x, Elt c) {
    return t.ract(h.iota(x), c) == h.iota(m.lact(K.mul(c, c), x)) &&
           t.lact(c, h.iota(x)) == h.iota(m.lact(c, x));
  }, c0, kk);

  Tally tally(rep);
  std::vector<char> hit(t.nm, 0);
  for (U32 x : *c0.all) {
    U32 e = h.iota(x);
    tally("i injective", !hit[e], [&] { return "x=" + m.str(x); });
    hit[e] = 1;
    tally("i(M0) in M0^(s)", t.in_m0(e), [&] { return "x=" + m.str(x); });
  }
  for (U32 e = 0; e < t.nm; ++e) {
    tally("ker(M^(s)->(M/M0)^(s)) = i(M0)", (h.pairs.coset[h.pairs.rep_m(e)] == 0) == bool(hit[e]),
          [&] { return "e=" + t.str(e); });
    tally("generated by m^(s) and i(x^(s))",
          t.add(h.of(h.pairs.rep_m(e)), h.iota(h.pairs.rep_x(e))) == e,
          [&] { return "e=" + t.str(e); });
  }
  tally.done();
  rep.merge(check_nilmodule_axioms(t, cfg));
  return rep;
}

// ------------------------------------------------------------- algebras

TableOFA::D HomotopeOFA::of(TableOFA::D u) const { return pairs.index(u, base->dzero); }
TableOFA::D HomotopeOFA::iota(TableOFA::D v) const { return pairs.index(base->dzero, v); }

HomotopeOFA homotope_ofa(std::shared_ptr<const TableOFA> ap, Elt s) {
  if (!ap->has_aug()) throw InvalidInput("homotopes need an augmented algebra");
  const TableOFA& a = *ap;
  const CommRing& K = *a.k;
  HomotopeOFA h;
  h.base = ap;
  h.pairs = make_pairs(
      a.nd, a.dzero, s, [&](U32 x, U32 y) { return a.d_add(x, y); },
      [&](U32 x) { return a.d_neg(x); }, [&](U32 x) { return a.in_aug(x); },
      [&](Elt c, U32 x) { return a.aug_kmul(c, x); });
  const LevelPairs& P = h.pairs;
  const std::size_t nr = a.nr, nd = P.size(), nk = K.size();
  TableOFA& t = h.alg;
  t.k = a.k;
  t.nr = nr;
  t.radd = a.radd;
  t.rbar = a.rbar;
  t.rk = a.rk;
  t.rzero = a.rzero;
  t.rnames.reserve(nr);
  for (U32 x = 0; x < nr; ++x) t.rnames.push_back(a.r_str(x) + lv(s));
  t.rmul.resize(nr * nr);
  for (U32 x = 0; x < nr; ++x)
    for (U32 y = 0; y < nr; ++y) t.rmul[x * nr + y] = a.r_kmul(s, a.r_mul(x, y));
  if (a.rone && K.is_unit(s)) t.rone = a.r_kmul(*K.inverse(s), *a.rone);
  t.phi_tab.resize(nr);
  for (U32 x = 0; x < nr; ++x) t.phi_tab[x] = h.iota(a.phi(x));

  t.nd = nd;
  t.dzero = 0;
  t.dadd.resize(nd * nd);
  t.dact.resize(nd * nr);
  t.dk.resize(nd * nk);
  t.pi_tab.resize(nd);
  t.rho_tab.resize(nd);
  t.aug.resize(nd);
  t.augk.assign(nk * nd, 0);
  for (U32 e = 0; e < nd; ++e) {
    const U32 r = P.rep_m(e), x = P.rep_x(e);
    t.aug[e] = P.coset[r] == 0;
    t.dnames.push_back(a.d_str(r) + lv(s) + "+i(" + a.d_str(x) + ")");
    t.pi_tab[e] = a.pi(r);
    t.rho_tab[e] = a.r_add(a.r_kmul(s, a.rho(r)), a.rho(x));
    for (U32 f = 0; f < nd; ++f)
      t.dadd[e * nd + f] = P.index(a.d_add(r, P.rep_m(f)), a.d_add(x, P.rep_x(f)));
    for (U32 y = 0; y < nr; ++y) {
      const U32 sy = a.r_kmul(s, y);
      t.dact[e * nr + y] = P.index(a.d_act(r, sy), a.d_act(x, sy));
    }
    for (Elt c = 0; c < nk; ++c) {
      t.dk[e * nk + c] = P.index(a.d_kact(r, c), a.aug_kmul(K.mul(c, c), x));
      if (t.aug[e]) t.augk[c * nd + e] = P.index(a.dzero, a.aug_kmul(c, x));
    }
  }
  t.finalize();
  return h;
}

Report check_homotope_ofa(const HomotopeOFA& h, const CheckConfig& cfg) {
  Report rep;
  const TableOFA& a = *h.base;
  const TableOFA& t = h.alg;
  const Elt s = h.level();
  const bool ex = a.exhaustive_ok(cfg.exhaustive_limit);
  const Carrier<U32> ra = a.r_carrier().renamed("a"), rb = ra.renamed("b");
  const Carrier<U32> du = a.d_carrier().renamed("u"), dw = du.renamed("w");
  std::vector<U32> dl;
  for (U32 u = 0; u < a.nd; ++u)
    if (a.in_aug(u)) dl.push_back(u);
  const Carrier<U32> dv = listed_carrier<U32>("v", dl, du.str);
  auto chk = [&](const std::string& name, auto pred, const auto&... cs) {
    check_axiom(rep, cfg, ex, name, pred, cs...);
  };
  chk("conj(a^(s))=conj(a)^(s)", [&](U32 x) { return t.r_bar(x) == a.r_bar(x); }, ra);
  chk("a^(s)b^(s)=(sab)^(s)", [&](U32 x, U32 y) {
    return t.r_mul(x, y) == a.r_kmul(s, a.r_mul(x, y));
  }, ra, rb);
  chk("u^(s)+w^(s)=(u+w)^(s)", [&](U32 u, U32 w) {
    return t.d_add(h.of(u), h.of(w)) == h.of(a.d_add(u, w));
  }, du, dw);
  chk("v^(s)=i((sv)^(s))", [&](U32 v) { return h.of(v) == h.iota(a.aug_kmul(s, v)); }, dv);
  chk("u^(s).a^(s)=(u.sa)^(s)", [&](U32 u, U32 x) {
    return t.d_act(h.of(u), x) == h.of(a.d_act(u, a.r_kmul(s, x)));
  }, du, ra);
  chk("v^(s).a^(s)=(v.sa)^(s) in D^(s)", [&](U32 v, U32 x) {
    U32 e = t.d_act(h.iota(v), x);
    return e == h.iota(a.d_act(v, a.r_kmul(s, x))) && t.in_aug(e);
  }, dv, ra);
  chk("phi(a^(s))=phi(a)^(s) in D^(s)", [&](U32 x) {
    return t.phi(x) == h.iota(a.phi(x)) && t.in_aug(t.phi(x));
  }, ra);
  chk("pi(u^(s))=pi(u)^(s)", [&](U32 u) { return t.pi(h.of(u)) == a.pi(u); }, du);
  chk("rho(u^(s))=(s rho(u))^(s)", [&](U32 u) {
    return t.rho(h.of(u)) == a.r_kmul(s, a.rho(u));
  }, du);
  chk("rho(i(v^(s)))=rho(v)^(s)", [&](U32 v) { return t.rho(h.iota(v)) == a.rho(v); }, dv);
  rep.merge(check_ofa_axioms(t, cfg));
  rep.merge(check_nilmodule_axioms(DeltaNilModule<TableOFA>{&t}, cfg));
  return rep;
}

TableAction base_action(const HomotopeOFA& h) {
  const TableOFA& a = *h.base;
  const TableOFA& t = h.alg;
  TableAction act;
  act.src = &a;
  act.tgt = &t;
  const std::size_t nr = a.nr;
  act.rs.resize(nr * nr);
  act.sr.resize(nr * nr);
  for (U32 x = 0; x < nr; ++x)
    for (U32 y = 0; y < nr; ++y) {
      act.rs[x * nr + y] = a.r_mul(x, y);
      act.sr[y * nr + x] = a.r_mul(y, x);
    }
  act.tr.resize(t.nd * nr);
  for (U32 e = 0; e < t.nd; ++e) {
    const U32 r = h.pairs.rep_m(e), x = h.pairs.rep_x(e);
    for (U32 y = 0; y < nr; ++y) act.tr[e * nr + y] = h.pairs.index(a.d_act(r, y), a.d_act(x, y));
  }
  act.ds.resize(a.nd * nr);
  for (U32 u = 0; u < a.nd; ++u)
    for (U32 y = 0; y < nr; ++y) act.ds[u * nr + y] = h.of(a.d_act(u, y));
  return act;
}

// ------------------------------------------------------------- towers

TowerMap tower_map(const HomotopeModule& src, const HomotopeModule& tgt, Elt twist) {
  const TableNilModule& m = src.base;
  const CommRing& K = *m.k;
  if (src.pairs.level != K.mul(tgt.pairs.level, twist))
    throw InvalidInput("source level is not target level times twist");
  TowerMap f;
  f.target = tgt.pairs.level;
  f.twist = twist;
  f.d.resize(src.mod.nm);
  for (U32 e = 0; e < src.mod.nm; ++e)
    f.d[e] = tgt.pairs.index(m.ract(src.pairs.rep_m(e), twist), m.lact(twist, src.pairs.rep_x(e)));
  return f;
}

TowerMap tower_map(const HomotopeOFA& src, const HomotopeOFA& tgt, Elt twist) {
  const TableOFA& a = *src.base;
  const CommRing& K = *a.k;
  if (src.level() != K.mul(tgt.level(), twist))
    throw InvalidInput("source level is not target level times twist");
  TowerMap f;
  f.target = tgt.level();
  f.twist = twist;
  f.r.resize(a.nr);
  for (U32 x = 0; x < a.nr; ++x) f.r[x] = a.r_kmul(twist, x);
  f.d.resize(src.alg.nd);
  for (U32 e = 0; e < src.alg.nd; ++e)
    f.d[e] = tgt.pairs.index(a.d_kact(src.pairs.rep_m(e), twist),
                             a.aug_kmul(twist, src.pairs.rep_x(e)));
  return f;
}

Report check_tower_map(const HomotopeModule& src, const HomotopeModule& tgt, const TowerMap& f) {
  Report rep;
  Tally tally(rep);
  const TableNilModule& a = src.mod;
  const TableNilModule& b = tgt.mod;
  const std::size_t nk = a.k->size();
  for (U32 e = 0; e < a.nm; ++e) {
    auto w = [&] { return "e=" + a.str(e); };
    for (U32 g = 0; g < a.nm; ++g)
      tally("tower: f(e+g)=f(e)+f(g)", f.d[a.add(e, g)] == b.add(f.d[e], f.d[g]),
            [&] { return w() + ", g=" + a.str(g); });
    for (Elt c = 0; c < nk; ++c) {
      tally("tower: f(e.k)=f(e).k", f.d[a.ract(e, c)] == b.ract(f.d[e], c),
            [&] { return w() + ", k=" + std::to_string(c); });
      if (a.in_m0(e))
        tally("tower: f(ke)=k f(e)", f.d[a.lact(c, e)] == b.lact(c, f.d[e]),
              [&] { return w() + ", k=" + std::to_string(c); });
    }
    tally("tower: f(tau(e))=tau(f(e))", f.d[a.tau(e)] == b.tau(f.d[e]), w);
    tally("tower: f(M0) in M0", !a.in_m0(e) || b.in_m0(f.d[e]), w);
  }
  tally.done();
  return rep;
}

Report check_tower_map(const HomotopeOFA& src, const HomotopeOFA& tgt, const TowerMap& f) {
  Report rep;
  Tally tally(rep);
  const TableOFA& a = src.alg;
  const TableOFA& b = tgt.alg;
  const std::size_t nk = a.k->size();
  for (U32 x = 0; x < a.nr; ++x) {
    auto w = [&] { return "a=" + a.r_str(x); };
    tally("tower: conj", f.r[a.r_bar(x)] == b.r_bar(f.r[x]), w);
    tally("tower: phi", f.d[a.phi(x)] == b.phi(f.r[x]), w);
    for (U32 y = 0; y < a.nr; ++y) {
      tally("tower: f(a+b)=f(a)+f(b)", f.r[a.r_add(x, y)] == b.r_add(f.r[x], f.r[y]),
            [&] { return w() + ", b=" + a.r_str(y); });
      tally("tower: f(ab)=f(a)f(b)", f.r[a.r_mul(x, y)] == b.r_mul(f.r[x], f.r[y]),
            [&] { return w() + ", b=" + a.r_str(y); });
    }
    for (Elt c = 0; c < nk; ++c)
      tally("tower: f(ka)=k f(a)", f.r[a.r_kmul(c, x)] == b.r_kmul(c, f.r[x]), w);
  }
  for (U32 e = 0; e < a.nd; ++e) {
    auto w = [&] { return "u=" + a.d_str(e); };
    tally("tower: pi", f.r[a.pi(e)] == b.pi(f.d[e]), w);
    tally("tower: rho", f.r[a.rho(e)] == b.rho(f.d[e]), w);
    tally("tower: D", a.in_aug(e) == b.in_aug(f.d[e]) || !a.in_aug(e), w);
    for (U32 g = 0; g < a.nd; ++g)
      tally("tower: f(u+v)=f(u)+f(v)", f.d[a.d_add(e, g)] == b.d_add(f.d[e], f.d[g]),
            [&] { return w() + ", v=" + a.d_str(g); });
    for (U32 y = 0; y < a.nr; ++y)
      tally("tower: f(u.a)=f(u).f(a)", f.d[a.d_act(e, y)] == b.d_act(f.d[e], f.r[y]),
            [&] { return w() + ", a=" + a.r_str(y); });
    for (Elt c = 0; c < nk; ++c) {
      tally("tower: f(u.k)=f(u).k", f.d[a.d_kact(e, c)] == b.d_kact(f.d[e], c), w);
      if (a.in_aug(e))
        tally("tower: f(kv)=k f(v)", f.d[a.aug_kmul(c, e)] == b.aug_kmul(c, f.d[e]), w);
    }
  }
  tally.done();
  return rep;
}

HomotopeTower::HomotopeTower(std::shared_ptr<const TableOFA> base, const std::vector<Elt>& gens)
    : base_(std::move(base)), subset_(multiplicative_closure(*base_->k, gens)) {
  for (Elt s : subset_) levels_.emplace(s, homotope_ofa(base_, s));
}

bool HomotopeTower::contains(Elt s) const { return levels_.count(s) > 0; }

const HomotopeOFA& HomotopeTower::level(Elt s) const {
  auto it = levels_.find(s);
  if (it == levels_.end()) throw InvalidInput("level " + std::to_string(s) + " is not in S");
  return it->second;
}

TowerMap HomotopeTower::map(Elt s, Elt twist) const {
  return tower_map(level(base_->k->mul(s, twist)), level(s), twist);
}

namespace {

void need_level(const HomotopeTower& t, Elt have, Elt want) {
  if (!t.contains(want) || have != want)
    throw InvalidInput("level mismatch: element at " + std::to_string(have) + ", action needs " +
                       std::to_string(want));
}

}  // namespace

HR HomotopeTower::mul_right(const HR& a, const FracR& b, Elt s) const {
  const CommRing& K = *base_->k;
  level(s);
  need_level(*this, a.level, K.mul(s, b.den));
  return {s, base_->r_mul(a.x, b.num)};
}

HR HomotopeTower::mul_left(const FracR& b, const HR& a, Elt s) const {
  const CommRing& K = *base_->k;
  level(s);
  need_level(*this, a.level, K.mul(s, b.den));
  return {s, base_->r_mul(b.num, a.x)};
}

HD HomotopeTower::act(const HD& u, const FracR& b, Elt s) const {
  const CommRing& K = *base_->k;
  const TableOFA& a = *base_;
  const HomotopeOFA& tgt = level(s);
  need_level(*this, u.level, K.mul(s, K.mul(b.den, b.den)));
  const HomotopeOFA& src = level(u.level);
  const U32 r = src.pairs.rep_m(u.x), x = src.pairs.rep_x(u.x);
  return {s, tgt.pairs.index(a.d_act(r, a.r_kmul(b.den, b.num)), a.d_act(x, b.num))};
}

HD HomotopeTower::act(const FracD& w, const HR& x, Elt s) const {
  const CommRing& K = *base_->k;
  const HomotopeOFA& tgt = level(s);
  need_level(*this, x.level, K.mul(s, w.den));
  return {s, tgt.of(base_->d_act(w.num, x.x))};
}

Report check_tower(const HomotopeTower& t) {
  Report rep;
  const CommRing& K = *t.base().k;
  for (Elt s : t.subset())
    for (Elt s1 : t.subset()) {
      TowerMap f = t.map(s, s1);
      rep.merge(check_tower_map(t.level(K.mul(s, s1)), t.level(s), f));
      Tally tally(rep);
      for (Elt s2 : t.subset()) {
        TowerMap g = t.map(K.mul(s, s1), s2);
        TowerMap h = t.map(s, K.mul(s1, s2));
        auto w = [&] {
          return "s=" + std::to_string(s) + ", s'=" + std::to_string(s1) +
                 ", s''=" + std::to_string(s2);
        };
        bool ok = true;
        for (U32 x = 0; x < g.r.size(); ++x) ok = ok && f.r[g.r[x]] == h.r[x];
        for (U32 e = 0; e < g.d.size(); ++e) ok = ok && f.d[g.d[e]] == h.d[e];
        tally("tower maps compose", ok, w);
      }
      tally.done();
    }
  return rep;
}

Report check_mixed_action(const HomotopeTower& t, Elt s, Elt sp, const CheckConfig& cfg) {
  Report rep;
  Tally tally(rep);
  const TableOFA& a = t.base();
  const CommRing& K = *a.k;
  const Elt s1 = K.mul(s, sp), s2 = K.mul(s1, sp);
  const HomotopeOFA& L0 = t.level(s);
  const HomotopeOFA& L1 = t.level(s1);
  const HomotopeOFA& L2 = t.level(s2);
  const TowerMap T = t.map(s, sp);
  const std::size_t nr = a.nr;
  const std::string tag = " [s=" + std::to_string(s) + ", s'=" + std::to_string(sp) + "]";
  auto rs = [&](U32 x) { return a.r_str(x); };

  for (U32 x = 0; x < nr; ++x)
    for (U32 b = 0; b < nr; ++b) {
      HR xb = t.mul_right({s1, x}, {b, sp}, s);
      HR bx = t.mul_left({b, sp}, {s1, x}, s);
      tally("conj(a^(ss') b/s')=conj(b)/s' conj(a)^(ss')" + tag,
            L0.alg.r_bar(xb.x) == t.mul_left({a.r_bar(b), sp}, {s1, a.r_bar(x)}, s).x,
            [&] { return "a=" + rs(x) + ", b=" + rs(b); });
      for (U32 c = 0; c < nr; ++c) {
        auto w = [&] { return "a=" + rs(x) + ", b=" + rs(b) + ", c=" + rs(c); };
        tally("(ac)^(ss') b/s' = f(a) (c^(ss') b/s')" + tag,
              t.mul_right({s1, L1.alg.r_mul(x, c)}, {b, sp}, s).x ==
                  L0.alg.r_mul(T.r[x], t.mul_right({s1, c}, {b, sp}, s).x),
              w);
        tally("b/s' (ac)^(ss') = (b/s' a^(ss')) f(c)" + tag,
              t.mul_left({b, sp}, {s1, L1.alg.r_mul(x, c)}, s).x == L0.alg.r_mul(bx.x, T.r[c]), w);
        for (Elt s3 : t.subset()) {
          const Elt mid = K.mul(s, s3), top = K.mul(mid, sp);
          HR lhs = t.mul_right(t.mul_right({top, x}, {b, sp}, mid), {c, s3}, s);
          HR rhs = t.mul_right({top, x}, {a.r_mul(b, c), K.mul(sp, s3)}, s);
          tally("(a b/s') c/s'' = a (bc/s's'')" + tag, lhs.x == rhs.x,
                [&] { return w() + ", s''=" + std::to_string(s3); });
        }
      }
    }

  // Every representative of a class of Delta^(ss'^2) gives the same result.
  for (U32 u = 0; u < a.nd; ++u)
    for (U32 v : L2.pairs.m0)
      for (U32 b = 0; b < nr; ++b) {
        U32 direct = L0.pairs.index(a.d_act(u, a.r_kmul(sp, b)), a.d_act(v, b));
        tally("u^(ss'^2).b/s' well defined" + tag,
              t.act(HD{s2, L2.pairs.index(u, v)}, {b, sp}, s).x == direct,
              [&] { return "u=" + a.d_str(u) + ", v=" + a.d_str(v) + ", b=" + rs(b); });
      }

  const TableOFA& D0 = L0.alg;
  const TableOFA& D2 = L2.alg;
  // The additivity loops are quadratic in Delta; above the cap only a
  // fixed residue class of the second argument is visited.
  const bool full_add = std::uint64_t(a.nd) * a.nd * nr <= cfg.tuple_cap;
  if (!full_add) {
    tally.sampled("(u+v).b/s' = u.b/s' + v.b/s'" + tag);
    tally.sampled("((w+w').1/s').a^(ss') = (w.1/s').a^(ss') + (w'.1/s').a^(ss')" + tag);
  }
  for (U32 e = 0; e < D2.nd; ++e)
    for (U32 b = 0; b < nr; ++b) {
      auto w = [&] { return "u=" + D2.d_str(e) + ", b=" + rs(b); };
      HD eb = t.act(HD{s2, e}, {b, sp}, s);
      tally("pi(u.b/s') = f(pi(u) b/s')" + tag,
            D0.pi(eb.x) == T.r[t.mul_right({s2, D2.pi(e)}, {b, sp}, s1).x], w);
      HR left = t.mul_left({a.r_bar(b), sp}, {s2, D2.rho(e)}, s1);
      tally("rho(u.b/s') = conj(b)/s' rho(u) b/s'" + tag,
            D0.rho(eb.x) == t.mul_right(left, {b, sp}, s).x, w);
      if (D2.in_aug(e)) tally("v.b/s' in D^(s)" + tag, D0.in_aug(eb.x), w);
      for (U32 f = 0; f < D2.nd; ++f)
        if (full_add || f % 7 == e % 7)
          tally("(u+v).b/s' = u.b/s' + v.b/s'" + tag,
                t.act(HD{s2, D2.d_add(e, f)}, {b, sp}, s).x ==
                    D0.d_add(eb.x, t.act(HD{s2, f}, {b, sp}, s).x),
                [&] { return w() + ", v=" + D2.d_str(f); });
      for (U32 c = 0; c < nr; ++c) {
        HR cr = t.mul_left({a.r_bar(c), sp}, {s2, D2.rho(e)}, s1);
        U32 corr = D0.phi(t.mul_right(cr, {b, sp}, s).x);
        U32 rhs = D0.d_add(D0.d_add(eb.x, corr), t.act(HD{s2, e}, {c, sp}, s).x);
        tally("u.(b+c)/s' = u.b/s' + phi(conj(c)/s' rho(u) b/s') + u.c/s'" + tag,
              t.act(HD{s2, e}, {a.r_add(b, c), sp}, s).x == rhs,
              [&] { return w() + ", c=" + rs(c); });
      }
    }
  for (U32 x = 0; x < nr; ++x)
    for (U32 b = 0; b < nr; ++b) {
      HD lhs = t.act(HD{s2, D2.phi(x)}, {b, sp}, s);
      HR mid = t.mul_left({a.r_bar(b), sp}, {s2, x}, s1);
      tally("phi(a).b/s' = phi(conj(b)/s' a b/s')" + tag,
            lhs.x == D0.phi(t.mul_right(mid, {b, sp}, s).x),
            [&] { return "a=" + rs(x) + ", b=" + rs(b); });
    }
  for (Elt s3 : t.subset()) {
    const Elt mid = K.mul(s, K.mul(s3, s3));
    const Elt top = K.mul(mid, K.mul(sp, sp));
    const HomotopeOFA& Lt = t.level(top);
    for (U32 e = 0; e < Lt.alg.nd; ++e)
      for (U32 b = 0; b < nr; ++b)
        for (U32 c = 0; c < nr; ++c) {
          HD lhs = t.act(t.act(HD{top, e}, {b, sp}, mid), {c, s3}, s);
          HD rhs = t.act(HD{top, e}, {a.r_mul(b, c), K.mul(sp, s3)}, s);
          tally("(u.b/s').c/s'' = u.(bc/s's'')" + tag, lhs.x == rhs.x, [&] {
            return "u=" + Lt.alg.d_str(e) + ", b=" + rs(b) + ", c=" + rs(c) +
                   ", s''=" + std::to_string(s3);
          });
        }
  }

  for (U32 w = 0; w < a.nd; ++w)
    for (U32 x = 0; x < nr; ++x) {
      auto wit = [&] { return "w=" + a.d_str(w) + ", a=" + rs(x); };
      HD wx = t.act(FracD{w, sp}, HR{s1, x}, s);
      tally("pi((w.1/s').a^(ss')) = pi(w)/s' a^(ss')" + tag,
            D0.pi(wx.x) == t.mul_left({a.pi(w), sp}, {s1, x}, s).x, wit);
      for (U32 c = 0; c < nr; ++c)
        tally("((w.1/s').a^(ss')).f(c) = (w.1/s').(ac)^(ss')" + tag,
              D0.d_act(wx.x, T.r[c]) == t.act(FracD{w, sp}, HR{s1, L1.alg.r_mul(x, c)}, s).x,
              [&] { return wit() + ", c=" + rs(c); });
      for (U32 w2 = full_add ? 0 : w % 5; w2 < a.nd; w2 += (full_add ? 1 : 5))
        tally("((w+w').1/s').a^(ss') = (w.1/s').a^(ss') + (w'.1/s').a^(ss')" + tag,
              t.act(FracD{a.d_add(w, w2), sp}, HR{s1, x}, s).x ==
                  D0.d_add(wx.x, t.act(FracD{w2, sp}, HR{s1, x}, s).x),
              [&] { return wit() + ", w'=" + a.d_str(w2); });
    }
  tally.done();
  return rep;
}

Report check_alternative_presentation(const HomotopeTower& t, Elt s) {
  Report rep;
  Tally tally(rep);
  const TableOFA& a = t.base();
  const CommRing& K = *a.k;
  const HomotopeOFA& top = t.level(K.mul(s, s));
  const HomotopeOFA& low = t.level(s);
  const TowerMap f = t.map(s, s);
  auto g = [&](U32 e) {
    return a.d_add(a.d_kact(top.pairs.rep_m(e), s), top.pairs.rep_x(e));
  };
  for (U32 u = 0; u < a.nd; ++u)
    for (U32 v : top.pairs.m0)
      tally("u^(s^2)+i(v^(s^2)) -> u.s+v well defined", g(top.pairs.index(u, v)) == a.d_add(a.d_kact(u, s), v),
            [&] { return "u=" + a.d_str(u) + ", v=" + a.d_str(v); });
  const TableOFA& d = top.alg;
  for (U32 e = 0; e < d.nd; ++e) {
    tally("factors the tower map", low.of(g(e)) == f.d[e], [&] { return "u=" + d.d_str(e); });
    for (U32 h = 0; h < d.nd; ++h)
      tally("u^(s^2) -> u.s additive", g(d.d_add(e, h)) == a.d_add(g(e), g(h)),
            [&] { return "u=" + d.d_str(e) + ", v=" + d.d_str(h); });
  }
  tally.done();
  return rep;
}

// ------------------------------------------------------------- localization

U32 LocalizedModule::cls(Elt s, U32 m) const {
  auto it = std::find(subset.begin(), subset.end(), s);
  if (it == subset.end()) throw InvalidInput("denominator is not in S");
  return pair_class[static_cast<std::size_t>(it - subset.begin()) * (canon.size()) + m];
}

LocalizedModule localize_nilmodule(const TableNilModule& m, const std::vector<Elt>& gens) {
  const CommRing& K = *m.k;
  LocalizedModule l;
  l.subset = multiplicative_closure(K, gens);
  l.loc = localize_finite(K, l.subset);
  l.ring = std::make_shared<const CommRing>(l.loc.ring);
  const std::size_t nm = m.nm, ns = l.subset.size(), np = nm * ns;
  auto pos_of = [&](Elt s) {
    return static_cast<std::size_t>(std::find(l.subset.begin(), l.subset.end(), s) - l.subset.begin());
  };
  auto equiv = [&](std::size_t i, std::size_t j) {
    const Elt s = l.subset[i / nm], t = l.subset[j / nm];
    const U32 x = static_cast<U32>(i % nm), y = static_cast<U32>(j % nm);
    for (Elt r : l.subset)
      if (m.ract(x, K.mul(t, r)) == m.ract(y, K.mul(s, r))) return true;
    return false;
  };
  l.pair_class.assign(np, LevelPairs::npos);
  for (std::size_t i = 0; i < np; ++i) {
    if (l.pair_class[i] != LevelPairs::npos) continue;
    const U32 c = static_cast<U32>(l.reps.size());
    l.reps.push_back({l.subset[i / nm], static_cast<U32>(i % nm)});
    for (std::size_t j = i; j < np; ++j)
      if (l.pair_class[j] == LevelPairs::npos && equiv(i, j)) l.pair_class[j] = c;
  }
  l.canon.resize(nm);
  const std::size_t one = pos_of(K.one());
  for (U32 x = 0; x < nm; ++x) l.canon[x] = l.pair_class[one * nm + x];
  auto cls = [&](Elt s, U32 x) { return l.pair_class[pos_of(s) * nm + x]; };

  const CommRing& L = *l.ring;
  std::vector<Elt> pre(L.size(), 0);
  std::vector<char> seen(L.size(), 0);
  for (Elt k = 0; k < K.size(); ++k)
    if (!seen[l.loc.map[k]]) {
      seen[l.loc.map[k]] = 1;
      pre[l.loc.map[k]] = k;
    }

  const std::size_t n = l.reps.size(), nl = L.size();
  TableNilModule& t = l.mod;
  t.k = l.ring;
  t.nm = n;
  t.mzero = l.canon[m.mzero];
  t.madd.resize(n * n);
  t.ract_tab.resize(n * nl);
  t.lact_tab.assign(nl * n, t.mzero);
  t.tau_tab.resize(n);
  t.m0.assign(n, 0);
  std::vector<std::pair<Elt, U32>> m0rep(n, {0, LevelPairs::npos});
  for (std::size_t i = 0; i < np; ++i) {
    const U32 c = l.pair_class[i], x = static_cast<U32>(i % nm);
    if (m.in_m0(x) && !t.m0[c]) {
      t.m0[c] = 1;
      m0rep[c] = {l.subset[i / nm], x};
    }
  }
  for (U32 c = 0; c < n; ++c) {
    const auto [s, x] = l.reps[c];
    t.names.push_back(m.str(x) + "/" + K.str(s));
    for (U32 d = 0; d < n; ++d) {
      const auto [s2, y] = l.reps[d];
      t.madd[c * n + d] = cls(K.mul(s, s2), m.add(m.ract(x, s2), m.ract(y, s)));
    }
    for (Elt k = 0; k < nl; ++k) t.ract_tab[c * nl + k] = cls(s, m.ract(x, pre[k]));
    t.tau_tab[c] = cls(s, m.tau(x));
    if (t.m0[c]) {
      const auto [s0, x0] = m0rep[c];
      for (Elt k = 0; k < nl; ++k) t.lact_tab[k * n + c] = cls(s0, m.lact(pre[k], x0));
    }
  }
  t.finalize();
  return l;
}

Report check_localization(const TableNilModule& m, const LocalizedModule& l,
                          const CheckConfig& cfg) {
  Report rep = check_nilmodule_axioms(l.mod, cfg);
  Tally tally(rep);
  const CommRing& K = *m.k;
  const CommRing& L = *l.ring;
  const TableNilModule& t = l.mod;
  const std::size_t nm = m.nm;
  auto inv = [&](Elt s) { return *L.inverse(l.loc.map[s]); };
  auto ws = [&](Elt s, U32 x) { return m.str(x) + "/" + K.str(s); };

  for (Elt s : l.subset)
    for (U32 x = 0; x < nm; ++x) {
      const U32 c = l.cls(s, x);
      tally("m.1/s = (m.1/1).(1/s)", t.ract(l.canon[x], inv(s)) == c, [&] { return ws(s, x); });
      tally("tau(m.1/s) = tau(m)/s^2", t.tau(c) == l.cls(s, m.tau(x)), [&] { return ws(s, x); });
      for (Elt s2 : l.subset)
        for (Elt k = 0; k < K.size(); ++k)
          tally("(m.1/s).(k/s') = (m.k).1/(ss')",
                t.ract(c, L.mul(l.loc.map[k], inv(s2))) == l.cls(K.mul(s, s2), m.ract(x, k)),
                [&] { return ws(s, x) + ", k=" + K.str(k) + ", s'=" + K.str(s2); });
      for (Elt s2 : l.subset)
        for (U32 y = 0; y < nm; ++y) {
          const U32 d = l.cls(s2, y);
          const Elt ss = K.mul(s, s2);
          auto w = [&] { return ws(s, x) + ", " + ws(s2, y); };
          tally("m.1/s + m'.1/s' = (m.s' + m'.s).1/(ss')",
                t.add(c, d) == l.cls(ss, m.add(m.ract(x, s2), m.ract(y, s))), w);
          tally("[m.1/s, m'.1/s'] = [m,m']/(ss')",
                nil_bracket(t, c, d) == l.cls(ss, m.lact(ss, nil_bracket(m, x, y))), w);
        }
    }
  for (U32 x = 0; x < nm; ++x) {
    auto w = [&] { return "m=" + m.str(x); };
    bool torsion = false;
    for (Elt s : l.subset) torsion = torsion || m.ract(x, s) == m.mzero;
    tally("ker(M -> S^-1 M) = S-torsion", (l.canon[x] == t.mzero) == torsion, w);
    tally("canonical map: tau", l.canon[m.tau(x)] == t.tau(l.canon[x]), w);
    tally("canonical map: M0", !m.in_m0(x) || t.in_m0(l.canon[x]), w);
    for (U32 y = 0; y < nm; ++y)
      tally("canonical map: +", l.canon[m.add(x, y)] == t.add(l.canon[x], l.canon[y]), w);
    for (Elt k = 0; k < K.size(); ++k)
      tally("canonical map: .k", l.canon[m.ract(x, k)] == t.ract(l.canon[x], l.loc.map[k]), w);
  }

  // S^{-1}(M/M0) computed directly from the cosets.
  std::vector<U32> coset(nm, LevelPairs::npos);
  std::vector<U32> reps;
  for (U32 x = 0; x < nm; ++x) {
    if (coset[x] != LevelPairs::npos) continue;
    for (U32 y = 0; y < nm; ++y)
      if (m.in_m0(y)) coset[m.add(x, y)] = static_cast<U32>(reps.size());
    reps.push_back(x);
  }
  std::vector<std::pair<Elt, U32>> classes;
  for (Elt s : l.subset)
    for (U32 c = 0; c < reps.size(); ++c) {
      bool fresh = true;
      for (const auto& [s2, c2] : classes)
        for (Elt r : l.subset)
          if (coset[m.ract(reps[c], K.mul(s2, r))] == coset[m.ract(reps[c2], K.mul(s, r))]) {
            fresh = false;
            break;
          }
      if (fresh) classes.push_back({s, c});
    }
  std::size_t n0 = 0;
  for (U32 c = 0; c < t.nm; ++c) n0 += t.in_m0(c);
  tally("|S^-1 M| = |S^-1 M0| |S^-1(M/M0)|", t.nm == n0 * classes.size(), [&] {
    return std::to_string(t.nm) + " vs " + std::to_string(n0) + "*" + std::to_string(classes.size());
  });
  tally.done();
  return rep;
}

}  // namespace oddform
