#include "oddform/oddform.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace oddform {

namespace {

template <class T>
std::vector<T> inverse_table(const std::vector<T>& add, std::size_t n, T zero) {
  std::vector<T> neg(n, zero);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (add[a * n + b] == zero) {
        neg[a] = static_cast<T>(b);
        break;
      }
  return neg;
}

std::vector<std::uint32_t> iota_vec(std::size_t n) {
  std::vector<std::uint32_t> v(n);
  std::iota(v.begin(), v.end(), 0u);
  return v;
}

}  // namespace

void TableOFA::finalize() {
  const std::size_t nk = k->size();
  if (radd.size() != nr * nr || rmul.size() != nr * nr || rbar.size() != nr ||
      rk.size() != nk * nr || dadd.size() != nd * nd || dact.size() != nd * nr ||
      dk.size() != nd * nk || phi_tab.size() != nr || pi_tab.size() != nd ||
      rho_tab.size() != nd)
    throw InvalidInput("odd form algebra tables have wrong shape");
  if (!aug.empty() && (aug.size() != nd || augk.size() != nk * nd))
    throw InvalidInput("augmentation tables have wrong shape");
  rneg = inverse_table(radd, nr, rzero);
  dneg = inverse_table(dadd, nd, dzero);
}

std::string TableOFA::r_str(R a) const {
  return a < rnames.size() ? rnames[a] : "r" + std::to_string(a);
}

std::string TableOFA::d_str(D u) const {
  return u < dnames.size() ? dnames[u] : "d" + std::to_string(u);
}

Carrier<TableOFA::R> TableOFA::r_carrier() const {
  const TableOFA* self = this;
  return listed_carrier<R>("a", iota_vec(nr), [self](const R& a) { return self->r_str(a); });
}

Carrier<TableOFA::D> TableOFA::d_carrier() const {
  const TableOFA* self = this;
  return listed_carrier<D>("u", iota_vec(nd), [self](const D& u) { return self->d_str(u); });
}

Carrier<Elt> k_carrier(const CommRing& k, const std::string& name) {
  std::vector<Elt> all(k.size());
  std::iota(all.begin(), all.end(), Elt{0});
  return listed_carrier<Elt>(name, std::move(all), [](const Elt& c) { return std::to_string(c); });
}

TableOFA zero_ofa(RingPtr k) {
  TableOFA a;
  const std::size_t nk = k->size();
  a.k = std::move(k);
  a.nr = a.nd = 1;
  a.radd = a.rmul = a.rbar = {0};
  a.rk.assign(nk, 0);
  a.dadd = a.dact = {0};
  a.dk.assign(nk, 0);
  a.phi_tab = a.pi_tab = a.rho_tab = {0};
  a.rone = 0;
  a.rnames = {"0"};
  a.dnames = {"0."};
  a.finalize();
  return a;
}

TableOFA scalar_ofa(RingPtr k) {
  TableOFA a;
  const std::size_t n = k->size();
  a.nr = n;
  a.nd = 1;
  a.radd.resize(n * n);
  a.rmul.resize(n * n);
  a.rbar.resize(n);
  a.rk.resize(n * n);
  for (std::uint32_t x = 0; x < n; ++x) {
    a.rbar[x] = x;
    a.rnames.push_back(k->str(static_cast<Elt>(x)));
    for (std::uint32_t y = 0; y < n; ++y) {
      a.radd[x * n + y] = k->add(static_cast<Elt>(x), static_cast<Elt>(y));
      a.rmul[x * n + y] = k->mul(static_cast<Elt>(x), static_cast<Elt>(y));
      a.rk[x * n + y] = a.rmul[x * n + y];
    }
  }
  a.rzero = k->zero();
  a.rone = k->one();
  a.dadd = {0};
  a.dact.assign(n, 0);
  a.dk.assign(n, 0);
  a.phi_tab.assign(n, 0);
  a.pi_tab = a.rho_tab = {k->zero()};
  a.dnames = {"0."};
  a.k = std::move(k);
  a.finalize();
  return a;
}

Report check_action_axioms(const TableAction& act, bool unital,
                           const CheckConfig& cfg) {
  const TableOFA& R = *act.src;
  const TableOFA& S = *act.tgt;
  using I = std::uint32_t;
  Report rep;
  const bool ex = R.nr * S.nd <= cfg.exhaustive_limit &&
                  S.nr * R.nd <= cfg.exhaustive_limit;
  Carrier<I> a = R.r_carrier().renamed("a"), a2 = a.renamed("a'");
  Carrier<I> b = S.r_carrier().renamed("b"), b2 = b.renamed("b'");
  Carrier<I> u = R.d_carrier().renamed("u"), u2 = u.renamed("u'");
  Carrier<I> v = S.d_carrier().renamed("v"), v2 = v.renamed("v'");
  auto chk = [&](const std::string& name, auto pred, const auto&... cs) {
    check_axiom(rep, cfg, ex, name, pred, cs...);
  };
  auto sadd = [&](I x, I y) { return S.r_add(x, y); };
  auto tadd = [&](I x, I y) { return S.d_add(x, y); };

  chk("conj(ab)=conj(b)conj(a)", [&](I x, I y) {
    return S.r_bar(act.ab(x, y)) == act.ba(S.r_bar(y), R.r_bar(x));
  }, a, b);
  chk("(a+a')b=ab+a'b", [&](I x, I x2, I y) {
    return act.ab(R.r_add(x, x2), y) == sadd(act.ab(x, y), act.ab(x2, y)) &&
           act.ba(y, R.r_add(x, x2)) == sadd(act.ba(y, x), act.ba(y, x2));
  }, a, a2, b);
  chk("a(b+b')=ab+ab'", [&](I x, I y, I y2) {
    return act.ab(x, sadd(y, y2)) == sadd(act.ab(x, y), act.ab(x, y2)) &&
           act.ba(sadd(y, y2), x) == sadd(act.ba(y, x), act.ba(y2, x));
  }, a, b, b2);
  chk("(aa')b=a(a'b)", [&](I x, I x2, I y) {
    return act.ab(R.r_mul(x, x2), y) == act.ab(x, act.ab(x2, y)) &&
           act.ba(y, R.r_mul(x, x2)) == act.ba(act.ba(y, x), x2) &&
           act.ba(act.ab(x, y), x2) == act.ab(x, act.ba(y, x2));
  }, a, a2, b);
  chk("(ab)b'=a(bb')", [&](I x, I y, I y2) {
    return S.r_mul(act.ab(x, y), y2) == act.ab(x, S.r_mul(y, y2)) &&
           S.r_mul(act.ba(y, x), y2) == S.r_mul(y, act.ab(x, y2)) &&
           S.r_mul(y, act.ba(y2, x)) == act.ba(S.r_mul(y, y2), x);
  }, a, b, b2);
  chk("(u+u').b=u.b+u'.b", [&](I x, I x2, I y) {
    return act.ub(R.d_add(x, x2), y) == tadd(act.ub(x, y), act.ub(x2, y));
  }, u, u2, b);
  chk("u.(b+b')=u.b+phi(conj(b')rho(u)b)+u.b'", [&](I x, I y, I y2) {
    I rhs = tadd(tadd(act.ub(x, y),
                      S.phi(S.r_mul(act.ba(S.r_bar(y2), R.rho(x)), y))),
                 act.ub(x, y2));
    return act.ub(x, sadd(y, y2)) == rhs;
  }, u, b, b2);
  chk("(v+v').a=v.a+v'.a", [&](I x, I x2, I y) {
    return act.va(S.d_add(x, x2), y) == tadd(act.va(x, y), act.va(x2, y));
  }, v, v2, a);
  chk("v.(a+a')=v.a+phi(conj(a')rho(v)a)+v.a'", [&](I x, I y, I y2) {
    I rhs = tadd(tadd(act.va(x, y),
                      S.phi(act.ba(act.ab(R.r_bar(y2), S.rho(x)), y))),
                 act.va(x, y2));
    return act.va(x, R.r_add(y, y2)) == rhs;
  }, v, a, a2);
  chk("(u.a).b=u.ab", [&](I x, I y, I z) {
    return act.ub(R.d_act(x, y), z) == act.ub(x, act.ab(y, z)) &&
           act.va(act.ub(x, z), y) == act.ub(x, act.ba(z, y));
  }, u, a, b);
  chk("(u.b).b'=u.bb'", [&](I x, I y, I y2) {
    return S.d_act(act.ub(x, y), y2) == act.ub(x, S.r_mul(y, y2));
  }, u, b, b2);
  chk("(v.a).b=v.ab", [&](I x, I y, I z) {
    return S.d_act(act.va(x, y), z) == S.d_act(x, act.ab(y, z)) &&
           act.va(S.d_act(x, z), y) == S.d_act(x, act.ba(z, y));
  }, v, a, b);
  chk("(v.a).a'=v.aa'", [&](I x, I y, I y2) {
    return act.va(act.va(x, y), y2) == act.va(x, R.r_mul(y, y2));
  }, v, a, a2);
  chk("phi(a).b=phi(conj(b)ab)", [&](I x, I y) {
    return act.ub(R.phi(x), y) == S.phi(S.r_mul(S.r_bar(y), act.ab(x, y)));
  }, a, b);
  chk("phi(b).a=phi(conj(a)ba)", [&](I y, I x) {
    return act.va(S.phi(y), x) == S.phi(act.ab(R.r_bar(x), act.ba(y, x)));
  }, b, a);
  chk("pi(u.b)=pi(u)b", [&](I x, I y) {
    return S.pi(act.ub(x, y)) == act.ab(R.pi(x), y);
  }, u, b);
  chk("pi(v.a)=pi(v)a", [&](I w, I z) {
    return S.pi(act.va(w, z)) == act.ba(S.pi(w), z);
  }, v, a);
  chk("rho(u.b)=conj(b)rho(u)b", [&](I x, I y) {
    return S.rho(act.ub(x, y)) == S.r_mul(act.ba(S.r_bar(y), R.rho(x)), y);
  }, u, b);
  chk("rho(v.a)=conj(a)rho(v)a", [&](I x, I y) {
    return S.rho(act.va(x, y)) == act.ba(act.ab(R.r_bar(y), S.rho(x)), y);
  }, v, a);
  if (unital) {
    if (!R.rone) throw InvalidInput("unital action needs a unital source");
    I one = *R.rone;
    chk("b1=b=1b", [&](I y) { return act.ab(one, y) == y && act.ba(y, one) == y; }, b);
    chk("v.1=v", [&](I x) { return act.va(x, one) == x; }, v);
  }
  return rep;
}

TableAction scalar_action(const TableOFA& scalars, const TableOFA& alg) {
  if (scalars.nd != 1 || scalars.nr != alg.k->size())
    throw InvalidInput("source must be (K, 0) for the base ring of the algebra");
  TableAction act;
  act.src = &scalars;
  act.tgt = &alg;
  const std::size_t nk = scalars.nr, ns = alg.nr;
  act.rs.resize(nk * ns);
  act.sr.resize(ns * nk);
  for (std::uint32_t c = 0; c < nk; ++c)
    for (std::uint32_t b = 0; b < ns; ++b) {
      act.rs[c * ns + b] = alg.r_kmul(static_cast<Elt>(c), b);
      act.sr[b * nk + c] = alg.r_kmul(static_cast<Elt>(c), b);
    }
  act.tr.resize(alg.nd * nk);
  for (std::uint32_t v = 0; v < alg.nd; ++v)
    for (std::uint32_t c = 0; c < nk; ++c)
      act.tr[v * nk + c] = alg.d_kact(v, static_cast<Elt>(c));
  act.ds.assign(ns, alg.dzero);
  return act;
}

TableOFA semidirect(const TableAction& act) {
  const TableOFA& R = *act.src;
  const TableOFA& S = *act.tgt;
  if (R.k->size() != S.k->size()) throw InvalidInput("base rings differ");
  TableOFA out;
  out.k = S.k;
  const std::size_t nk = S.k->size();
  out.nr = S.nr * R.nr;
  out.nd = S.nd * R.nd;
  auto rid = [&](std::uint32_t b, std::uint32_t a) { return b * R.nr + a; };
  auto did = [&](std::uint32_t v, std::uint32_t u) { return v * R.nd + u; };
  out.radd.resize(out.nr * out.nr);
  out.rmul.resize(out.nr * out.nr);
  out.rbar.resize(out.nr);
  out.rk.resize(nk * out.nr);
  out.phi_tab.resize(out.nr);
  for (std::uint32_t b = 0; b < S.nr; ++b)
    for (std::uint32_t a = 0; a < R.nr; ++a) {
      std::uint32_t x = rid(b, a);
      out.rbar[x] = rid(S.r_bar(b), R.r_bar(a));
      out.phi_tab[x] = did(S.phi(b), R.phi(a));
      out.rnames.push_back("(" + S.r_str(b) + "," + R.r_str(a) + ")");
      for (Elt c = 0; c < nk; ++c)
        out.rk[c * out.nr + x] = rid(S.r_kmul(c, b), R.r_kmul(c, a));
      for (std::uint32_t b2 = 0; b2 < S.nr; ++b2)
        for (std::uint32_t a2 = 0; a2 < R.nr; ++a2) {
          std::uint32_t y = rid(b2, a2);
          out.radd[x * out.nr + y] = rid(S.r_add(b, b2), R.r_add(a, a2));
          std::uint32_t prod =
              S.r_add(S.r_add(S.r_mul(b, b2), act.ab(a, b2)), act.ba(b, a2));
          out.rmul[x * out.nr + y] = rid(prod, R.r_mul(a, a2));
        }
    }
  out.rzero = rid(S.rzero, R.rzero);
  if (R.rone) out.rone = rid(S.rzero, *R.rone);
  out.dadd.resize(out.nd * out.nd);
  out.dact.resize(out.nd * out.nr);
  out.dk.resize(out.nd * nk);
  out.pi_tab.resize(out.nd);
  out.rho_tab.resize(out.nd);
  for (std::uint32_t v = 0; v < S.nd; ++v)
    for (std::uint32_t u = 0; u < R.nd; ++u) {
      std::uint32_t x = did(v, u);
      out.dnames.push_back("(" + S.d_str(v) + "," + R.d_str(u) + ")");
      out.pi_tab[x] = rid(S.pi(v), R.pi(u));
      out.rho_tab[x] = rid(
          S.r_add(S.rho(v), S.r_neg(act.ba(S.r_bar(S.pi(v)), R.pi(u)))), R.rho(u));
      for (std::uint32_t v2 = 0; v2 < S.nd; ++v2)
        for (std::uint32_t u2 = 0; u2 < R.nd; ++u2) {
          // (v + u) + (v' + u') = (v + [u, v'] + v', u + u').
          std::uint32_t comm =
              S.phi(S.r_neg(act.ab(R.r_bar(R.pi(u)), S.pi(v2))));
          out.dadd[x * out.nd + did(v2, u2)] =
              did(S.d_add(S.d_add(v, comm), v2), R.d_add(u, u2));
        }
      for (std::uint32_t b = 0; b < S.nr; ++b)
        for (std::uint32_t a = 0; a < R.nr; ++a) {
          std::uint32_t ra = R.r_bar(a);
          std::uint32_t corr = S.r_add(S.r_mul(act.ab(ra, S.rho(v)), b),
                                       act.ab(ra, act.ab(R.rho(u), b)));
          std::uint32_t first = S.d_add(
              S.d_add(S.d_add(S.d_act(v, b), act.va(v, a)), act.ub(u, b)), S.phi(corr));
          out.dact[x * out.nr + rid(b, a)] = did(first, R.d_act(u, a));
        }
      for (Elt c = 0; c < nk; ++c) out.dk[x * nk + c] = did(S.d_kact(v, c), R.d_kact(u, c));
    }
  out.dzero = did(S.dzero, R.dzero);
  out.finalize();
  return out;
}

std::vector<std::string> check_ideal(const TableOFA& a, const OddFormIdeal& id) {
  std::vector<std::string> out;
  std::vector<char> in_i(a.nr, 0), in_g(a.nd, 0);
  for (auto x : id.ideal) in_i[x] = 1;
  for (auto u : id.gamma) in_g[u] = 1;
  if (!in_i[a.rzero]) out.push_back("0 not in I");
  if (!in_g[a.dzero]) out.push_back("0 not in Gamma");
  for (auto x : id.ideal) {
    if (!in_i[a.r_bar(x)]) out.push_back("I is not involution-stable at " + a.r_str(x));
    for (std::uint32_t y = 0; y < a.nr; ++y) {
      if (!in_i[a.r_mul(x, y)] || !in_i[a.r_mul(y, x)])
        out.push_back("I is not an ideal at " + a.r_str(x));
      if (in_i[y] && !in_i[a.r_add(x, y)]) out.push_back("I is not additive");
    }
    for (Elt c = 0; c < a.k->size(); ++c)
      if (!in_i[a.r_kmul(c, x)]) out.push_back("I is not a K-submodule");
    if (out.size() > 8) return out;
  }
  for (auto u : id.gamma) {
    if (!in_i[a.pi(u)] || !in_i[a.rho(u)])
      out.push_back("Gamma not inside {u : pi(u), rho(u) in I} at " + a.d_str(u));
    if (!in_g[a.d_neg(u)]) out.push_back("Gamma not closed under negation");
    for (auto v : id.gamma)
      if (!in_g[a.d_add(u, v)]) {
        out.push_back("Gamma not closed under addition");
        break;
      }
    for (std::uint32_t y = 0; y < a.nr; ++y)
      if (!in_g[a.d_act(u, y)]) {
        out.push_back("Gamma not R-stable at " + a.d_str(u));
        break;
      }
    if (out.size() > 8) return out;
  }
  for (std::uint32_t u = 0; u < a.nd; ++u)
    for (auto x : id.ideal)
      if (!in_g[a.d_act(u, x)]) {
        out.push_back("Delta.I not inside Gamma at " + a.d_str(u) + "," + a.r_str(x));
        return out;
      }
  for (std::uint32_t x = 0; x < a.nr; ++x)
    if (in_i[a.r_add(x, a.r_neg(a.r_bar(x)))] && !in_g[a.phi(x)]) {
      out.push_back("phi({a : a - conj(a) in I}) not inside Gamma at " + a.r_str(x));
      return out;
    }
  return out;
}

std::vector<TableOFA::R> generated_ideal(const TableOFA& a,
                                         const std::vector<TableOFA::R>& gens) {
  std::vector<char> in(a.nr, 0);
  std::vector<std::uint32_t> members, todo(gens.begin(), gens.end());
  todo.push_back(a.rzero);
  while (!todo.empty()) {
    auto x = todo.back();
    todo.pop_back();
    if (in[x]) continue;
    in[x] = 1;
    const std::size_t cur = members.size();
    members.push_back(x);
    for (std::size_t i = 0; i < cur; ++i) todo.push_back(a.r_add(members[i], x));
    todo.push_back(a.r_add(x, x));
    todo.push_back(a.r_bar(x));
    todo.push_back(a.r_neg(x));
    for (std::uint32_t y = 0; y < a.nr; ++y) {
      todo.push_back(a.r_mul(x, y));
      todo.push_back(a.r_mul(y, x));
    }
    for (Elt c = 0; c < a.k->size(); ++c) todo.push_back(a.r_kmul(c, x));
  }
  std::sort(members.begin(), members.end());
  return members;
}

OddFormIdeal minimal_ideal(const TableOFA& a, const std::vector<TableOFA::R>& ideal) {
  std::vector<char> in_i(a.nr, 0), in_g(a.nd, 0);
  for (auto x : ideal) in_i[x] = 1;
  std::vector<std::uint32_t> gens;
  for (std::uint32_t u = 0; u < a.nd; ++u)
    for (auto x : ideal) gens.push_back(a.d_act(u, x));
  for (std::uint32_t x = 0; x < a.nr; ++x)
    if (in_i[a.r_add(x, a.r_neg(a.r_bar(x)))]) gens.push_back(a.phi(x));
  std::vector<std::uint32_t> members, todo = gens;
  todo.push_back(a.dzero);
  while (!todo.empty()) {
    auto u = todo.back();
    todo.pop_back();
    if (in_g[u]) continue;
    in_g[u] = 1;
    const std::size_t cur = members.size();
    members.push_back(u);
    for (std::size_t i = 0; i < cur; ++i) {
      todo.push_back(a.d_add(members[i], u));
      todo.push_back(a.d_add(u, members[i]));
    }
    todo.push_back(a.d_add(u, u));
    todo.push_back(a.d_neg(u));
    for (std::uint32_t y = 0; y < a.nr; ++y) todo.push_back(a.d_act(u, y));
  }
  std::sort(members.begin(), members.end());
  return {ideal, members};
}

TableOFA quotient(const TableOFA& a, const OddFormIdeal& id) {
  if (auto bad = check_ideal(a, id); !bad.empty())
    throw InvalidInput("not an odd form ideal: " + bad.front());
  const std::uint32_t none = 0xFFFFFFFFu;
  std::vector<std::uint32_t> rmap(a.nr, none), dmap(a.nd, none), rreps, dreps;
  for (std::uint32_t x = 0; x < a.nr; ++x) {
    if (rmap[x] != none) continue;
    auto c = static_cast<std::uint32_t>(rreps.size());
    rreps.push_back(x);
    for (auto i : id.ideal) rmap[a.r_add(x, i)] = c;
  }
  for (std::uint32_t u = 0; u < a.nd; ++u) {
    if (dmap[u] != none) continue;
    auto c = static_cast<std::uint32_t>(dreps.size());
    dreps.push_back(u);
    for (auto g : id.gamma) dmap[a.d_add(u, g)] = c;
  }
  TableOFA q;
  q.k = a.k;
  const std::size_t nk = a.k->size();
  q.nr = rreps.size();
  q.nd = dreps.size();
  q.radd.resize(q.nr * q.nr);
  q.rmul.resize(q.nr * q.nr);
  q.rbar.resize(q.nr);
  q.rk.resize(nk * q.nr);
  q.phi_tab.resize(q.nr);
  for (std::uint32_t i = 0; i < q.nr; ++i) {
    auto x = rreps[i];
    q.rbar[i] = rmap[a.r_bar(x)];
    q.phi_tab[i] = dmap[a.phi(x)];
    q.rnames.push_back("[" + a.r_str(x) + "]");
    for (Elt c = 0; c < nk; ++c) q.rk[c * q.nr + i] = rmap[a.r_kmul(c, x)];
    for (std::uint32_t j = 0; j < q.nr; ++j) {
      q.radd[i * q.nr + j] = rmap[a.r_add(x, rreps[j])];
      q.rmul[i * q.nr + j] = rmap[a.r_mul(x, rreps[j])];
    }
  }
  q.dadd.resize(q.nd * q.nd);
  q.dact.resize(q.nd * q.nr);
  q.dk.resize(q.nd * nk);
  q.pi_tab.resize(q.nd);
  q.rho_tab.resize(q.nd);
  for (std::uint32_t i = 0; i < q.nd; ++i) {
    auto u = dreps[i];
    q.pi_tab[i] = rmap[a.pi(u)];
    q.rho_tab[i] = rmap[a.rho(u)];
    q.dnames.push_back("[" + a.d_str(u) + "]");
    for (std::uint32_t j = 0; j < q.nd; ++j) q.dadd[i * q.nd + j] = dmap[a.d_add(u, dreps[j])];
    for (std::uint32_t j = 0; j < q.nr; ++j) q.dact[i * q.nr + j] = dmap[a.d_act(u, rreps[j])];
    for (Elt c = 0; c < nk; ++c) q.dk[i * nk + c] = dmap[a.d_kact(u, c)];
  }
  q.rzero = rmap[a.rzero];
  q.dzero = dmap[a.dzero];
  if (a.rone) q.rone = rmap[*a.rone];
  q.finalize();
  return q;
}

TableOFA min_augmentation(const TableOFA& a) {
  TableOFA out = a;
  const std::size_t nk = a.k->size();
  out.aug.assign(a.nd, 0);
  out.augk.assign(nk * a.nd, a.dzero);
  std::vector<char> set(nk * a.nd, 0);
  for (std::uint32_t x = 0; x < a.nr; ++x) {
    auto v = a.phi(x);
    out.aug[v] = 1;
    for (Elt c = 0; c < nk; ++c) {
      auto img = a.phi(a.r_kmul(c, x));
      if (set[c * a.nd + v] && out.augk[c * a.nd + v] != img)
        throw InvalidInput("k phi(a) = phi(ka) is not well defined");
      set[c * a.nd + v] = 1;
      out.augk[c * a.nd + v] = img;
    }
  }
  return out;
}

void TableNilModule::finalize() {
  if (madd.size() != nm * nm || m0.size() != nm || ract_tab.size() != nm * k->size() ||
      lact_tab.size() != k->size() * nm || tau_tab.size() != nm)
    throw InvalidInput("nilpotent module tables have wrong shape");
  mneg = inverse_table(madd, nm, mzero);
}

std::string TableNilModule::str(M x) const {
  return x < names.size() ? names[x] : "m" + std::to_string(x);
}

Carrier<TableNilModule::M> TableNilModule::m_carrier() const {
  const TableNilModule* self = this;
  return listed_carrier<M>("m", iota_vec(nm), [self](const M& x) { return self->str(x); });
}

Carrier<TableNilModule::M> TableNilModule::m0_carrier() const {
  std::vector<M> members;
  for (M x = 0; x < nm; ++x)
    if (m0[x]) members.push_back(x);
  const TableNilModule* self = this;
  return listed_carrier<M>("x", std::move(members), [self](const M& x) { return self->str(x); });
}

}  // namespace oddform
