#pragma once

// Odd form algebras given by explicit tables, the generic axiom checkers,
// actions, semidirect products, quotients and augmentations.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oddform/report.hpp"
#include "oddform/ring.hpp"

namespace oddform {

/// Interface shared by every odd form K-algebra implementation:
/// R and D element types, ring and group operations, phi, pi, rho, the
/// right action u.a, the K-actions, optional augmentation, and carriers.
template <class A>
concept OddFormStructure = requires(const A& a, const typename A::R& x,
                                    const typename A::D& u, Elt k) {
  { a.base() } -> std::same_as<const CommRing&>;
  { a.r_add(x, x) } -> std::same_as<typename A::R>;
  { a.r_neg(x) } -> std::same_as<typename A::R>;
  { a.r_mul(x, x) } -> std::same_as<typename A::R>;
  { a.r_bar(x) } -> std::same_as<typename A::R>;
  { a.r_zero() } -> std::same_as<typename A::R>;
  { a.r_kmul(k, x) } -> std::same_as<typename A::R>;
  { a.d_add(u, u) } -> std::same_as<typename A::D>;
  { a.d_neg(u) } -> std::same_as<typename A::D>;
  { a.d_zero() } -> std::same_as<typename A::D>;
  { a.phi(x) } -> std::same_as<typename A::D>;
  { a.pi(u) } -> std::same_as<typename A::R>;
  { a.rho(u) } -> std::same_as<typename A::R>;
  { a.d_act(u, x) } -> std::same_as<typename A::D>;
  { a.d_kact(u, k) } -> std::same_as<typename A::D>;
  { a.is_unital() } -> std::same_as<bool>;
  { a.has_aug() } -> std::same_as<bool>;
  { a.in_aug(u) } -> std::same_as<bool>;
  { a.aug_kmul(k, u) } -> std::same_as<typename A::D>;
  { a.r_carrier() } -> std::same_as<Carrier<typename A::R>>;
  { a.d_carrier() } -> std::same_as<Carrier<typename A::D>>;
  { a.exhaustive_ok(std::uint64_t{}) } -> std::same_as<bool>;
};

/// Explicit finite odd form K-algebra. Elements of R and of Delta are
/// indices; all operations are table lookups.
struct TableOFA {
  using R = std::uint32_t;
  using D = std::uint32_t;

  RingPtr k;
  std::size_t nr = 0, nd = 0;
  std::vector<R> radd, rmul, rneg, rbar, rk;  // rk[c * nr + a] = c a
  std::vector<D> dadd, dneg, dact, dk;        // dact[u * nr + a], dk[u * |K| + c]
  std::vector<D> phi_tab;
  std::vector<R> pi_tab, rho_tab;
  R rzero = 0;
  D dzero = 0;
  std::optional<R> rone;
  std::vector<char> aug;  // membership in D; empty when not augmented
  std::vector<D> augk;    // augk[c * nd + v] = c v for v in D
  std::vector<std::string> rnames, dnames;

  /// Fills rneg and dneg from the addition tables and checks shapes.
  void finalize();

  const CommRing& base() const { return *k; }
  R r_add(R a, R b) const { return radd[a * nr + b]; }
  R r_neg(R a) const { return rneg[a]; }
  R r_mul(R a, R b) const { return rmul[a * nr + b]; }
  R r_bar(R a) const { return rbar[a]; }
  R r_zero() const { return rzero; }
  R r_one() const { return *rone; }
  R r_kmul(Elt c, R a) const { return rk[c * nr + a]; }
  D d_add(D u, D v) const { return dadd[u * nd + v]; }
  D d_neg(D u) const { return dneg[u]; }
  D d_zero() const { return dzero; }
  D phi(R a) const { return phi_tab[a]; }
  R pi(D u) const { return pi_tab[u]; }
  R rho(D u) const { return rho_tab[u]; }
  D d_act(D u, R a) const { return dact[u * nr + a]; }
  D d_kact(D u, Elt c) const { return dk[u * k->size() + c]; }
  bool is_unital() const { return rone.has_value(); }
  bool has_aug() const { return !aug.empty(); }
  bool in_aug(D u) const { return !aug.empty() && aug[u]; }
  D aug_kmul(Elt c, D u) const { return augk[c * nd + u]; }
  std::string r_str(R a) const;
  std::string d_str(D u) const;
  Carrier<R> r_carrier() const;
  Carrier<D> d_carrier() const;
  bool exhaustive_ok(std::uint64_t limit) const { return nr * nd <= limit; }
};

/// The zero odd form algebra over K.
TableOFA zero_ofa(RingPtr k);
/// (K, 0) with trivial involution.
TableOFA scalar_ofa(RingPtr k);

Carrier<Elt> k_carrier(const CommRing& k, const std::string& name = "k");

/// All axioms of an odd form K-algebra, the derived identities, and the
/// augmentation axioms when an augmentation is present.
template <OddFormStructure A>
Report check_ofa_axioms(const A& a, const CheckConfig& cfg = {}) {
  using RE = typename A::R;
  using DE = typename A::D;
  Report rep;
  const bool ex = a.exhaustive_ok(cfg.exhaustive_limit);
  const Carrier<RE> ra = a.r_carrier().renamed("a"), rb = ra.renamed("b"),
                    rc = ra.renamed("c");
  const Carrier<DE> du = a.d_carrier().renamed("u"), dv = du.renamed("v");
  const Carrier<Elt> kk = k_carrier(a.base(), "k"), kl = kk.renamed("l");
  const CommRing& K = a.base();
  auto rsub = [&](const RE& x, const RE& y) { return a.r_add(x, a.r_neg(y)); };
  auto chk = [&](const std::string& name, auto pred, const auto&... cs) {
    check_axiom(rep, cfg, ex, name, pred, cs...);
  };

  // Ring with involution.
  chk("(ab)c=a(bc)", [&](const RE& x, const RE& y, const RE& z) {
    return a.r_mul(a.r_mul(x, y), z) == a.r_mul(x, a.r_mul(y, z));
  }, ra, rb, rc);
  chk("(a+b)c=ac+bc", [&](const RE& x, const RE& y, const RE& z) {
    return a.r_mul(a.r_add(x, y), z) == a.r_add(a.r_mul(x, z), a.r_mul(y, z)) &&
           a.r_mul(z, a.r_add(x, y)) == a.r_add(a.r_mul(z, x), a.r_mul(z, y));
  }, ra, rb, rc);
  chk("a+b=b+a", [&](const RE& x, const RE& y) {
    return a.r_add(x, y) == a.r_add(y, x);
  }, ra, rb);
  chk("(a+b)+c=a+(b+c)", [&](const RE& x, const RE& y, const RE& z) {
    return a.r_add(a.r_add(x, y), z) == a.r_add(x, a.r_add(y, z));
  }, ra, rb, rc);
  chk("a-a=0", [&](const RE& x) {
    return a.r_add(x, a.r_neg(x)) == a.r_zero() && a.r_add(x, a.r_zero()) == x;
  }, ra);
  chk("conj(ab)=conj(b)conj(a)", [&](const RE& x, const RE& y) {
    return a.r_bar(a.r_mul(x, y)) == a.r_mul(a.r_bar(y), a.r_bar(x)) &&
           a.r_bar(a.r_add(x, y)) == a.r_add(a.r_bar(x), a.r_bar(y));
  }, ra, rb);
  chk("conj(conj(a))=a", [&](const RE& x) { return a.r_bar(a.r_bar(x)) == x; }, ra);
  if (a.is_unital()) {
    chk("1a=a=a1", [&](const RE& x) {
      return a.r_mul(a.r_one(), x) == x && a.r_mul(x, a.r_one()) == x;
    }, ra);
    chk("u.1=u", [&](const DE& u) { return a.d_act(u, a.r_one()) == u; }, du);
  }

  // Delta is a group acted on by the multiplicative monoid of R.
  chk("(u+v)+w=u+(v+w)", [&](const DE& u, const DE& v, const DE& w) {
    return a.d_add(a.d_add(u, v), w) == a.d_add(u, a.d_add(v, w));
  }, du, dv, du.renamed("w"));
  chk("u-u=0", [&](const DE& u) {
    return a.d_add(u, a.d_neg(u)) == a.d_zero() && a.d_add(u, a.d_zero()) == u &&
           a.d_add(a.d_zero(), u) == u;
  }, du);
  chk("(u+v).a=u.a+v.a", [&](const DE& u, const DE& v, const RE& x) {
    return a.d_act(a.d_add(u, v), x) == a.d_add(a.d_act(u, x), a.d_act(v, x));
  }, du, dv, ra);
  chk("(u.a).b=u.ab", [&](const DE& u, const RE& x, const RE& y) {
    return a.d_act(a.d_act(u, x), y) == a.d_act(u, a.r_mul(x, y));
  }, du, ra, rb);

  // The odd form ring axioms.
  chk("pi(u+v)=pi(u)+pi(v)", [&](const DE& u, const DE& v) {
    return a.pi(a.d_add(u, v)) == a.r_add(a.pi(u), a.pi(v));
  }, du, dv);
  chk("pi(u.a)=pi(u)a", [&](const DE& u, const RE& x) {
    return a.pi(a.d_act(u, x)) == a.r_mul(a.pi(u), x);
  }, du, ra);
  chk("phi(a+b)=phi(a)+phi(b)", [&](const RE& x, const RE& y) {
    return a.phi(a.r_add(x, y)) == a.d_add(a.phi(x), a.phi(y));
  }, ra, rb);
  chk("phi(b).a=phi(conj(a)ba)", [&](const RE& y, const RE& x) {
    return a.d_act(a.phi(y), x) == a.phi(a.r_mul(a.r_mul(a.r_bar(x), y), x));
  }, rb, ra);
  chk("rho(u+v)=rho(u)-conj(pi(u))pi(v)+rho(v)", [&](const DE& u, const DE& v) {
    return a.rho(a.d_add(u, v)) ==
           a.r_add(rsub(a.rho(u), a.r_mul(a.r_bar(a.pi(u)), a.pi(v))), a.rho(v));
  }, du, dv);
  chk("rho(u.a)=conj(a)rho(u)a", [&](const DE& u, const RE& x) {
    return a.rho(a.d_act(u, x)) == a.r_mul(a.r_mul(a.r_bar(x), a.rho(u)), x);
  }, du, ra);
  chk("rho+conj(rho)+conj(pi)pi=0", [&](const DE& u) {
    RE r = a.rho(u), p = a.pi(u);
    return a.r_add(a.r_add(r, a.r_bar(r)), a.r_mul(a.r_bar(p), p)) == a.r_zero();
  }, du);
  chk("pi(phi(a))=0", [&](const RE& x) { return a.pi(a.phi(x)) == a.r_zero(); }, ra);
  chk("rho(phi(a))=a-conj(a)", [&](const RE& x) {
    return a.rho(a.phi(x)) == rsub(x, a.r_bar(x));
  }, ra);
  chk("[u,v]=phi(-conj(pi(u))pi(v))", [&](const DE& u, const DE& v) {
    DE c = a.d_add(a.d_add(a.d_add(u, v), a.d_neg(u)), a.d_neg(v));
    return c == a.phi(a.r_neg(a.r_mul(a.r_bar(a.pi(u)), a.pi(v))));
  }, du, dv);
  chk("phi(a)=0 if a=conj(a)", [&](const RE& x) {
    return x != a.r_bar(x) || a.phi(x) == a.d_zero();
  }, ra);
  chk("u.(a+b)=u.a+phi(conj(b)rho(u)a)+u.b", [&](const DE& u, const RE& x, const RE& y) {
    DE lhs = a.d_act(u, a.r_add(x, y));
    DE rhs = a.d_add(a.d_add(a.d_act(u, x),
                             a.phi(a.r_mul(a.r_mul(a.r_bar(y), a.rho(u)), x))),
                     a.d_act(u, y));
    return lhs == rhs;
  }, du, ra, rb);

  // Consequences.
  chk("rho(0)=0", [&](const DE&) { return a.rho(a.d_zero()) == a.r_zero(); }, du);
  chk("rho(-u)=conj(rho(u))", [&](const DE& u) {
    return a.rho(a.d_neg(u)) == a.r_bar(a.rho(u));
  }, du);
  chk("u.0=0", [&](const DE& u) { return a.d_act(u, a.r_zero()) == a.d_zero(); }, du);

  // Unital action of (K, 0).
  chk("ka=ak, K-bilinear", [&](Elt c, const RE& x, const RE& y) {
    return a.r_kmul(c, a.r_mul(x, y)) == a.r_mul(a.r_kmul(c, x), y) &&
           a.r_kmul(c, a.r_mul(x, y)) == a.r_mul(x, a.r_kmul(c, y)) &&
           a.r_kmul(c, a.r_add(x, y)) == a.r_add(a.r_kmul(c, x), a.r_kmul(c, y)) &&
           a.r_bar(a.r_kmul(c, x)) == a.r_kmul(c, a.r_bar(x));
  }, kk, ra, rb);
  chk("(k+l)a=ka+la, (kl)a=k(la), 1a=a", [&](Elt c, Elt d, const RE& x) {
    return a.r_kmul(K.add(c, d), x) == a.r_add(a.r_kmul(c, x), a.r_kmul(d, x)) &&
           a.r_kmul(K.mul(c, d), x) == a.r_kmul(c, a.r_kmul(d, x)) &&
           a.r_kmul(K.one(), x) == x;
  }, kk, kl, ra);
  chk("(u+v).k=u.k+v.k", [&](const DE& u, const DE& v, Elt c) {
    return a.d_kact(a.d_add(u, v), c) == a.d_add(a.d_kact(u, c), a.d_kact(v, c));
  }, du, dv, kk);
  chk("u.(k+l)=u.k+phi(l rho(u) k)+u.l", [&](const DE& u, Elt c, Elt d) {
    DE lhs = a.d_kact(u, K.add(c, d));
    DE rhs = a.d_add(a.d_add(a.d_kact(u, c), a.phi(a.r_kmul(K.mul(c, d), a.rho(u)))),
                     a.d_kact(u, d));
    return lhs == rhs;
  }, du, kk, kl);
  chk("(u.k).l=u.kl, u.1=u", [&](const DE& u, Elt c, Elt d) {
    return a.d_kact(a.d_kact(u, c), d) == a.d_kact(u, K.mul(c, d)) &&
           a.d_kact(u, K.one()) == u;
  }, du, kk, kl);
  chk("(u.a).k=u.ak=(u.k).a", [&](const DE& u, const RE& x, Elt c) {
    DE v = a.d_act(u, a.r_kmul(c, x));
    return a.d_kact(a.d_act(u, x), c) == v && a.d_act(a.d_kact(u, c), x) == v;
  }, du, ra, kk);
  chk("pi(u.k)=k pi(u), rho(u.k)=k^2 rho(u)", [&](const DE& u, Elt c) {
    return a.pi(a.d_kact(u, c)) == a.r_kmul(c, a.pi(u)) &&
           a.rho(a.d_kact(u, c)) == a.r_kmul(K.mul(c, c), a.rho(u));
  }, du, kk);
  chk("phi(a).k=phi(k^2 a)", [&](const RE& x, Elt c) {
    return a.d_kact(a.phi(x), c) == a.phi(a.r_kmul(K.mul(c, c), x));
  }, ra, kk);

  if (a.has_aug()) {
    Carrier<DE> aug = du;
    {
      std::vector<DE> members;
      if (du.enumerable) {
        for (const auto& u : *du.all)
          if (a.in_aug(u)) members.push_back(u);
        aug = listed_carrier<DE>("v", std::move(members), du.str);
      } else if constexpr (requires { a.aug_carrier(); }) {
        aug = a.aug_carrier().renamed("v");
      } else {
        aug = sampled_carrier<DE>(
            "v", [&a, src = du](Rng& rng) { return a.phi(a.pi(src.draw(rng))); }, du.str);
      }
    }
    chk("phi(a) in D, phi(ka)=k phi(a)", [&](const RE& x, Elt c) {
      return a.in_aug(a.phi(x)) && a.phi(a.r_kmul(c, x)) == a.aug_kmul(c, a.phi(x));
    }, ra, kk);
    chk("D subgroup, R-stable", [&](const DE& v, const DE& w, const RE& x) {
      return a.in_aug(a.d_add(v, w)) && a.in_aug(a.d_neg(v)) && a.in_aug(a.d_act(v, x));
    }, aug, aug.renamed("w"), ra);
    chk("pi(v)=0, v.k=k^2 v", [&](const DE& v, Elt c) {
      return a.pi(v) == a.r_zero() && a.d_kact(v, c) == a.aug_kmul(K.mul(c, c), v);
    }, aug, kk);
    chk("rho(kv)=k rho(v), (kv).a=k(v.a)", [&](const DE& v, Elt c, const RE& x) {
      DE kv = a.aug_kmul(c, v);
      return a.in_aug(kv) && a.rho(kv) == a.r_kmul(c, a.rho(v)) &&
             a.d_act(kv, x) == a.aug_kmul(c, a.d_act(v, x));
    }, aug, kk, ra);
    chk("D is a K-module", [&](const DE& v, const DE& w, Elt c, Elt d) {
      return a.aug_kmul(c, a.d_add(v, w)) == a.d_add(a.aug_kmul(c, v), a.aug_kmul(c, w)) &&
             a.aug_kmul(K.add(c, d), v) == a.d_add(a.aug_kmul(c, v), a.aug_kmul(d, v)) &&
             a.aug_kmul(K.mul(c, d), v) == a.aug_kmul(c, a.aug_kmul(d, v)) &&
             a.aug_kmul(K.one(), v) == v;
    }, aug, aug.renamed("w"), kk, kl);
  }
  return rep;
}

/// Interface of a 2-step nilpotent K-module (M, M0).
template <class N>
concept NilModuleStructure = requires(const N& m, const typename N::M& x, Elt k) {
  { m.base() } -> std::same_as<const CommRing&>;
  { m.add(x, x) } -> std::same_as<typename N::M>;
  { m.neg(x) } -> std::same_as<typename N::M>;
  { m.zero() } -> std::same_as<typename N::M>;
  { m.in_m0(x) } -> std::same_as<bool>;
  { m.ract(x, k) } -> std::same_as<typename N::M>;
  { m.lact(k, x) } -> std::same_as<typename N::M>;
  { m.tau(x) } -> std::same_as<typename N::M>;
  { m.m_carrier() } -> std::same_as<Carrier<typename N::M>>;
  { m.m0_carrier() } -> std::same_as<Carrier<typename N::M>>;
  { m.exhaustive_ok(std::uint64_t{}) } -> std::same_as<bool>;
};

template <NilModuleStructure N>
typename N::M nil_bracket(const N& m, const typename N::M& x,
                          const typename N::M& y) {
  return m.add(m.add(m.add(x, y), m.neg(x)), m.neg(y));
}

template <NilModuleStructure N>
Report check_nilmodule_axioms(const N& m, const CheckConfig& cfg = {}) {
  using ME = typename N::M;
  Report rep;
  const bool ex = m.exhaustive_ok(cfg.exhaustive_limit);
  const Carrier<ME> cm = m.m_carrier().renamed("m"), cn = cm.renamed("n");
  const Carrier<ME> c0 = m.m0_carrier().renamed("x"), c1 = c0.renamed("y");
  const Carrier<Elt> kk = k_carrier(m.base(), "k"), kl = kk.renamed("l");
  const CommRing& K = m.base();
  auto br = [&](const ME& x, const ME& y) { return nil_bracket(m, x, y); };
  auto chk = [&](const std::string& name, auto pred, const auto&... cs) {
    check_axiom(rep, cfg, ex, name, pred, cs...);
  };

  chk("group: associativity", [&](const ME& x, const ME& y, const ME& z) {
    return m.add(m.add(x, y), z) == m.add(x, m.add(y, z));
  }, cm, cn, cm.renamed("p"));
  chk("group: identity and inverse", [&](const ME& x) {
    return m.add(x, m.zero()) == x && m.add(m.zero(), x) == x &&
           m.add(x, m.neg(x)) == m.zero();
  }, cm);
  chk("M0 subgroup", [&](const ME& x, const ME& y) {
    return m.in_m0(m.add(x, y)) && m.in_m0(m.neg(x)) && m.in_m0(m.zero());
  }, c0, c1);
  chk("[M,M] in M0", [&](const ME& x, const ME& y) { return m.in_m0(br(x, y)); }, cm, cn);
  chk("[M,M0]=0", [&](const ME& x, const ME& y) { return br(x, y) == m.zero(); }, cm, c0);
  chk("(m+n).k=m.k+n.k", [&](const ME& x, const ME& y, Elt c) {
    return m.ract(m.add(x, y), c) == m.add(m.ract(x, c), m.ract(y, c));
  }, cm, cn, kk);
  chk("(m.k).l=m.kl, m.1=m", [&](const ME& x, Elt c, Elt d) {
    return m.ract(m.ract(x, c), d) == m.ract(x, K.mul(c, d)) && m.ract(x, K.one()) == x;
  }, cm, kk, kl);
  chk("[m.k,n.l]=kl[m,n]", [&](const ME& x, const ME& y, Elt c, Elt d) {
    return br(m.ract(x, c), m.ract(y, d)) == m.lact(K.mul(c, d), br(x, y));
  }, cm, cn, kk, kl);
  chk("m.(k+l)=m.k+kl tau(m)+m.l", [&](const ME& x, Elt c, Elt d) {
    return m.ract(x, K.add(c, d)) ==
           m.add(m.add(m.ract(x, c), m.lact(K.mul(c, d), m.tau(x))), m.ract(x, d));
  }, cm, kk, kl);
  chk("m.k=k^2 m on M0", [&](const ME& x, Elt c) {
    return m.ract(x, c) == m.lact(K.mul(c, c), x);
  }, c0, kk);
  chk("tau(M) in M0", [&](const ME& x) { return m.in_m0(m.tau(x)); }, cm);
  chk("M0 is a K-module", [&](const ME& x, const ME& y, Elt c, Elt d) {
    return m.in_m0(m.lact(c, x)) &&
           m.lact(c, m.add(x, y)) == m.add(m.lact(c, x), m.lact(c, y)) &&
           m.lact(K.add(c, d), x) == m.add(m.lact(c, x), m.lact(d, x)) &&
           m.lact(K.mul(c, d), x) == m.lact(c, m.lact(d, x)) && m.lact(K.one(), x) == x;
  }, c0, c1, kk, kl);
  chk("tau(m)=m+m.(-1)", [&](const ME& x) {
    return m.tau(x) == m.add(x, m.ract(x, K.neg(K.one())));
  }, cm);
  chk("tau(m.k)=k^2 tau(m)", [&](const ME& x, Elt c) {
    return m.tau(m.ract(x, c)) == m.lact(K.mul(c, c), m.tau(x));
  }, cm, kk);
  chk("tau(m+n)=tau(m)+[m,n]+tau(n)", [&](const ME& x, const ME& y) {
    return m.tau(m.add(x, y)) == m.add(m.add(m.tau(x), br(x, y)), m.tau(y));
  }, cm, cn);
  return rep;
}

/// Explicit finite 2-step nilpotent K-module.
struct TableNilModule {
  using M = std::uint32_t;
  RingPtr k;
  std::size_t nm = 0;
  std::vector<M> madd, mneg;
  M mzero = 0;
  std::vector<char> m0;
  std::vector<M> ract_tab;  // ract_tab[x * |K| + c] = x.c
  std::vector<M> lact_tab;  // lact_tab[c * nm + x] = c x for x in M0
  std::vector<M> tau_tab;
  std::vector<std::string> names;

  void finalize();
  const CommRing& base() const { return *k; }
  M add(M x, M y) const { return madd[x * nm + y]; }
  M neg(M x) const { return mneg[x]; }
  M zero() const { return mzero; }
  bool in_m0(M x) const { return m0[x]; }
  M ract(M x, Elt c) const { return ract_tab[x * k->size() + c]; }
  M lact(Elt c, M x) const { return lact_tab[c * nm + x]; }
  M tau(M x) const { return tau_tab[x]; }
  std::string str(M x) const;
  Carrier<M> m_carrier() const;
  Carrier<M> m0_carrier() const;
  bool exhaustive_ok(std::uint64_t limit) const { return nm * nm <= limit; }
};

/// The pair (Delta, D) of an augmented odd form algebra seen as a 2-step
/// nilpotent K-module.
template <OddFormStructure A>
struct DeltaNilModule {
  using M = typename A::D;
  const A* a;
  const CommRing& base() const { return a->base(); }
  M add(const M& x, const M& y) const { return a->d_add(x, y); }
  M neg(const M& x) const { return a->d_neg(x); }
  M zero() const { return a->d_zero(); }
  bool in_m0(const M& x) const { return a->in_aug(x); }
  M ract(const M& x, Elt c) const { return a->d_kact(x, c); }
  M lact(Elt c, const M& x) const { return a->aug_kmul(c, x); }
  M tau(const M& x) const {
    return a->d_add(x, a->d_kact(x, a->base().neg(a->base().one())));
  }
  Carrier<M> m_carrier() const { return a->d_carrier(); }
  Carrier<M> m0_carrier() const {
    Carrier<M> d = a->d_carrier();
    if (d.enumerable) {
      std::vector<M> members;
      for (const auto& u : *d.all)
        if (a->in_aug(u)) members.push_back(u);
      return listed_carrier<M>("x", std::move(members), d.str);
    }
    if constexpr (requires { a->aug_carrier(); }) return a->aug_carrier().renamed("x");
    const A* alg = a;
    return sampled_carrier<M>(
        "x", [alg, d](Rng& rng) { return alg->phi(alg->pi(d.draw(rng))); }, d.str);
  }
  bool exhaustive_ok(std::uint64_t limit) const { return a->exhaustive_ok(limit); }
};

/// An action of (R, Delta) on (S, Theta) given by four multiplication tables.
struct TableAction {
  const TableOFA* src = nullptr;  // (R, Delta)
  const TableOFA* tgt = nullptr;  // (S, Theta)
  std::vector<std::uint32_t> rs;  // rs[a * |S| + b] = ab in S
  std::vector<std::uint32_t> sr;  // sr[b * |R| + a] = ba in S
  std::vector<std::uint32_t> tr;  // tr[v * |R| + a] = v.a in Theta
  std::vector<std::uint32_t> ds;  // ds[u * |S| + b] = u.b in Theta

  std::uint32_t ab(std::uint32_t a, std::uint32_t b) const { return rs[a * tgt->nr + b]; }
  std::uint32_t ba(std::uint32_t b, std::uint32_t a) const { return sr[b * src->nr + a]; }
  std::uint32_t va(std::uint32_t v, std::uint32_t a) const { return tr[v * src->nr + a]; }
  std::uint32_t ub(std::uint32_t u, std::uint32_t b) const { return ds[u * tgt->nr + b]; }
};

/// The listed action axioms (plus unitality when requested).
Report check_action_axioms(const TableAction& act, bool unital,
                           const CheckConfig& cfg = {});

/// The unital action of (K, 0) on an odd form K-algebra.
TableAction scalar_action(const TableOFA& scalars, const TableOFA& alg);

/// Semidirect product (S x R, Theta x Delta) of an action.
TableOFA semidirect(const TableAction& act);

/// Odd form ideal (I, Gamma) given by membership lists.
struct OddFormIdeal {
  std::vector<TableOFA::R> ideal;
  std::vector<TableOFA::D> gamma;
};

/// Checks the odd form ideal conditions; empty when (I, Gamma) is valid.
std::vector<std::string> check_ideal(const TableOFA& a, const OddFormIdeal& id);
/// Smallest Gamma for a given involution-stable ideal I.
OddFormIdeal minimal_ideal(const TableOFA& a, const std::vector<TableOFA::R>& ideal);
/// Ideal generated by the given elements of R (closed under conj and K).
std::vector<TableOFA::R> generated_ideal(const TableOFA& a,
                                         const std::vector<TableOFA::R>& gens);
/// (R/I, Delta/Gamma) with the induced operations.
TableOFA quotient(const TableOFA& a, const OddFormIdeal& id);

/// The same algebra augmented by D = phi(R) with k phi(a) = phi(ka).
TableOFA min_augmentation(const TableOFA& a);

}  // namespace oddform
