#include "doctest.h"
#include "oddform/stability.hpp"

using namespace oddform;

namespace {

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

std::vector<MUnit> group_units(const NamedInstance& in) {
  const auto& A = *in.ofa;
  auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in));
  std::vector<MUnit> out;
  for (const Mat& m : G.elements()) out.push_back(unit_from_matrix(A, m));
  return out;
}

}  // namespace

TEST_CASE("unimodular sequences in a table ring") {
  auto f2 = FinRing::from_comm(parse_base("gf:2"));
  CHECK(is_left_unimodular(f2, {1}) == std::vector<Elt>{1});
  CHECK_FALSE(is_left_unimodular(f2, {0, 0}));
  auto z6 = FinRing::from_comm(parse_base("z:6"));
  CHECK(is_left_unimodular(z6, {2, 3}) == std::vector<Elt>{2, 1});
  CHECK_FALSE(is_left_unimodular(z6, {2, 4}));
}

TEST_CASE("stable rank of small rings") {
  for (const char* b : {"gf:2", "z:4", "gf:3", "z:6"}) {
    auto A = FinRing::from_comm(parse_base(b));
    auto r = stable_rank_leq(A, 1);
    CHECK(r.supported);
    CHECK_MESSAGE(r.holds, b);
    CHECK(r.certificates.size() == r.unimodular);
    for (const auto& c : r.certificates) {
      Elt s = A.plus(c.seq[0], A.times(c.c[0], c.seq[1]));
      CHECK(A.times(c.witness[0], s) == A.one);
    }
  }
  auto f2 = FinRing::from_comm(parse_base("gf:2"));
  CHECK(stable_rank_leq(f2, 1).unimodular == 3);
  CHECK(stable_rank_leq(f2, 2).holds);
  CHECK_FALSE(stable_rank_leq(f2, 0).supported);
}

TEST_CASE("the form parameter Lambda") {
  auto sp = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  auto L = lambda_param(sp.fam);
  CHECK(L.ok());
  const auto& A = *sp.ofa;
  std::size_t skew = 0, diff = 0;
  std::unordered_set<RElem, RElemHash> diffs;
  for (const auto& a : sp.fam.component_all(1, -1)) {
    skew += A.r_is_zero(A.r_add(a, A.r_bar(a)));
    diffs.insert(A.r_sub(a, A.r_bar(a)));
  }
  CHECK(L.carrier.size() == skew);

  auto oe = build_named(FamilyKind::OrthEven, 2, ring("gf:2"));
  auto L2 = lambda_param(oe.fam);
  CHECK(L2.ok());
  diffs.clear();
  const auto& B = *oe.ofa;
  for (const auto& a : oe.fam.component_all(1, -1)) diffs.insert(B.r_sub(a, B.r_bar(a)));
  diff = diffs.size();
  CHECK(L2.carrier.size() == diff);
  for (const auto& x : diffs) CHECK(L2.contains(x));

  for (auto kind : {FamilyKind::OrthOdd, FamilyKind::Linear, FamilyKind::OrthEven}) {
    auto in = build_named(kind, 2, ring("gf:3"));
    CHECK_MESSAGE(lambda_param(in.fam).ok(), in.label());
  }
}

TEST_CASE("Lambda stable rank of built-in instances") {
  struct Case {
    FamilyKind kind;
    int rank;
    const char* base;
  };
  for (auto c : {Case{FamilyKind::Symplectic, 3, "gf:2"}, Case{FamilyKind::OrthEven, 3, "gf:3"},
                 Case{FamilyKind::OrthOdd, 2, "gf:3"}, Case{FamilyKind::Linear, 3, "gf:2"},
                 Case{FamilyKind::Symplectic, 2, "z:4"}}) {
    auto in = build_named(c.kind, c.rank, ring(c.base));
    auto r = lambda_sr_leq(in.fam, 1);
    CHECK_MESSAGE(r.holds, in.label());
    CHECK(r.corner.holds);
    CHECK(r.certificates.size() == r.unimodular);
    const auto& A = *in.ofa;
    for (const auto& cert : r.certificates) {
      RElem s = A.r_zero();
      for (std::size_t i = 0; i < cert.b.size(); ++i) {
        RElem t = cert.b[i];
        for (std::size_t j = 0; j < cert.a.size(); ++j) t = A.r_add(t, A.r_mul(cert.c[i][j], cert.a[j]));
        s = A.r_add(s, A.r_mul(cert.witness[i], t));
        CHECK(r.lambda.contains(cert.c[i][i]));
        for (std::size_t j = 0; j < cert.a.size(); ++j)
          CHECK(cert.c[i][j] == A.r_neg(A.r_bar(cert.c[j][i])));
      }
      CHECK(s == in.fam.e(1));
    }
  }
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  CHECK_FALSE(lambda_sr_leq(in.fam, 0).supported);
}

TEST_CASE("transvection letters multiply back") {
  for (auto kind : {FamilyKind::Symplectic, FamilyKind::OrthOdd}) {
    auto in = build_named(kind, 2, ring("gf:3"));
    const auto& A = *in.ofa;
    const auto& f = in.fam;
    std::size_t seen = 0;
    for (const auto& g : group_units(in)) {
      for (int l : {2, -2, 1}) {
        if (!in_parabolic(A, f.eta(l), g)) continue;
        DElem u = levi_retraction(A, f.eta(l), g).u;
        MUnit t = transvection(A, f.eta(l), u);
        auto w = transvection_letters(f, l, u);
        CHECK(eval_word(f, w) == t);
        CHECK(eval_word(f, inverse_word(f, w)) == u_inv(A, t));
        ++seen;
      }
      if (seen > 400) break;
    }
    CHECK(seen > 400);
  }
}

TEST_CASE("column of a unitary element is unimodular") {
  auto in = build_named(FamilyKind::OrthOdd, 2, ring("gf:3"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  Rng rng(5);
  auto units = group_units(in);
  for (int t = 0; t < 50; ++t) {
    const MUnit& g = units[rng() % units.size()];
    RElem col = A.r_mul(A.r_add(g.beta, A.r_one()), f.e(2));
    UnimodSeq s;
    s.col = 2;
    for (int i = -2; i <= 2; ++i) {
      s.elems.push_back(A.r_mul(f.e(i), col));
      s.rows.push_back(i == 0 ? 2 : i);
      if (i == 0) s.elems.back() = A.r_mul(A.r_mul(A.r_bar(col), f.e(0)), col);
    }
    auto w = is_left_unimodular(f, s);
    REQUIRE(w);
    RElem sum = A.r_zero();
    for (std::size_t k = 0; k < w->size(); ++k) sum = A.r_add(sum, A.r_mul((*w)[k], s.elems[k]));
    CHECK(sum == f.e(2));
  }
}

TEST_CASE("reduction to a smaller rank") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  const auto& A = *in.ofa;
  Reducer red(in.fam);
  auto id = red.reduce(u_identity(A));
  CHECK(id.h.empty());
  CHECK(id.g_prime == u_identity(A));
  MUnit small = in.fam.t_ultra(1, in.fam.delta0_all(1).back());
  auto s = red.reduce(small);
  CHECK(s.h.empty());
  CHECK(s.g_prime == small);
  std::size_t maxlen = 0, corner = 0;
  for (const auto& g : group_units(in)) {
    auto r = red.reduce(g);
    CHECK(red.verify(g, r));
    maxlen = std::max(maxlen, r.h.size());
    corner += r.corner_step;
  }
  CHECK(maxlen <= 12);
  CHECK(corner > 0);

  // The e_0 row and the Lambda step only appear for odd forms.
  auto odd = build_named(FamilyKind::OrthOdd, 2, ring("gf:3"));
  Reducer red2(odd.fam);
  std::size_t unimod = 0, lambda = 0, bad = 0;
  for (const auto& g : group_units(odd)) {
    auto r = red2.reduce(g);
    bad += !red2.verify(g, r);
    unimod += r.unimod_step;
    lambda += r.lambda_step;
  }
  CHECK(bad == 0);
  CHECK(unimod + lambda > 0);

  auto z4 = build_named(FamilyKind::Symplectic, 2, ring("z:4"));
  Reducer red3(z4.fam);
  auto units = group_units(z4);
  for (std::size_t e = 0; e < units.size(); e += 97) CHECK(red3.verify(units[e], red3.reduce(units[e])));

  auto one = build_named(FamilyKind::Symplectic, 1, ring("gf:2"));
  CHECK_THROWS_AS(Reducer(one.fam), InvalidInput);
}

TEST_CASE("Gauss decomposition") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  GaussDecomposer gd(f);
  CHECK(gd.pieces(2).size() == 1);
  auto id = gd.decompose(u_identity(A));
  CHECK(id.u_plus1.empty());
  CHECK(id.u_minus.empty());
  CHECK(id.u_plus2.empty());
  CHECK(id.d == u_identity(A));
  std::size_t bad = 0;
  auto units = group_units(in);
  CHECK(units.size() == 720);
  for (const auto& g : units) bad += !gd.verify(g, gd.decompose(g));
  CHECK(bad == 0);
  CHECK(gd.stats().fallbacks == 0);

  auto f3 = build_named(FamilyKind::Symplectic, 2, ring("gf:3"));
  GaussDecomposer g3(f3.fam);
  for (const auto& x : f3.fam.corner_units(2)) {
    MUnit d = f3.fam.dil(2, x);
    auto r = g3.decompose(d);
    CHECK(r.u_plus1.empty());
    CHECK(r.u_minus.empty());
    CHECK(r.u_plus2.empty());
    CHECK(r.d == d);
  }

  for (auto [kind, base] : {std::pair{FamilyKind::OrthOdd, "gf:3"}, std::pair{FamilyKind::Symplectic, "z:4"},
                            std::pair{FamilyKind::OrthEven, "gf:3"}}) {
    auto x = build_named(kind, 2, ring(base));
    GaussDecomposer g(x.fam);
    auto us = group_units(x);
    std::size_t fails = 0;
    for (std::size_t e = 0; e < us.size(); e += 53) fails += !g.verify(us[e], g.decompose(us[e]));
    CHECK_MESSAGE(fails == 0, x.label());
  }

  auto one = build_named(FamilyKind::OrthOdd, 1, ring("gf:3"));
  GaussDecomposer g1(one.fam);
  for (const auto& g : group_units(one)) {
    auto r = g1.decompose(g);
    CHECK(r.d == g);
    CHECK(g1.verify(g, r));
  }
}

TEST_CASE("subgroup predicates for the Gauss factors") {
  auto in = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  auto x = f.component_all(1, 3).back();
  CHECK(word_in_u(f, {x_short(1, 3, x, A)}, 1));
  CHECK(word_in_u(f, {x_short(3, 1, A.r_bar(x), A)}, -1));
  CHECK_FALSE(word_in_u(f, {x_short(3, 1, A.r_bar(x), A)}, 1));
  CHECK(word_in_u(f, {x_short(-3, -1, A.r_neg(A.r_bar(x)), A)}, 1));
  CHECK_FALSE(word_in_u(f, {x_short(1, -1, f.component_all(1, -1).back(), A)}, 1));
  CHECK(in_u_quotient(f, f.t_short(1, 3, x), 1));
  CHECK_FALSE(in_u_quotient(f, f.t_short(1, 3, x), -1));
  CHECK(in_diag_quotient(f, f.t_ultra(1, f.delta0_all(1).back())));
  CHECK(in_diag_quotient(f, f.dil(2, f.corner_units(2).back())));
  CHECK_FALSE(in_diag_quotient(f, f.t_short(1, 3, x)));

  auto sp2 = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  auto ic = unipotent_intersections(sp2);
  CHECK(ic.ok());
  CHECK(ic.u_plus == 8);
  CHECK(ic.u_minus == 8);
  CHECK(ic.diag * 8 == ic.minus_diag);
}

TEST_CASE("crossed module consequences") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  auto r = crossed_module_consequences(in);
  CHECK(r.report.ok());
  CHECK_FALSE(r.rank_ok);
  CHECK(r.group_order == 720);
  CHECK(r.conjugates_checked == 720);
  CHECK(r.ad_checks > 0);

  auto f3 = build_named(FamilyKind::OrthOdd, 2, ring("gf:3"));
  auto r3 = crossed_module_consequences(f3, 40, 6);
  CHECK(r3.report.ok());
  CHECK(r3.conjugates_checked == 40);

  auto sp3 = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  auto r6 = crossed_module_consequences(sp3, 3000);
  CHECK(r6.report.ok());
  CHECK(r6.rank_ok);
  CHECK(r6.elementary_order == r6.group_order);
}
