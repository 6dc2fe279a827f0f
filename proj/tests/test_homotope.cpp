#include "doctest.h"
#include "oddform/homotope.hpp"

using namespace oddform;

namespace {

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

std::shared_ptr<const TableOFA> linear1(const char* base) {
  return std::make_shared<const TableOFA>(tabulate(MatrixOFA::linear(ring(base), 1)));
}

std::string first(const Report& r) {
  return r.ok() ? std::string("ok") : r.violations[0].axiom + ": " + r.violations[0].witness;
}

}  // namespace

TEST_CASE("tabulated algebra keeps the axioms") {
  auto a = linear1("z:4");
  CHECK(a->nr == 16);
  CHECK(a->has_aug());
  CHECK(check_ofa_axioms(*a).ok());
  auto m = delta_module(*a);
  CHECK(check_nilmodule_axioms(m).ok());
}

TEST_CASE("module homotopes") {
  auto k9 = ring("z:9");
  auto m = scalar_nilmodule(k9);
  CHECK(check_nilmodule_axioms(m).ok());
  auto h = homotope_module(m, 3);
  auto r = check_homotope_module(m, h);
  CHECK_MESSAGE(r.ok(), first(r));
  CHECK(h.mod.tau(h.iota(1)) == h.iota(2));

  // s = 1 is the module itself.
  auto id = homotope_module(m, 1);
  for (std::uint32_t x = 0; x < m.nm; ++x)
    for (std::uint32_t y = 0; y < m.nm; ++y) CHECK(id.mod.add(id.of(x), id.of(y)) == id.of(m.add(x, y)));

  // s = 0: brackets vanish and tau kills the generators.
  auto a = linear1("z:4");
  auto dm = delta_module(*a);
  auto h0 = homotope_module(dm, 0);
  CHECK(check_homotope_module(dm, h0).ok());
  for (std::uint32_t x = 0; x < dm.nm; ++x) {
    CHECK(h0.mod.tau(h0.of(x)) == h0.mod.zero());
    for (std::uint32_t y = 0; y < dm.nm; y += 5) CHECK(nil_bracket(h0.mod, h0.of(x), h0.of(y)) == h0.mod.zero());
  }
  for (Elt s = 0; s < 4; ++s) {
    auto hs = homotope_module(dm, s);
    CHECK(hs.mod.nm == dm.nm);
    CHECK_MESSAGE(check_homotope_module(dm, hs).ok(), "s=" << s);
  }
}

TEST_CASE("algebra homotopes over Z/4") {
  auto a = linear1("z:4");
  HomotopeTower t(a, {0, 1, 2, 3});
  CHECK(t.subset().size() == 4);
  for (Elt s = 0; s < 4; ++s) {
    const auto& h = t.level(s);
    auto r = check_homotope_ofa(h);
    CHECK_MESSAGE(r.ok(), "s=" << s << " " << first(r));
    auto act = base_action(h);
    auto ra = check_action_axioms(act, false);
    CHECK_MESSAGE(ra.ok(), first(ra));
    // The Delta part matches the module homotope.
    auto hm = homotope_module(delta_module(*a), s);
    CHECK(hm.mod.nm == h.alg.nd);
  }
  const auto& h2 = t.level(2);
  for (std::uint32_t u = 0; u < a->nd; ++u) CHECK(h2.alg.rho(h2.of(u)) == a->r_kmul(2, a->rho(u)));
  CHECK(t.level(1).alg.rone.has_value());
  CHECK_FALSE(t.level(2).alg.rone.has_value());
  auto rt = check_tower(t);
  CHECK_MESSAGE(rt.ok(), first(rt));
}

TEST_CASE("tower maps") {
  auto a = linear1("z:4");
  HomotopeTower t(a, {3});
  auto f = t.map(3, 1);
  for (std::uint32_t e = 0; e < f.d.size(); ++e) CHECK(f.d[e] == e);
  for (std::uint32_t x = 0; x < f.r.size(); ++x) CHECK(f.r[x] == x);
  CHECK_THROWS_AS(tower_map(t.level(3), t.level(1), 1), InvalidInput);

  auto k27 = ring("z:27");
  auto m = scalar_nilmodule(k27);
  auto h1 = homotope_module(m, 3), h2 = homotope_module(m, 9), h3 = homotope_module(m, 0);
  auto f32 = tower_map(h2, h1, 3);
  CHECK(f32.d[h2.of(1)] == h1.of(3 * 3 * 1 % 27));
  CHECK(check_tower_map(h2, h1, f32).ok());
  // 27 = 0: compose (3 <- 9 <- 0) and compare with (3 <- 0).
  auto g = tower_map(h3, h2, 3);
  auto h = tower_map(h3, h1, 9);
  for (std::uint32_t e = 0; e < g.d.size(); ++e) CHECK(f32.d[g.d[e]] == h.d[e]);
}

TEST_CASE("action of fractions") {
  auto a = linear1("z:9");
  HomotopeTower t(a, {3});
  CHECK(t.subset() == std::vector<Elt>{0, 1, 3});
  // u^(9) . b/3 lands at level 1 with u . 3b.
  const auto& top = t.level(0);
  const auto& one = t.level(1);
  for (std::uint32_t u = 0; u < a->nd; u += 7)
    for (std::uint32_t b = 0; b < a->nr; b += 5) {
      auto r = t.act(HD{0, top.of(u)}, {b, 3}, 1);
      CHECK(r.level == 1);
      CHECK(r.x == one.of(a->d_act(u, a->r_kmul(3, b))));
      if (a->in_aug(u)) CHECK(t.act(HD{0, top.iota(u)}, {b, 3}, 1).x == one.iota(a->d_act(u, b)));
    }
  CHECK_THROWS_AS(t.act(HD{3, 0}, {0, 3}, 1), InvalidInput);
  CHECK_THROWS_AS(t.mul_right(HR{1, 0}, {0, 3}, 1), InvalidInput);
  CHECK_THROWS_AS(t.level(2), InvalidInput);
  // Denominator 1.
  auto r = t.mul_right(HR{3, 5}, {7, 1}, 3);
  CHECK(r.x == a->r_mul(5, 7));

  for (Elt s : {Elt{1}, Elt{3}}) {
    auto rep = check_mixed_action(t, s, 3);
    CHECK_MESSAGE(rep.ok(), first(rep));
  }
  CHECK(check_alternative_presentation(t, 3).ok());
}

TEST_CASE("localization of 2-step nilpotent modules") {
  auto k6 = ring("z:6");
  auto m = scalar_nilmodule(k6);
  auto l = localize_nilmodule(m, {2});
  CHECK(l.mod.nm == 3);
  auto r = check_localization(m, l);
  CHECK_MESSAGE(r.ok(), first(r));
  auto same = localize_nilmodule(m, {1});
  CHECK(same.mod.nm == m.nm);
  CHECK(check_localization(m, same).ok());

  auto a = linear1("z:6");
  auto dm = delta_module(*a);
  auto ld = localize_nilmodule(dm, {3});
  auto rd = check_localization(dm, ld);
  CHECK_MESSAGE(rd.ok(), first(rd));
  for (std::uint32_t x = 0; x < dm.nm; x += 11)
    CHECK(ld.mod.tau(ld.cls(3, x)) == ld.cls(3, dm.tau(x)));
}

TEST_CASE("homotope of a non-augmented algebra is rejected") {
  auto k = ring("gf:2");
  auto z = std::make_shared<const TableOFA>(scalar_ofa(k));
  CHECK_THROWS_AS(homotope_ofa(z, 1), InvalidInput);
}

TEST_CASE("homotope checks see a corrupted table") {
  auto a = linear1("z:4");
  auto h = homotope_ofa(a, 2);
  std::uint32_t u = 1;
  while (h.alg.rho(u) == h.alg.rzero) ++u;
  h.alg.rho_tab[u] = h.alg.rzero;
  auto r = check_homotope_ofa(h);
  CHECK_FALSE(r.ok());

  auto m = delta_module(*a);
  auto hm = homotope_module(m, 3);
  hm.mod.tau_tab[hm.of(1)] = hm.mod.zero();
  CHECK(check_homotope_module(m, hm).cites("tau(m^(s))=(s tau(m))^(s)"));
}
