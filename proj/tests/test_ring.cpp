#include "doctest.h"
#include "oddform/ring.hpp"

#include <algorithm>

using namespace oddform;

namespace {

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

}  // namespace

TEST_CASE("base ring specs") {
  for (auto s : {"z:1", "z:2", "z:4", "z:6", "z:9", "z:12", "gf:2", "gf:3", "gf:5", "gf:2:2", "gf:2:3", "gf:3:2"}) {
    auto k = parse_base(s);
    CHECK_MESSAGE(check_ring_axioms(k).empty(), s);
  }
  CHECK(parse_base("gf:2:3").size() == 8);
  CHECK(parse_base("z:9").modulus() == 9);
  CHECK(parse_base("gf:2:2").modulus() == 0);
  for (auto s : {"", "z", "z:", "z:0", "z:x", "z:4:1", "gf:4", "gf:6:1", "q:3", "gf:2:x", "z:-3"})
    CHECK_THROWS_AS(parse_base(s), InvalidInput);
  CHECK_THROWS_AS(build_gf(2, 13), BoundExceeded);
}

TEST_CASE("field and unit structure") {
  auto f4 = parse_base("gf:2:2");
  CHECK(f4.is_field());
  CHECK(f4.units().size() == 3);
  for (Elt a : f4.units()) CHECK(f4.mul(a, *f4.inverse(a)) == f4.one());
  auto z12 = parse_base("z:12");
  CHECK_FALSE(z12.is_field());
  CHECK(z12.units().size() == 4);
  CHECK_FALSE(z12.inverse(6).has_value());
  CHECK(z12.from_int(-1) == 11);
  CHECK(z12.from_int(30) == 6);
  CHECK(parse_base("gf:3:2").from_int(5) == parse_base("gf:3:2").from_int(2));
}

TEST_CASE("closures, quotients, localizations and radicals") {
  auto z12 = parse_base("z:12");
  auto s = multiplicative_closure(z12, {2});
  std::sort(s.begin(), s.end());
  CHECK(s == std::vector<Elt>{1, 2, 4, 8});

  auto q = quotient_ring(z12, {0, 4, 8});
  CHECK(q.ring.size() == 4);
  CHECK(check_ring_axioms(q.ring).empty());
  for (Elt a = 0; a < 12; ++a)
    for (Elt b = 0; b < 12; ++b) CHECK(q.map[z12.mul(a, b)] == q.ring.mul(q.map[a], q.map[b]));

  auto z6 = parse_base("z:6");
  auto l = localize_finite(z6, multiplicative_closure(z6, {2}));
  CHECK(l.ring.size() == 3);
  auto ker = l.kernel;
  std::sort(ker.begin(), ker.end());
  CHECK(ker == std::vector<Elt>{0, 3});
  for (Elt x : l.subset) CHECK(l.ring.is_unit(l.map[x]));
  CHECK(localize_finite(z6, {1}).ring.size() == 6);
  CHECK(localize_finite(z6, {0, 1}).ring.size() == 1);

  auto rad = ring_radical(parse_base("z:8"));
  std::sort(rad.begin(), rad.end());
  CHECK(rad == std::vector<Elt>{0, 2, 4, 6});
  CHECK(ring_radical(parse_base("gf:2:2")) == std::vector<Elt>{0});
  CHECK(ring_radical(z6) == std::vector<Elt>{0});
}

TEST_CASE("finite algebras with involution") {
  auto k = ring("gf:2");
  auto m2 = FiniteAlgebra::matrix_algebra(k, 2);
  CHECK(m2.size() == 16);
  CHECK(check_algebra_axioms(m2).empty());
  CHECK(m2.units().size() == 6);
  CHECK(jacobson_radical(m2) == std::vector<FiniteAlgebra::Idx>{m2.zero()});
  for (auto u : m2.units()) CHECK(m2.mul(u, *m2.inverse(u)) == *m2.one());

  auto z4 = FiniteAlgebra::from_ring(ring("z:4"));
  CHECK(check_algebra_axioms(z4).empty());
  auto j = jacobson_radical(z4);
  CHECK(j.size() == 2);
  for (auto x : j) CHECK(quasi_inverse(z4, x).has_value());
  // 1 + x + x' + x x' = 0 has no solution for x = -1.
  CHECK_FALSE(quasi_inverse(z4, z4.neg(*z4.one())).has_value());
  CHECK_THROWS(FiniteAlgebra::matrix_algebra(ring("gf:3"), 4));
  CHECK_THROWS_AS(localize_finite(z4.base(), {2}), InvalidInput);
}
