#include "doctest.h"
#include "oddform/oddform.hpp"

using namespace oddform;

TEST_CASE("scalar and zero algebras satisfy the axioms") {
  for (auto spec : {"z:4", "gf:3", "z:6"}) {
    auto k = std::make_shared<const CommRing>(parse_base(spec));
    auto rep = check_ofa_axioms(scalar_ofa(k));
    CHECK_MESSAGE(rep.ok(), rep.summary());
    CHECK(check_ofa_axioms(zero_ofa(k)).ok());
    CHECK(check_ofa_axioms(min_augmentation(scalar_ofa(k))).ok());
  }
}

namespace {

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

}  // namespace

TEST_CASE("scalar action and semidirect product") {
  auto k = ring("z:4");
  auto s = scalar_ofa(k);
  auto a = min_augmentation(scalar_ofa(k));
  auto act = scalar_action(s, a);
  auto r = check_action_axioms(act, true);
  CHECK_MESSAGE(r.ok(), r.summary());
  auto sd = semidirect(act);
  CHECK(sd.nr == a.nr * s.nr);
  CHECK(sd.nd == a.nd * s.nd);
  auto rs = check_ofa_axioms(sd);
  CHECK_MESSAGE(rs.ok(), rs.summary());

  auto bad = act;
  bad.rs[1 * a.nr + 1] = a.rzero;
  CHECK_FALSE(check_action_axioms(bad, true).ok());
}

TEST_CASE("odd form ideals and quotients") {
  auto k = ring("z:8");
  auto a = min_augmentation(scalar_ofa(k));
  auto i = generated_ideal(a, {a.r_kmul(4, *a.rone)});
  CHECK(i.size() == 2);
  auto id = minimal_ideal(a, i);
  CHECK(check_ideal(a, id).empty());
  auto q = quotient(a, id);
  CHECK(q.nr == 4);
  auto rq = check_ofa_axioms(q);
  CHECK_MESSAGE(rq.ok(), rq.summary());

  OddFormIdeal broken = id;
  broken.ideal = {a.rzero, a.r_kmul(2, *a.rone)};
  CHECK_FALSE(check_ideal(a, broken).empty());
  CHECK(generated_ideal(a, {*a.rone}).size() == a.nr);
}

TEST_CASE("checkers report corrupted tables") {
  auto k = ring("z:4");
  auto a = scalar_ofa(k);
  CHECK(check_ofa_axioms(a).ok());
  auto bad = a;
  bad.rmul[1 * a.nr + 1] = a.rzero;
  auto r = check_ofa_axioms(bad);
  CHECK_FALSE(r.ok());
  CHECK(r.cites("1a=a=a1"));
  CHECK_FALSE(r.violations.front().witness.empty());

  auto m = min_augmentation(a);
  DeltaNilModule<TableOFA> dm{&m};
  CHECK(check_nilmodule_axioms(dm).ok());
}
