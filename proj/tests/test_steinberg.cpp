#include "doctest.h"
#include "oddform/steinberg.hpp"

using namespace oddform;

namespace {

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

Mat conj(const CommRing& k, const Mat& d, const Mat& x) {
  return mat_mul(k, mat_mul(k, d, x), *mat_inverse(k, d));
}

RootBC root(std::vector<int> v) { return RootBC{std::move(v)}; }

Mat comm(const CommRing& k, const Mat& x, const Mat& y) {
  return mat_mul(k, mat_mul(k, x, y), mat_mul(k, *mat_inverse(k, x), *mat_inverse(k, y)));
}

bool antiparallel(const RootBC& a, const RootBC& b) {
  int dot = 0;
  for (std::size_t k = 0; k < a.v.size(); ++k) {
    dot += a.v[k] * b.v[k];
    for (std::size_t l = 0; l < a.v.size(); ++l)
      if (a.v[k] * b.v[l] != a.v[l] * b.v[k]) return false;
  }
  return dot < 0;
}

}  // namespace

TEST_CASE("canonical assignment satisfies the relations") {
  struct Case {
    FamilyKind kind;
    int rank;
    const char* base;
  };
  for (auto c : {Case{FamilyKind::Symplectic, 3, "gf:2"}, Case{FamilyKind::Symplectic, 2, "gf:3"},
                 Case{FamilyKind::OrthEven, 2, "gf:2"}, Case{FamilyKind::OrthOdd, 2, "gf:3"},
                 Case{FamilyKind::Linear, 3, "gf:2"}, Case{FamilyKind::Symplectic, 2, "z:4"}}) {
    auto in = build_named(c.kind, c.rank, ring(c.base));
    auto p = instantiate_relations(in.fam);
    auto rep = check_assignment(stmap_assignment(in.fam), p, in.ofa.get());
    CHECK_MESSAGE(rep.ok(), in.label() << ": " << rep.summary());
    CHECK(rep.stats.size() == 9);
  }
}

TEST_CASE("relation counts, trivial assignment and fault injection") {
  auto in = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  auto p = instantiate_relations(in.fam);
  auto again = instantiate_relations(in.fam);
  CHECK(p.counts() == again.counts());
  for (const auto& [tag, count] : p.counts()) CHECK_MESSAGE(count > 0, tag);
  CHECK(check_assignment(trivial_assignment(in.ofa->base_ptr(), 6), p).ok());

  auto st = stmap_assignment(in.fam);
  auto bad = st;
  const StGen target = x_short(1, 2, in.fam.unit(1, 2), *in.ofa);
  bad.image = [st, target](const StGen& g) {
    return g == target ? mat_id(*st.k, st.dim) : st.image(g);
  };
  auto rep = check_assignment(bad, p, in.ofa.get());
  CHECK_FALSE(rep.ok());
  CHECK(rep.cites("St1") == false);
  CHECK(rep.cites("St4"));

  auto lin = build_named(FamilyKind::Linear, 1, ring("gf:2"));
  CHECK_THROWS_AS(instantiate_relations(lin.fam), InvalidInput);
}

TEST_CASE("St0 images and elementary closure") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:3"));
  const auto& A = *in.ofa;
  auto st = stmap_assignment(in.fam);
  for (const auto& a : in.fam.component(1, -2))
    CHECK(st.image(x_short(1, -2, a, A)) == st.image(x_short(2, -1, A.r_neg(A.r_bar(a)), A)));
  auto p = instantiate_relations(in.fam);
  std::vector<Mat> imgs;
  for (const auto& g : p.generators()) imgs.push_back(st.image(g));
  auto img = MatGroup::closure(A.base_ptr(), A.size(), imgs);
  auto el = MatGroup::closure(A.base_ptr(), A.size(), elementary_generators(in.fam));
  CHECK(img.size() == el.size());
  CHECK(img.size() == 51840);
}

TEST_CASE("diagonal action agrees with conjugation") {
  for (auto [kind, rank, base] : {std::tuple{FamilyKind::Symplectic, 2, "gf:3"},
                                  std::tuple{FamilyKind::OrthOdd, 2, "gf:3"},
                                  std::tuple{FamilyKind::Linear, 2, "gf:3"}}) {
    auto in = build_named(kind, rank, ring(base));
    const auto& f = in.fam;
    const auto& A = *in.ofa;
    const CommRing& K = A.base();
    auto st = stmap_assignment(f);
    std::vector<DiagGen> ds;
    for (int i = -rank; i <= rank; ++i)
      if (i)
        for (const auto& a : f.corner_units(i)) ds.push_back({i, a, {}});
    for (const auto& g : f.d0_elements()) ds.push_back({0, {}, g});
    auto gens = instantiate_relations(f).generators();
    std::size_t bad = 0;
    for (const auto& d : ds) {
      Mat dm = diag_matrix(f, d);
      for (const auto& x : gens)
        if (st.image(diag_action(f, d, x)) != conj(K, dm, st.image(x))) ++bad;
    }
    CHECK_MESSAGE(bad == 0, in.label());
    CHECK(diag_action(f, {1, f.e(1), {}}, gens[1]) == gens[1]);
  }
}

TEST_CASE("root subgroups and commutator containment in BC_2") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  const auto& f = in.fam;
  auto x = root_subgroup(f, root({-1, 1}));
  REQUIRE(!x.empty());
  CHECK(x[0].i == -2);
  CHECK(x[0].j == -1);
  auto lng = root_subgroup(f, root({2, 0}));
  CHECK(lng.size() == 2);
  for (const auto& g : lng) CHECK((g.ultra && g.i == 1));
  CHECK_THROWS_AS(root_subgroup(f, root({1, 2})), InvalidInput);
  std::size_t pairs = 0;
  for (const auto& a : roots_bc(2))
    for (const auto& b : roots_bc(2)) {
      if (antiparallel(a, b)) {
        CHECK_THROWS_AS(commutator_contained(f, a, b), InvalidInput);
        continue;
      }
      ++pairs;
      CHECK_MESSAGE(commutator_contained(f, a, b), root_str(a) << " " << root_str(b));
    }
  CHECK(pairs > 0);
}

TEST_CASE("elimination maps transport relations") {
  struct Case {
    FamilyKind kind;
    int rank;
    const char* base;
    std::vector<int> alpha;
  };
  for (const auto& c : {Case{FamilyKind::Symplectic, 3, "gf:2", {0, -1, 1}},
                        Case{FamilyKind::Symplectic, 3, "gf:2", {1, 0, 0}},
                        Case{FamilyKind::OrthEven, 3, "gf:2", {0, -1, 1}},
                        Case{FamilyKind::OrthOdd, 3, "gf:2", {1, 0, 0}},
                        Case{FamilyKind::Symplectic, 2, "gf:3", {1, 0}},
                        Case{FamilyKind::Symplectic, 3, "gf:2", {1, 1, 0}},
                        Case{FamilyKind::Symplectic, 3, "gf:2", {0, 0, -1}}}) {
    auto in = build_named(c.kind, c.rank, ring(c.base));
    auto e = eliminate(in.fam, root(c.alpha));
    CHECK(e.quotient.rank() == c.rank - 1);
    auto chk = check_elimination(e);
    CHECK_MESSAGE(chk.ok(), in.label() << " " << root_str(e.alpha) << ": " << chk.relations.summary()
                                       << " gens=" << chk.generator_mismatches
                                       << " roots=" << chk.root_mismatches);
    CHECK(chk.transported > 0);
  }
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  CHECK_THROWS_AS(eliminate(in.fam, root({2, 0})), InvalidInput);
}

TEST_CASE("short elimination collapses on the first summand") {
  auto in = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  const auto& A = *in.ofa;
  auto e = eliminate(in.fam, root({0, -1, 1}));
  int hits = 0;
  for (const auto& u : e.quotient.delta0_all(2)) {
    if (A.d_act(u, in.fam.e(2)) != u) continue;
    auto img = e.image(x_ultra(2, u, A));
    REQUIRE(img.size() == 3);
    CHECK(img[1].u == A.d_zero());
    CHECK(A.r_is_zero(img[2].a));
    ++hits;
  }
  CHECK(hits > 1);
}

TEST_CASE("unipotent subgroups") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  auto up = u_plus_minus(in.fam, 1);
  auto down = u_plus_minus(in.fam, -1);
  CHECK(up.closure_order == 16);
  CHECK(up.injective());
  CHECK(down.injective());
  auto st = stmap_assignment(in.fam);
  const auto& A = *in.ofa;
  std::vector<Mat> u, d;
  for (const auto& g : up.gens) u.push_back(st.image(g));
  for (const auto& g : down.gens) d.push_back(st.image(g));
  auto U = MatGroup::closure(A.base_ptr(), A.size(), u);
  auto D = MatGroup::closure(A.base_ptr(), A.size(), d);
  std::size_t common = 0;
  for (const auto& m : U.elements()) common += D.contains(m);
  CHECK(common == 1);
  auto sp3 = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  CHECK(u_plus_minus(sp3.fam, 1).closure_order == 512);
}

TEST_CASE("perfectness witnesses") {
  for (auto [kind, base] : {std::pair{FamilyKind::Symplectic, "gf:2"},
                            std::pair{FamilyKind::OrthOdd, "gf:3"}}) {
    auto in = build_named(kind, 3, ring(base));
    auto st = stmap_assignment(in.fam);
    auto p = instantiate_relations(in.fam, 4);
    std::size_t nonempty = 0;
    for (const auto& g : p.generators()) {
      auto w = perfectness_witness(in.fam, g);
      nonempty += !w.pairs.empty();
      CHECK(commutator_word_image(st, w) == st.image(g));
    }
    CHECK(nonempty > 0);
    CHECK(perfectness_witness(in.fam, x_short(1, 3, in.ofa->r_zero(), *in.ofa)).pairs.empty());
  }
  auto small = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  CHECK_THROWS_AS(perfectness_witness(small.fam, x_short(1, 2, small.fam.unit(1, 2), *small.ofa)),
                  InvalidInput);
}

TEST_CASE("induced homomorphisms") {
  auto in = build_named(FamilyKind::Symplectic, 3, ring("gf:3"));
  const auto& f = in.fam;
  const auto& A = *in.ofa;
  const CommRing& K = A.base();
  auto k = A.base_ptr();
  auto st = stmap_assignment(f);
  auto T = [&](int i, int j, const RElem& a) { return st.image(x_short(i, j, a, A)); };
  auto Tu = [&](int i, const DElem& u) { return st.image(x_ultra(i, u, A)); };

  auto w = f.morita_witness(1, 2, true);
  REQUIRE(w);
  RingPairMap fc = [&](int l, const RElem& a, const RElem& b) { return comm(K, T(1, l, a), T(l, 3, b)); };
  GroupMap g = induced_hom_ring(f, k, 6, 1, 2, 3, fc, *w);
  for (const auto& c : f.component(1, 3)) CHECK(g(c) == T(1, 3, c));
  const Mat id = mat_id(K, 6);
  RingPairMap triv = [&](int, const RElem&, const RElem&) { return id; };
  CHECK(induced_hom_ring(f, k, 6, 1, 2, 3, triv, *w)(f.unit(1, 3)) == id);
  RingPairMap skew = [&](int l, const RElem& a, const RElem& b) {
    RElem ab = A.r_mul(a, b);
    return T(1, 3, l > 0 ? ab : A.r_neg(ab));
  };
  CHECK_THROWS_WITH_AS(induced_hom_ring(f, k, 6, 1, 2, 3, skew, *w), doctest::Contains("balanced"),
                       InvalidInput);

  FormPairMap ff = [&](int, const DElem& u, const RElem& a) { return Tu(1, A.d_act(u, a)); };
  GroupMap gf = [&](const RElem& c) { return Tu(1, A.phi(c)); };
  auto h = induced_hom_form(f, k, 6, 1, 2, ff, gf, *w);
  for (const auto& u : f.delta0(1)) CHECK(h(u) == Tu(1, u));
  FormPairMap ftriv = [&](int, const DElem&, const RElem&) { return id; };
  GroupMap gtriv = [&](const RElem&) { return id; };
  auto h0 = induced_hom_form(f, k, 6, 1, 2, ftriv, gtriv, *w);
  for (const auto& u : f.delta0(1)) CHECK(h0(u) == id);
  // g(c) = T_1(phi(c))^2 breaks the identities tying f to g.
  GroupMap gbad = [&](const RElem& c) { return mat_mul(K, Tu(1, A.phi(c)), Tu(1, A.phi(c))); };
  CHECK_THROWS_AS(induced_hom_form(f, k, 6, 1, 2, ff, gbad, *w), InvalidInput);
}

TEST_CASE("Weyl group is transitive on classes of root pairs") {
  for (int n : {3, 4}) {
    auto classes = weyl_pair_classes(n);
    CHECK(classes.size() > 5);
    for (const auto& c : classes) CHECK_MESSAGE(c.orbits == 1, n << " " << c.key);
  }
  std::size_t short_roots = 0;
  for (const auto& r : roots_bc(3)) short_roots += root_length(r) == RootLength::Short;
  CHECK(short_roots == 12);
}

TEST_CASE("presentation export round trip") {
  auto in = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  auto p = instantiate_relations(in.fam);
  std::string text = export_presentation(p, in.fam, "sp");
  CHECK(text == export_presentation(instantiate_relations(in.fam), in.fam, "sp"));
  CHECK(reimport_presentation(text) == text);
  std::string tampered = text;
  auto pos = tampered.find("\"St4\"");
  REQUIRE(pos != std::string::npos);
  tampered.replace(pos, 5, "\"St9\"");
  CHECK_THROWS_AS(reimport_presentation(tampered), InvalidInput);
  CHECK_THROWS_AS(reimport_presentation("{"), InvalidInput);
}
