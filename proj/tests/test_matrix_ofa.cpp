#include "doctest.h"
#include "oddform/hyperbolic.hpp"

using namespace oddform;

namespace {

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

CheckConfig quick() {
  CheckConfig c;
  c.samples = 3000;
  return c;
}

// Every n x n matrix over a small ring.
std::vector<Mat> all_matrices(const CommRing& k, int n) {
  std::vector<Mat> out;
  std::size_t total = 1;
  for (int i = 0; i < n * n; ++i) total *= k.size();
  for (std::size_t code = 0; code < total; ++code) {
    Mat m(n);
    std::size_t c = code;
    for (int i = 0; i < n * n; ++i) {
      m.set(i / n, i % n, static_cast<Elt>(c % k.size()));
      c /= k.size();
    }
    out.push_back(m);
  }
  return out;
}

}  // namespace

TEST_CASE("classical families satisfy the odd form axioms") {
  struct Case {
    FamilyKind kind;
    int rank;
    const char* base;
  };
  for (auto c : {Case{FamilyKind::Symplectic, 1, "gf:2"}, Case{FamilyKind::OrthEven, 1, "gf:2"},
                 Case{FamilyKind::OrthOdd, 1, "gf:2"}, Case{FamilyKind::OrthOdd, 1, "gf:3"},
                 Case{FamilyKind::Linear, 1, "z:4"}, Case{FamilyKind::Symplectic, 1, "z:4"},
                 Case{FamilyKind::OrthEven, 2, "gf:3"}}) {
    auto in = build_named(c.kind, c.rank, ring(c.base));
    auto rep = check_ofa_axioms(*in.ofa, quick());
    CHECK_MESSAGE(rep.ok(), in.label() << ": " << rep.summary());
    auto nil = check_nilmodule_axioms(DeltaNilModule<MatrixOFA>{in.ofa.get()}, quick());
    CHECK_MESSAGE(nil.ok(), in.label() << ": " << nil.summary());
  }
}

TEST_CASE("hyperbolic plane over F2: maximal and minimal parameters") {
  auto k = ring("gf:2");
  QuadraticModule q;
  q.k = k;
  q.rank = 2;
  q.lambda = 1;
  q.quad = Mat(2);
  q.quad.set(1, 0, 1);
  q.form = mat_add(*k, q.quad, mat_transpose(q.quad));
  q.param = FormParam::Min;
  auto lo = MatrixOFA::from_module(q);
  q.param = FormParam::Max;
  auto hi = MatrixOFA::from_module(q);
  CHECK(enumerate_unitary_brute(lo).size() == 2);
  CHECK(enumerate_unitary_brute(hi).size() == 6);
  auto zero = MatrixOFA::from_module(QuadraticModule{k, 0, 1, Mat(0), Mat(0), FormParam::Max, {}});
  CHECK(enumerate_unitary_brute(zero).size() == 1);
  QuadraticModule bad = q;
  bad.form.set(0, 0, 1);
  bad.form.set(0, 1, 0);
  CHECK_THROWS_AS(MatrixOFA::from_module(bad), InvalidInput);
}

TEST_CASE("classical oracle agrees with the unitary predicate") {
  struct Case {
    FamilyKind kind;
    int rank;
    const char* base;
  };
  for (auto c : {Case{FamilyKind::Symplectic, 1, "gf:3"}, Case{FamilyKind::OrthEven, 1, "gf:3"},
                 Case{FamilyKind::OrthOdd, 1, "gf:2"}, Case{FamilyKind::Linear, 2, "gf:2"}}) {
    auto in = build_named(c.kind, c.rank, ring(c.base));
    std::size_t count = 0;
    for (const Mat& m : all_matrices(in.ofa->base(), in.ofa->size())) {
      bool u = in_unitary(*in.ofa, m);
      CHECK(u == classical_oracle(in.spec, m));
      count += u;
    }
    CHECK(count == classical_order(in.spec));
  }
}

TEST_CASE("group law matches matrix multiplication") {
  auto in = build_named(FamilyKind::Symplectic, 2, ring("gf:3"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  std::vector<MUnit> gs{u_identity(A)};
  for (const auto& x : f.component(1, 2)) gs.push_back(f.t_short(1, 2, x));
  for (const auto& x : f.component(-1, 2)) gs.push_back(f.t_short(-1, 2, x));
  for (const auto& u : f.delta0(2)) gs.push_back(f.t_ultra(2, u));
  for (const auto& u : f.delta0(-1)) gs.push_back(f.t_ultra(-1, u));
  for (const auto& x : f.corner_units(1)) gs.push_back(f.dil(1, x));
  for (const auto& g : gs) {
    CHECK(is_unitary(A, g));
    CHECK(u_mul(A, g, u_identity(A)) == g);
    CHECK(u_mul(A, g, u_inv(A, g)) == u_identity(A));
    for (const auto& h : gs) {
      Mat lhs = unit_matrix(A, u_mul(A, g, h));
      CHECK(lhs == mat_mul(A.base(), unit_matrix(A, g), unit_matrix(A, h)));
    }
    Rng rng(7);
    for (int s = 0; s < 10; ++s) {
      RElem x = A.random_r(rng);
      DElem u = A.random_d(rng);
      CHECK(u_act_d(A, g, A.phi(x)) == A.phi(u_act_r(A, g, x)));
      CHECK(A.in_delta(u_act_d(A, g, u)));
      CHECK(A.pi(u_act_d(A, g, u)) == u_act_r(A, g, A.pi(u)));
    }
  }
}

TEST_CASE("full group orders by closure") {
  auto f2 = ring("gf:2");
  for (auto [kind, rank, order] :
       {std::tuple{FamilyKind::Symplectic, 2, 720ull}, std::tuple{FamilyKind::OrthEven, 2, 72ull},
        std::tuple{FamilyKind::OrthOdd, 1, 6ull}, std::tuple{FamilyKind::Linear, 3, 168ull}}) {
    auto in = build_named(kind, rank, f2);
    auto g = MatGroup::closure(f2, in.ofa->size(), full_group_generators(in));
    CHECK(g.size() == order);
    CHECK(g.size() == classical_order(in.spec));
    for (const Mat& m : g.elements()) CHECK(classical_oracle(in.spec, m));
  }
}

TEST_CASE("transvections and dilations") {
  auto in = build_named(FamilyKind::Symplectic, 1, ring("gf:3"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  HypPair eta = f.eta(1);
  CHECK(transvection(A, eta, A.d_zero()) == u_identity(A));
  CHECK(f.dil(1, f.e(1)) == u_identity(A));
  RElem two = A.r_kmul(2, f.e(1));
  MUnit d = f.dil(1, two);
  CHECK(d.beta == A.r_sub(A.r_add(two, A.r_kmul(2, f.e(-1))), f.e_abs(1)));
  for (const auto& x : f.corner_units(1))
    for (const auto& y : f.corner_units(1)) CHECK(u_mul(A, f.dil(1, x), f.dil(1, y)) == f.dil(1, A.r_mul(x, y)));
  for (const auto& x : f.corner_units(1))
    CHECK(dilation(A, neg_pair(eta), A.r_bar(*A.corner_inverse(x, f.e(1)))) == f.dil(1, x));
  // u in D_eta: beta = rho(u).
  for (const auto& u : f.delta0_all(1))
    if (A.r_is_zero(u.p)) CHECK(transvection(A, eta, u).beta == u.r);
}

TEST_CASE("Levi decomposition and parabolic extraction") {
  auto in = build_named(FamilyKind::Symplectic, 1, ring("gf:3"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  HypPair eta = f.eta(1);
  auto gens = full_group_generators(in);
  auto grp = MatGroup::closure(A.base_ptr(), A.size(), gens);
  CHECK(grp.size() == 24);
  std::size_t parabolic = 0, extracted = 0;
  for (const Mat& m : grp.elements()) {
    MUnit g = unit_from_matrix(A, m);
    if (in_parabolic(A, eta, g)) {
      ++parabolic;
      auto parts = levi_retraction(A, eta, g);
      MUnit back = u_mul(A, u_mul(A, transvection(A, eta, parts.u), f.dil(1, parts.p1)), parts.p2);
      CHECK(back == g);
    }
    if (auto u = parabolic_extract(A, eta, g)) {
      ++extracted;
      MUnit p = u_mul(A, transvection(A, eta, A.d_neg(*u)), g);
      CHECK(in_parabolic(A, neg_pair(eta), p));
    }
  }
  CHECK(parabolic == 6);
  CHECK(extracted == 18);
}

TEST_CASE("Pierce decomposition and Morita witnesses") {
  auto in = build_named(FamilyKind::OrthEven, 3, ring("gf:2"));
  const auto& A = *in.ofa;
  const auto& f = in.fam;
  CHECK(f.is_strong());
  auto w = f.morita_witness(1, 2, true, false);
  REQUIRE(w);
  RElem s = A.r_zero();
  for (const auto& t : w->terms) s = A.r_add(s, A.r_mul(t.x, t.y));
  CHECK(s == f.e(1));
  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    RElem x = A.random_r(rng);
    RElem sum = A.r_zero();
    for (const auto& [ij, c] : f.pierce(x)) sum = A.r_add(sum, c);
    CHECK(sum == x);
    DElem u = A.random_d(rng);
    auto [parts, c] = f.pierce(u);
    DElem acc = A.d_zero();
    for (const auto& p : parts) acc = A.d_add(acc, p);
    CHECK(A.d_add(acc, A.phi(c)) == u);
  }
  for (const auto& c : f.component(1, 3)) {
    RElem sum = A.r_zero();
    for (const auto& [x, y] : section_ring(A, c, *w)) sum = A.r_add(sum, A.r_mul(x, y));
    CHECK(sum == c);
  }
  for (const auto& v : f.delta0_all(1)) CHECK(reassemble_form(A, section_form(A, v, *w)) == v);
  auto lin = build_named(FamilyKind::Linear, 2, ring("gf:2"));
  CHECK_FALSE(lin.fam.is_strong());
}

TEST_CASE("unitary group acts compatibly on R and Delta") {
  auto in = build_named(FamilyKind::Symplectic, 1, ring("gf:3"));
  const auto& A = *in.ofa;
  std::vector<MUnit> all = enumerate_unitary_brute(A);
  CHECK(all.size() == 24);
  auto rep = check_group_action(A, all, quick());
  CHECK_MESSAGE(rep.ok(), rep.summary());

  auto odd = build_named(FamilyKind::OrthOdd, 2, ring("gf:3"));
  std::vector<MUnit> gens;
  for (const Mat& m : full_group_generators(odd)) gens.push_back(unit_from_matrix(*odd.ofa, m));
  CHECK(check_group_action(*odd.ofa, gens, quick()).ok());

  // A pair (beta, gamma) with the wrong gamma is not in U.
  MUnit fake = all.back();
  for (const auto& x : A.r_basis())
    if (x != A.r_bar(x)) {
      fake.gamma = A.d_add(fake.gamma, A.phi(x));
      break;
    }
  CHECK(fake.gamma != all.back().gamma);
  auto bad = check_group_action(A, {fake}, quick());
  CHECK(bad.cites("g in U"));
}
