// Acceptance run: one PASS/FAIL line per criterion. Arguments select
// criteria by number; no arguments runs all of them.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oddform/homotope.hpp"
#include "oddform/hyperbolic.hpp"
#include "oddform/stability.hpp"
#include "oddform/steinberg.hpp"

using namespace oddform;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void fail(const std::string& why) {
    if (pass) detail.str("");
    pass = false;
    detail << why << "; ";
  }
};

RingPtr ring(const char* s) { return std::make_shared<const CommRing>(parse_base(s)); }

struct Spec {
  FamilyKind kind;
  int rank;
  const char* base;
};

std::vector<Spec> axiom_instances() {
  std::vector<Spec> out;
  for (const char* b : {"gf:2", "gf:3"}) {
    out.push_back({FamilyKind::Symplectic, 2, b});
    out.push_back({FamilyKind::Symplectic, 3, b});
    out.push_back({FamilyKind::OrthEven, 2, b});
    out.push_back({FamilyKind::OrthEven, 3, b});
    out.push_back({FamilyKind::OrthOdd, 2, b});
    out.push_back({FamilyKind::Linear, 3, b});
  }
  return out;
}

std::string first(const Report& r) {
  return r.ok() ? "ok" : r.violations.front().axiom + " at " + r.violations.front().witness.substr(0, 200);
}

std::vector<MUnit> group_units(const NamedInstance& in) {
  const MatrixOFA& A = *in.ofa;
  auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in));
  std::vector<MUnit> out;
  out.reserve(G.size());
  for (const Mat& m : G.elements()) out.push_back(unit_from_matrix(A, m));
  return out;
}

void c1_axioms(Outcome& o) {
  std::size_t exhaustive = 0, axioms = 0;
  for (const auto& s : axiom_instances()) {
    auto in = build_named(s.kind, s.rank, ring(s.base));
    auto r = check_ofa_axioms(*in.ofa);
    r.merge(check_nilmodule_axioms(DeltaNilModule<MatrixOFA>{in.ofa.get()}));
    for (const auto& st : r.stats) exhaustive += st.exhaustive;
    axioms += r.stats.size();
    if (!r.ok()) o.fail(in.label() + ": " + first(r));
  }
  o.detail << axiom_instances().size() << " instances, " << axioms << " axiom checks, " << exhaustive
           << " exhaustive";
}

void c2_relations(Outcome& o) {
  std::size_t rels = 0;
  for (const auto& s : axiom_instances()) {
    auto in = build_named(s.kind, s.rank, ring(s.base));
    auto p = instantiate_relations(in.fam);
    rels += p.relations().size();
    auto r = check_assignment(stmap_assignment(in.fam), p, in.ofa.get());
    if (!r.ok()) o.fail(in.label() + ": " + first(r));
  }
  o.detail << rels << " relations hold under stmap";
}

void c3_orders(Outcome& o) {
  struct Case {
    Spec s;
    std::uint64_t expected;
  };
  auto t0 = std::chrono::steady_clock::now();
  for (const auto& c : {Case{{FamilyKind::Symplectic, 2, "gf:2"}, 720},
                        Case{{FamilyKind::Symplectic, 3, "gf:2"}, 1451520},
                        Case{{FamilyKind::OrthEven, 2, "gf:2"}, 72},
                        Case{{FamilyKind::OrthEven, 3, "gf:2"}, 40320}}) {
    auto in = build_named(c.s.kind, c.s.rank, ring(c.s.base));
    const MatrixOFA& A = *in.ofa;
    auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in));
    std::uint64_t formula = classical_order(in.spec);
    if (G.size() != c.expected || formula != c.expected)
      o.fail(in.label() + ": bfs " + std::to_string(G.size()) + ", formula " + std::to_string(formula));
    o.detail << in.label() << "=" << G.size() << " ";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > 600) o.fail("enumeration took " + std::to_string(secs) + " s");
  o.detail << "in " << static_cast<int>(secs) << " s";
}

void c4_index(Outcome& o) {
  struct Case {
    Spec s;
    std::uint64_t index;
  };
  for (const auto& c : {Case{{FamilyKind::Symplectic, 1, "gf:2"}, 1}, Case{{FamilyKind::Symplectic, 1, "gf:3"}, 1},
                        Case{{FamilyKind::Symplectic, 2, "gf:2"}, 1}, Case{{FamilyKind::Symplectic, 2, "gf:3"}, 1},
                        Case{{FamilyKind::Symplectic, 3, "gf:2"}, 1}, Case{{FamilyKind::OrthEven, 3, "gf:2"}, 2}}) {
    auto in = build_named(c.s.kind, c.s.rank, ring(c.s.base));
    const MatrixOFA& A = *in.ofa;
    auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in));
    auto E = MatGroup::closure(A.base_ptr(), A.size(), elementary_generators(in.fam));
    if (G.size() != c.index * E.size())
      o.fail(in.label() + ": " + std::to_string(G.size()) + " / " + std::to_string(E.size()));
    if (c.s.kind == FamilyKind::OrthEven && E.size() != 20160) o.fail("EO closure " + std::to_string(E.size()));
    o.detail << in.label() << " [" << G.size() << ":" << E.size() << "] ";
  }
}

void c5_gauss(Outcome& o) {
  auto in2 = build_named(FamilyKind::Symplectic, 2, ring("gf:2"));
  GaussDecomposer g2(in2.fam);
  std::size_t n2 = 0, bad2 = 0;
  for (const auto& g : group_units(in2)) {
    ++n2;
    bad2 += !g2.verify(g, g2.decompose(g));
  }
  if (n2 != 720 || bad2) o.fail("sp l=2: " + std::to_string(bad2) + " of " + std::to_string(n2) + " failed");

  auto in3 = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  const MatrixOFA& A = *in3.ofa;
  auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in3));
  Rng rng(20240601);
  std::set<std::size_t> picks;
  while (picks.size() < 10000) picks.insert(rng() % G.size());
  GaussDecomposer g3(in3.fam);
  std::size_t bad3 = 0;
  for (std::size_t e : picks) {
    MUnit g = unit_from_matrix(A, G.elements()[e]);
    bad3 += !g3.verify(g, g3.decompose(g));
  }
  if (bad3) o.fail("sp l=3: " + std::to_string(bad3) + " of 10000 failed");
  o.detail << n2 - bad2 << "/720 and " << 10000 - bad3 << "/10000 verified, fallbacks "
           << g2.stats().fallbacks + g3.stats().fallbacks;
}

void c6_reduce(Outcome& o) {
  auto in = build_named(FamilyKind::Symplectic, 3, ring("gf:2"));
  const MatrixOFA& A = *in.ofa;
  Reducer red(in.fam);
  const HypPair eta = in.fam.eta(3);
  auto G = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in));
  std::size_t bad = 0;
  for (const Mat& m : G.elements()) {
    MUnit g = unit_from_matrix(A, m);
    auto r = red.reduce(g);
    if (!red.verify(g, r) || !in_levi_complement(A, eta, r.g_prime)) {
      if (!bad) o.fail("first failure at " + mat_str(A.base(), m));
      ++bad;
    }
  }
  o.detail << G.size() - bad << "/" << G.size() << " reassembled with g' in the Levi complement";
}

void c7_parabolic(Outcome& o) {
  auto in = build_named(FamilyKind::Symplectic, 1, ring("gf:3"));
  const MatrixOFA& A = *in.ofa;
  const CommRing& K = A.base();
  const HypPair eta = in.fam.eta(1);
  int p = 0;
  while (eta.e_plus.a.at(p, p) != K.one()) ++p;
  std::size_t eligible = 0, ok = 0;
  for (const auto& g : group_units(in)) {
    bool corner = K.is_unit(unit_matrix(A, g).at(p, p));
    auto u = parabolic_extract(A, eta, g);
    if (corner != u.has_value()) o.fail("extraction disagrees with the corner test");
    if (!u) continue;
    ++eligible;
    ok += in_parabolic(A, neg_pair(eta), u_mul(A, transvection(A, eta, A.d_neg(*u)), g));
  }
  if (ok != eligible || eligible != 18) o.fail(std::to_string(ok) + " of " + std::to_string(eligible));
  o.detail << ok << "/" << eligible << " land in P_-eta";
}

void c8_homotopes(Outcome& o) {
  CheckConfig cfg;
  cfg.tuple_cap = 1ull << 30;
  cfg.exhaustive_limit = 1ull << 20;
  std::size_t checks = 0, sampled = 0;
  auto take = [&](const std::string& what, const Report& r) {
    for (const auto& st : r.stats) {
      checks += st.tuples;
      sampled += !st.exhaustive;
      if (!st.exhaustive) o.fail(what + ": " + st.axiom + " was sampled");
    }
    if (!r.ok()) o.fail(what + ": " + first(r));
  };
  struct Case {
    const char* base;
    std::vector<Elt> levels;
  };
  for (const auto& c : {Case{"z:4", {0, 1, 2, 3}}, Case{"z:9", {3}}}) {
    auto a = std::make_shared<const TableOFA>(tabulate(MatrixOFA::linear(ring(c.base), 1)));
    HomotopeTower t(a, c.levels);
    auto dm = delta_module(*a);
    auto sm = scalar_nilmodule(a->k);
    const std::string name = std::string("linear over ") + c.base;
    for (Elt s : c.levels) {
      const std::string at = name + " s=" + std::to_string(s);
      take(at, check_homotope_ofa(t.level(s), cfg));
      take(at + " action", check_action_axioms(base_action(t.level(s)), false, cfg));
      take(at + " Delta-module", check_homotope_module(dm, homotope_module(dm, s), cfg));
      take(at + " K-module", check_homotope_module(sm, homotope_module(sm, s), cfg));
      for (Elt sp : t.subset()) take(at + " s'=" + std::to_string(sp), check_mixed_action(t, s, sp, cfg));
      take(at + " presentation", check_alternative_presentation(t, s));
    }
    take(name + " tower", check_tower(t));
  }
  o.detail << checks << " tuples, " << sampled << " sampled axioms";
}

void c9_crossed(Outcome& o) {
  for (const auto& s : {Spec{FamilyKind::Symplectic, 3, "gf:2"}, Spec{FamilyKind::OrthEven, 3, "gf:2"}}) {
    auto in = build_named(s.kind, s.rank, ring(s.base));
    auto r = crossed_module_consequences(in, 0);
    if (!r.report.ok()) o.fail(in.label() + ": " + first(r.report));
    if (r.conjugates_checked != r.group_order) o.fail(in.label() + ": not every g was checked");
    o.detail << in.label() << " g=" << r.conjugates_checked << " relations=" << r.relations << " ";
  }
}

void c10_stability(Outcome& o) {
  for (const char* b : {"gf:2", "z:4"}) {
    auto r = stable_rank_leq(FinRing::from_comm(parse_base(b)), 1);
    if (!r.holds || r.certificates.size() != r.unimodular) o.fail(std::string("sr ") + b);
    o.detail << "sr(" << b << ")<=1 with " << r.certificates.size() << " certificates; ";
  }
  std::vector<Spec> all = axiom_instances();
  for (const char* b : {"gf:2", "gf:3", "z:4"})
    for (auto k : {FamilyKind::Symplectic, FamilyKind::OrthEven, FamilyKind::OrthOdd, FamilyKind::Linear})
      all.push_back({k, 1, b});
  all.push_back({FamilyKind::Symplectic, 2, "z:4"});
  std::size_t held = 0, built = 0;
  for (const auto& s : all) {
    NamedInstance in;
    try {
      in = build_named(s.kind, s.rank, ring(s.base));
    } catch (const InvalidInput&) {
      continue;  // no built-in family for this kind over this base
    }
    ++built;
    auto r = lambda_sr_leq(in.fam, 1);
    if (!r.supported || !r.holds || r.certificates.empty()) o.fail("Lambda sr of " + in.label());
    else ++held;
  }
  o.detail << "Lambda sr<=1 for " << held << "/" << built << " built-in instances";
}

void c11_elimination(Outcome& o) {
  struct Case {
    Spec s;
    std::vector<int> alpha;
  };
  for (const auto& c : {Case{{FamilyKind::Symplectic, 3, "gf:2"}, {0, -1, 1}},
                        Case{{FamilyKind::Symplectic, 3, "gf:3"}, {1, 0, -1}},
                        Case{{FamilyKind::Symplectic, 3, "gf:2"}, {1, 0, 0}},
                        Case{{FamilyKind::OrthOdd, 3, "gf:2"}, {0, 0, -1}}}) {
    auto in = build_named(c.s.kind, c.s.rank, ring(c.s.base));
    RootBC alpha{c.alpha};
    if (root_length(alpha) == RootLength::Short && !in.fam.is_strong()) o.fail(in.label() + " is not strong");
    auto chk = check_elimination(eliminate(in.fam, alpha));
    if (!chk.ok() || chk.transported == 0) o.fail(in.label() + " " + root_str(alpha) + ": " + first(chk.relations));
    o.detail << in.label() << " " << root_str(alpha) << ": " << chk.transported << " ";
  }
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<void(Outcome&)>>> criteria{
      {"odd form and nilmodule axiom suites", c1_axioms},
      {"Steinberg relations under stmap", c2_relations},
      {"group orders by enumeration", c3_orders},
      {"elementary subgroup index", c4_index},
      {"Gauss decomposition", c5_gauss},
      {"reduction to rank 2 on Sp6(F2)", c6_reduce},
      {"parabolic extraction", c7_parabolic},
      {"homotope and mixed action identities", c8_homotopes},
      {"crossed module consequences", c9_crossed},
      {"stable rank certificates", c10_stability},
      {"elimination maps", c11_elimination},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += !o.pass;
    std::cout << (o.pass ? "PASS " : "FAIL ") << id << " " << criteria[i].first << " (" << o.detail.str()
              << ") [" << static_cast<int>(secs) << " s]" << std::endl;
  }
  return failures ? 1 : 0;
}
