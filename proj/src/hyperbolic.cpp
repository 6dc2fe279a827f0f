#include "oddform/hyperbolic.hpp"

#include <deque>
#include <unordered_map>

namespace oddform {

HypPair neg_pair(const HypPair& p) { return {p.e_plus, p.e_minus, p.q_plus, p.q_minus}; }

std::vector<std::string> check_pair(const MatrixOFA& a, const HypPair& p) {
  std::vector<std::string> out;
  auto need = [&](bool ok, const char* what) {
    if (!ok) out.push_back(what);
  };
  need(a.r_mul(p.e_plus, p.e_plus) == p.e_plus, "e_plus idempotent");
  need(a.r_mul(p.e_minus, p.e_minus) == p.e_minus, "e_minus idempotent");
  need(a.r_is_zero(a.r_mul(p.e_plus, p.e_minus)) && a.r_is_zero(a.r_mul(p.e_minus, p.e_plus)),
       "e_plus, e_minus orthogonal");
  need(a.r_bar(p.e_plus) == p.e_minus, "e_minus = conj(e_plus)");
  need(a.in_delta(p.q_plus) && a.in_delta(p.q_minus), "q in Delta");
  need(a.pi(p.q_plus) == p.e_plus && a.pi(p.q_minus) == p.e_minus, "pi(q) = e");
  need(a.r_is_zero(a.rho(p.q_plus)) && a.r_is_zero(a.rho(p.q_minus)), "rho(q) = 0");
  need(a.d_act(p.q_plus, p.e_plus) == p.q_plus && a.d_act(p.q_minus, p.e_minus) == p.q_minus,
       "q.e = q");
  return out;
}

HypPair direct_sum(const MatrixOFA& a, const HypPair& p, const HypPair& q) {
  for (const RElem* x : {&p.e_plus, &p.e_minus})
    for (const RElem* y : {&q.e_plus, &q.e_minus})
      if (!a.r_is_zero(a.r_mul(*x, *y)) || !a.r_is_zero(a.r_mul(*y, *x)))
        throw InvalidInput("hyperbolic pairs are not orthogonal");
  return {a.r_add(p.e_minus, q.e_minus), a.r_add(p.e_plus, q.e_plus),
          a.d_add(p.q_minus, q.q_minus), a.d_add(p.q_plus, q.q_plus)};
}

HypFamily::HypFamily(std::shared_ptr<const MatrixOFA> a, std::vector<HypPair> pairs)
    : a_(std::move(a)), pairs_(std::move(pairs)) {
  const MatrixOFA& A = *a_;
  const int n = rank();
  for (const auto& p : pairs_)
    if (auto bad = check_pair(A, p); !bad.empty())
      throw InvalidInput("not a hyperbolic pair: " + bad.front());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) direct_sum(A, pairs_[i], pairs_[j]);
  e_.assign(2 * n + 1, A.r_zero());
  q_.assign(2 * n + 1, A.d_zero());
  esum_ = A.r_zero();
  for (int i = 1; i <= n; ++i) {
    e_[n + i] = pairs_[i - 1].e_plus;
    e_[n - i] = pairs_[i - 1].e_minus;
    q_[n + i] = pairs_[i - 1].q_plus;
    q_[n - i] = pairs_[i - 1].q_minus;
    esum_ = A.r_add(esum_, A.r_add(e_[n + i], e_[n - i]));
  }
  e_[n] = A.r_sub(A.r_one(), esum_);
}

HypPair HypFamily::eta(int i) const {
  if (i == 0 || std::abs(i) > rank()) throw InvalidInput("index out of range");
  const HypPair& p = pairs_[std::abs(i) - 1];
  return i > 0 ? p : neg_pair(p);
}

RElem HypFamily::e_abs(int i) const { return a_->r_add(e(i), e(-i)); }

void HypFamily::set_free_units(std::vector<std::vector<RElem>> units) {
  const MatrixOFA& A = *a_;
  const int n = rank();
  if (static_cast<int>(units.size()) != n) throw InvalidInput("unit table has wrong size");
  for (int i = 0; i < n; ++i) {
    if (units[i][i] != e(i + 1)) throw InvalidInput("e_ii must equal e_i");
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        if (A.r_mul(units[i][j], units[j][k]) != units[i][k])
          throw InvalidInput("matrix units do not multiply");
  }
  units_ = std::move(units);
}

const RElem& HypFamily::unit(int i, int j) const {
  static thread_local RElem tmp;
  if (units_.empty() || i == 0 || j == 0 || (i > 0) != (j > 0))
    throw InvalidInput("no matrix unit for these indices");
  if (i > 0) return units_[i - 1][j - 1];
  tmp = a_->r_bar(units_[-j - 1][-i - 1]);
  return tmp;
}

bool HypFamily::is_strong() const {
  for (int i = 1; i <= rank(); ++i)
    if (!morita_witness(i, -i, false, false, 4)) return false;
  for (int i = 1; i < rank(); ++i)
    if (!morita_witness(i, i + 1, false)) return false;
  return true;
}

RElem HypFamily::comp(int i, int j, const RElem& x) const {
  return a_->r_mul(a_->r_mul(e(i), x), e(j));
}

std::vector<RElem> HypFamily::component_all(int i, int j, std::size_t bound) const {
  const MatrixOFA& A = *a_;
  std::vector<RElem> gens;
  std::unordered_set<RElem, RElemHash> seen;
  for (const auto& b : A.r_basis()) {
    RElem c = comp(i, j, b);
    if (!A.r_is_zero(c) && seen.insert(c).second) gens.push_back(c);
  }
  auto add = [&A](const RElem& x, const RElem& y) { return A.r_add(x, y); };
  auto scale = [&A](Elt c, const RElem& x) { return A.r_kmul(c, x); };
  return span_of<RElem, RElemHash>(A.base(), A.r_zero(), gens, add, scale, bound);
}

namespace {

template <class T>
std::vector<T> sample_cap(std::vector<T> all, std::size_t cap) {
  if (all.size() <= cap) return all;
  Rng rng(0xc0ffee ^ all.size());
  std::vector<T> out{all.front()};
  std::vector<std::size_t> idx(all.size() - 1);
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i + 1;
  std::shuffle(idx.begin(), idx.end(), rng);
  idx.resize(cap - 1);
  std::sort(idx.begin(), idx.end());
  for (auto i : idx) out.push_back(all[i]);
  return out;
}

}  // namespace

std::vector<RElem> HypFamily::component(int i, int j, std::size_t cap) const {
  return sample_cap(component_all(i, j), cap);
}

bool HypFamily::in_delta0(int i, const DElem& u) const {
  const MatrixOFA& A = *a_;
  return A.in_delta(u) && A.d_act(u, e(i)) == u && A.r_is_zero(A.r_mul(esum_, u.p));
}

std::vector<DElem> HypFamily::delta0_all(int i, std::size_t bound) const {
  const MatrixOFA& A = *a_;
  std::vector<DElem> out;
  auto ps = component_all(0, i, bound);
  auto rs = component_all(-i, i, bound);
  for (const auto& p : ps)
    for (const auto& r : rs) {
      DElem u{p, r};
      if (A.in_delta(u)) {
        out.push_back(u);
        if (out.size() > bound) throw BoundExceeded("Delta_i^0 exceeds bound");
      }
    }
  return out;
}

std::vector<DElem> HypFamily::delta0(int i, std::size_t cap) const {
  return sample_cap(delta0_all(i), cap);
}

std::vector<RElem> HypFamily::corner_units(int i) const {
  std::vector<RElem> out;
  for (const auto& x : component_all(i, i))
    if (a_->corner_inverse(x, e(i))) out.push_back(x);
  return out;
}

std::map<std::pair<int, int>, RElem> HypFamily::pierce(const RElem& x) const {
  std::map<std::pair<int, int>, RElem> out;
  for (int i = -rank(); i <= rank(); ++i)
    for (int j = -rank(); j <= rank(); ++j) out[{i, j}] = comp(i, j, x);
  return out;
}

std::pair<std::vector<DElem>, RElem> HypFamily::pierce(const DElem& u) const {
  const MatrixOFA& A = *a_;
  std::vector<DElem> parts;
  RElem c = A.r_zero();
  for (int i = -rank(); i <= rank(); ++i) {
    parts.push_back(A.d_act(u, e(i)));
    for (int k = -rank(); k < i; ++k)
      c = A.r_add(c, A.r_mul(A.r_mul(e(-i), u.r), e(k)));
  }
  return {parts, c};
}

std::pair<std::vector<RElem>, DElem> HypFamily::split_delta(int i, const DElem& v) const {
  const MatrixOFA& A = *a_;
  std::vector<RElem> as;
  DElem acc = A.d_zero();
  for (int j = -rank(); j <= rank(); ++j) {
    if (j == 0) continue;
    RElem aj = A.r_mul(e(j), v.p);
    as.push_back(aj);
    if (!A.r_is_zero(aj)) acc = A.d_add(acc, A.d_act(q(j), aj));
  }
  DElem v0 = A.d_add(A.d_neg(acc), v);
  if (!in_delta0(i, v0)) throw InvalidInput("element does not lie in Delta.e_i");
  return {as, v0};
}

std::optional<MoritaWitness> HypFamily::morita_witness(int i, int j, bool both_signs,
                                                       bool prefer_free, int max_terms) const {
  const MatrixOFA& A = *a_;
  MoritaWitness w;
  w.i = i;
  w.j = j;
  if (i == j) {
    w.terms.push_back({j, e(i), e(i)});
    return w;
  }
  if (prefer_free && is_free() && (i > 0) == (j > 0)) {
    w.terms.push_back({j, unit(i, j), unit(j, i)});
    return w;
  }
  // Breadth-first search over sums of products x y, x in R_il, y in R_li.
  struct Prod {
    int l;
    RElem x, y, xy;
  };
  std::vector<Prod> prods;
  std::unordered_set<RElem, RElemHash> seen_prod;
  std::vector<int> ls{j};
  if (both_signs && j != -j) ls.push_back(-j);
  for (int l : ls) {
    auto xs = component_all(i, l, 4096), ys = component_all(l, i, 4096);
    for (const auto& x : xs)
      for (const auto& y : ys) {
        RElem p = A.r_mul(x, y);
        if (A.r_is_zero(p) || !seen_prod.insert(p).second) continue;
        prods.push_back({l, x, y, p});
      }
  }
  struct Node {
    long prev;
    long prod;
  };
  std::unordered_map<RElem, Node, RElemHash> from;
  from[A.r_zero()] = {-1, -1};
  std::vector<RElem> layer{A.r_zero()};
  for (int depth = 0; depth < max_terms; ++depth) {
    std::vector<RElem> next;
    for (const RElem& s : layer)
      for (std::size_t p = 0; p < prods.size(); ++p) {
        RElem t = A.r_add(s, prods[p].xy);
        if (from.count(t)) continue;
        from[t] = {0, static_cast<long>(p)};
        next.push_back(t);
        if (t == e(i)) {
          std::vector<long> path;
          RElem cur = t;
          while (from[cur].prod >= 0) {
            long pi = from[cur].prod;
            path.push_back(pi);
            cur = A.r_sub(cur, prods[pi].xy);
          }
          for (auto it = path.rbegin(); it != path.rend(); ++it)
            w.terms.push_back({prods[*it].l, prods[*it].x, prods[*it].y});
          return w;
        }
      }
    layer = std::move(next);
    if (layer.empty()) break;
  }
  return std::nullopt;
}

MUnit HypFamily::t_short(int i, int j, const RElem& x) const {
  if (i == 0 || j == 0 || i == j || i == -j) throw InvalidInput("bad short index pair");
  if (!in_comp(i, j, x)) throw InvalidInput("element not in R_ij");
  return transvection(*a_, eta(j), a_->d_act(q(i), x));
}

MUnit HypFamily::t_ultra(int i, const DElem& u) const {
  if (!in_delta0(i, u)) throw InvalidInput("element not in Delta_i^0");
  return transvection(*a_, eta(i), u);
}

MUnit HypFamily::dil(int i, const RElem& x) const { return dilation(*a_, eta(i), x); }

bool HypFamily::in_d0(const MUnit& g) const {
  const MatrixOFA& A = *a_;
  return A.r_is_zero(A.r_mul(g.beta, esum_)) && A.r_is_zero(A.r_mul(esum_, g.beta)) &&
         A.d_act(g.gamma, esum_) == A.d_zero();
}

std::vector<MUnit> HypFamily::d0_elements(std::size_t bound) const {
  const MatrixOFA& A = *a_;
  std::vector<MUnit> out;
  for (const auto& x : component_all(0, 0, bound)) {
    Mat m = mat_add(A.base(), mat_id(A.base(), A.size()), x.a);
    if (!in_unitary(A, m)) continue;
    MUnit g = unit_from_matrix(A, m);
    if (in_d0(g)) out.push_back(g);
  }
  return out;
}

MUnit transvection(const MatrixOFA& a, const HypPair& eta, const DElem& u) {
  if (!a.in_delta(u)) throw InvalidInput("transvection parameter not in Delta");
  if (a.d_act(u, eta.e_plus) != u) throw InvalidInput("transvection parameter not in Delta.e");
  RElem eabs = a.r_add(eta.e_plus, eta.e_minus);
  if (!a.r_is_zero(a.r_mul(eabs, u.p))) throw InvalidInput("transvection parameter meets |eta|");
  RElem pb = a.r_bar(u.p);
  RElem beta = a.r_sub(a.r_add(u.r, u.p), pb);
  DElem gamma = a.d_sub(a.d_add(u, a.d_act(eta.q_minus, a.r_sub(u.r, pb))),
                        a.phi(a.r_add(u.r, u.p)));
  return {beta, gamma};
}

MUnit dilation(const MatrixOFA& a, const HypPair& eta, const RElem& x) {
  const RElem& e = eta.e_plus;
  if (a.r_mul(a.r_mul(e, x), e) != x) throw InvalidInput("dilation parameter not in R_ee");
  auto inv = a.corner_inverse(x, e);
  if (!inv) throw InvalidInput("dilation parameter not invertible");
  RElem binv = a.r_bar(*inv);
  RElem beta = a.r_sub(a.r_add(x, binv), a.r_add(e, eta.e_minus));
  RElem xm = a.r_sub(x, e);
  DElem gamma = a.d_sub(a.d_add(a.d_act(eta.q_minus, a.r_sub(binv, eta.e_minus)),
                                a.d_act(eta.q_plus, xm)),
                        a.phi(xm));
  return {beta, gamma};
}

DElem transvection_param(const MatrixOFA& a, const HypPair& eta, const MUnit& t) {
  RElem co = a.r_sub(a.r_one(), a.r_add(eta.e_plus, eta.e_minus));
  return {a.r_mul(a.r_mul(co, t.beta), eta.e_plus),
          a.r_mul(a.r_mul(eta.e_minus, t.beta), eta.e_plus)};
}

bool in_parabolic(const MatrixOFA& a, const HypPair& eta, const MUnit& g) {
  const RElem& ep = eta.e_plus;
  const RElem& em = eta.e_minus;
  RElem bm = a.r_mul(g.beta, em);
  if (bm != a.r_mul(em, bm)) return false;
  RElem pb = a.r_mul(ep, g.beta);
  if (pb != a.r_mul(pb, ep)) return false;
  return a.d_act(g.gamma, em) == a.d_act(eta.q_minus, bm);
}

bool in_levi_complement(const MatrixOFA& a, const HypPair& eta, const MUnit& g) {
  RElem e = a.r_add(eta.e_plus, eta.e_minus);
  return a.r_is_zero(a.r_mul(g.beta, e)) && a.r_is_zero(a.r_mul(e, g.beta)) &&
         a.d_act(g.gamma, e) == a.d_zero();
}

LeviParts levi_retraction(const MatrixOFA& a, const HypPair& eta, const MUnit& g) {
  if (!in_parabolic(a, eta, g)) throw InvalidInput("element is not in the parabolic subgroup");
  const RElem& ep = eta.e_plus;
  RElem e = a.r_add(ep, eta.e_minus);
  RElem co = a.r_sub(a.r_one(), e);
  LeviParts out;
  out.p1 = a.r_add(ep, a.r_mul(a.r_mul(ep, g.beta), ep));
  out.p2.beta = a.r_mul(a.r_mul(co, g.beta), co);
  out.p2.gamma = a.d_act(a.d_sub(g.gamma, a.d_act(eta.q_minus, g.beta)), co);
  if (!in_levi_complement(a, eta, out.p2) || !is_unitary(a, out.p2))
    throw std::logic_error("Levi complement factor is not in U_{|eta|'}");
  MUnit levi = u_mul(a, dilation(a, eta, out.p1), out.p2);
  MUnit t = u_mul(a, g, u_inv(a, levi));
  out.u = transvection_param(a, eta, t);
  if (transvection(a, eta, out.u) != t) throw std::logic_error("unipotent factor mismatch");
  return out;
}

std::optional<DElem> parabolic_extract(const MatrixOFA& a, const HypPair& eta, const MUnit& g) {
  const RElem& ep = eta.e_plus;
  RElem corner = a.r_add(ep, a.r_mul(a.r_mul(ep, g.beta), ep));
  auto inv = a.corner_inverse(corner, ep);
  if (!inv) return std::nullopt;
  DElem t = a.d_sub(a.d_sub(g.gamma, a.d_act(eta.q_minus, g.beta)), a.d_act(eta.q_plus, g.beta));
  DElem u = a.d_act(a.d_add(t, a.phi(g.beta)), *inv);
  RElem co = a.r_sub(a.r_one(), a.r_add(ep, eta.e_minus));
  if (u.p != a.r_mul(a.r_mul(co, g.beta), *inv) ||
      u.r != a.r_mul(a.r_mul(eta.e_minus, g.beta), *inv))
    throw std::logic_error("extracted parameter disagrees with its components");
  return u;
}

std::vector<std::pair<RElem, RElem>> section_ring(const MatrixOFA& a, const RElem& c,
                                                  const MoritaWitness& w) {
  std::vector<std::pair<RElem, RElem>> out;
  for (const auto& t : w.terms) out.push_back({t.x, a.r_mul(t.y, c)});
  return out;
}

FormSection section_form(const MatrixOFA& a, const DElem& v, const MoritaWitness& w) {
  FormSection s;
  s.correction = a.r_zero();
  std::vector<RElem> ts;
  for (const auto& t : w.terms) {
    s.terms.push_back({a.d_act(v, t.x), t.y});
    ts.push_back(a.r_mul(t.x, t.y));
  }
  for (std::size_t k = 0; k < ts.size(); ++k)
    for (std::size_t k2 = k + 1; k2 < ts.size(); ++k2)
      s.correction = a.r_add(s.correction, a.r_mul(a.r_mul(a.r_bar(ts[k2]), v.r), ts[k]));
  return s;
}

DElem reassemble_form(const MatrixOFA& a, const FormSection& s) {
  DElem acc = a.d_zero();
  for (const auto& [u, x] : s.terms) acc = a.d_add(acc, a.d_act(u, x));
  return a.d_add(acc, a.phi(s.correction));
}

std::string NamedInstance::label() const {
  return kind_name(spec.kind) + " l=" + std::to_string(spec.rank) + " " + spec.k->name();
}

NamedInstance build_named(FamilyKind kind, int rank, RingPtr k) {
  NamedInstance in;
  in.spec = {kind, rank, k};
  const CommRing& K = *k;
  if (rank < 1) throw InvalidInput("rank must be at least 1");
  auto ofa = std::make_shared<MatrixOFA>(kind == FamilyKind::Linear
                                             ? MatrixOFA::linear(k, rank)
                                             : MatrixOFA::from_module(named_module(in.spec)));
  const MatrixOFA& A = *ofa;
  const int n = A.size();
  const bool odd = kind == FamilyKind::OrthOdd;
  auto E = [&](int i, int j) { return mat_unit(K, n, i, j, K.one()); };
  std::vector<HypPair> pairs;
  std::vector<std::vector<RElem>> units(rank, std::vector<RElem>(rank));
  for (int i = 1; i <= rank; ++i) {
    HypPair p;
    if (kind == FamilyKind::Linear) {
      p.e_plus = {E(i - 1, i - 1), Mat(n)};
    } else {
      p.e_plus = A.lift(E(basis_pos(i, rank, odd), basis_pos(i, rank, odd)));
    }
    p.e_minus = A.r_bar(p.e_plus);
    p.q_plus = {p.e_plus, A.r_zero()};
    p.q_minus = {p.e_minus, A.r_zero()};
    pairs.push_back(p);
    for (int j = 1; j <= rank; ++j) {
      if (kind == FamilyKind::Linear)
        units[i - 1][j - 1] = {E(i - 1, j - 1), Mat(n)};
      else
        units[i - 1][j - 1] = A.lift(E(basis_pos(i, rank, odd), basis_pos(j, rank, odd)));
    }
  }
  in.ofa = ofa;
  in.fam = HypFamily(ofa, pairs);
  in.fam.set_free_units(units);
  return in;
}

std::vector<Mat> elementary_generators(const HypFamily& f) {
  const MatrixOFA& A = f.ofa();
  std::vector<Mat> out;
  std::unordered_set<Mat, MatHash> seen;
  auto push = [&](const MUnit& g) {
    Mat m = unit_matrix(A, g);
    if (m != mat_id(A.base(), A.size()) && seen.insert(m).second) out.push_back(m);
  };
  const int n = f.rank();
  for (int i = -n; i <= n; ++i) {
    if (i == 0) continue;
    for (int j = -n; j <= n; ++j) {
      if (j == 0 || j == i || j == -i) continue;
      for (const auto& x : f.component(i, j)) push(f.t_short(i, j, x));
    }
    for (const auto& u : f.delta0(i)) push(f.t_ultra(i, u));
  }
  return out;
}

std::vector<Mat> full_group_generators(const NamedInstance& in) {
  const MatrixOFA& A = *in.ofa;
  const CommRing& K = A.base();
  const HypFamily& f = in.fam;
  std::vector<Mat> out = elementary_generators(f);
  for (int i = 1; i <= f.rank(); ++i)
    for (Elt c : K.units()) {
      if (c == K.one()) continue;
      out.push_back(unit_matrix(A, f.dil(i, A.r_kmul(c, f.e(i)))));
    }
  if (in.spec.kind == FamilyKind::Linear) return out;
  const int l = in.spec.rank;
  const bool odd = in.spec.kind == FamilyKind::OrthOdd;
  const int p = basis_pos(1, l, odd), m = basis_pos(-1, l, odd);
  bool found = false;
  for (Elt c : K.units()) {
    for (Elt d : K.units()) {
      Mat g = mat_id(K, A.size());
      g.set(p, p, K.zero());
      g.set(m, m, K.zero());
      g.set(m, p, c);
      g.set(p, m, d);
      if (classical_oracle(in.spec, g) && in_unitary(A, g)) {
        out.push_back(g);
        found = true;
        break;
      }
    }
    if (found) break;
  }
  if (odd) {
    Mat g = mat_id(K, A.size());
    const int z = basis_pos(0, l, true);
    g.set(z, z, K.neg(K.one()));
    if (g != mat_id(K, A.size()) && in_unitary(A, g)) out.push_back(g);
  }
  return out;
}

}  // namespace oddform
