#include "oddform/steinberg.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <unordered_set>

#include "json.hpp"

namespace oddform {

namespace {

bool pair_ok(int i, int j) { return i != 0 && j != 0 && i != j && i != -j; }

std::vector<int> indices(int n) {
  std::vector<int> out;
  for (int i = -n; i <= n; ++i)
    if (i) out.push_back(i);
  return out;
}

Letter inv(Letter x) { return {x.gen, -x.exp}; }
Word comm(Letter x, Letter y) { return {x, y, inv(x), inv(y)}; }

Mat mat_comm(const CommRing& k, const Mat& x, const Mat& y) {
  return mat_mul(k, mat_mul(k, x, y), mat_mul(k, *mat_inverse(k, x), *mat_inverse(k, y)));
}

bool is_f2(const CommRing& k) { return k.size() == 2 && k.modulus() == 2; }

const std::vector<std::string>& tags() {
  static const std::vector<std::string> t{"St0", "St1", "St2", "St3", "St4",
                                          "St5", "St6", "St7", "St8"};
  return t;
}

Presentation build_relations(const HypFamily& fam, std::size_t cap) {
  const MatrixOFA& A = fam.ofa();
  const int n = fam.rank();
  const auto idx = indices(n);
  Presentation P;
  std::map<std::pair<int, int>, std::vector<RElem>> R;
  std::map<int, std::vector<DElem>> D;
  for (int i : idx) {
    D[i] = fam.delta0(i, cap);
    for (int j : idx)
      if (pair_ok(i, j)) R[{i, j}] = fam.component(i, j, cap);
  }
  auto X = [&](int i, int j, const RElem& a) { return P.letter(x_short(i, j, a, A)); };
  auto Y = [&](int i, const DElem& u) { return P.letter(x_ultra(i, u, A)); };

  for (const auto& [ij, as] : R)
    for (const auto& a : as)
      P.add("St0", {X(ij.first, ij.second, a)}, {X(-ij.second, -ij.first, A.r_neg(A.r_bar(a)))});
  for (const auto& [ij, as] : R)
    for (const auto& a : as)
      for (const auto& b : as) {
        auto [i, j] = ij;
        P.add("St1", {X(i, j, a), X(i, j, b)}, {X(i, j, A.r_add(a, b))});
      }
  for (int i : idx)
    for (const auto& u : D[i])
      for (const auto& v : D[i]) P.add("St2", {Y(i, u), Y(i, v)}, {Y(i, A.d_add(u, v))});
  for (const auto& [ij, as] : R)
    for (const auto& [kl, bs] : R) {
      auto [i, j] = ij;
      auto [k, l] = kl;
      if (!(i != l && l != -j && j != k && i != -k)) continue;
      for (const auto& a : as)
        for (const auto& b : bs) P.add("St3", comm(X(i, j, a), X(k, l, b)), {});
    }
  for (int i : idx)
    for (int j : idx)
      for (int k : idx) {
        if (!pair_ok(i, j) || !pair_ok(j, k) || !pair_ok(i, k)) continue;
        for (const auto& a : R[{i, j}])
          for (const auto& b : R[{j, k}])
            P.add("St4", comm(X(i, j, a), X(j, k, b)), {X(i, k, A.r_mul(a, b))});
      }
  for (int i : idx)
    for (int j : idx) {
      if (!pair_ok(i, j)) continue;
      for (const auto& a : R[{i, j}])
        for (const auto& b : R[{j, -i}])
          P.add("St5", comm(X(i, j, a), X(j, -i, b)), {Y(-i, A.phi(A.r_mul(a, b)))});
    }
  for (int i : idx)
    for (int j : idx) {
      if (!pair_ok(i, j)) continue;
      for (const auto& u : D[i])
        for (const auto& v : D[j])
          P.add("St6", comm(Y(i, u), Y(j, v)),
                {X(-i, j, A.r_neg(A.r_mul(A.r_bar(A.pi(u)), A.pi(v))))});
    }
  for (int i : idx)
    for (const auto& [jk, as] : R) {
      auto [j, k] = jk;
      if (j == i || i == -k) continue;
      for (const auto& u : D[i])
        for (const auto& a : as) P.add("St7", comm(Y(i, u), X(j, k, a)), {});
    }
  for (int i : idx)
    for (int j : idx) {
      if (!pair_ok(i, j)) continue;
      for (const auto& u : D[i])
        for (const auto& a : R[{i, j}])
          P.add("St8", comm(Y(i, u), X(i, j, a)),
                {X(-i, j, A.r_mul(A.rho(u), a)), Y(j, A.d_neg(A.d_act(u, A.r_neg(a))))});
    }
  return P;
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace

std::size_t StGenHash::operator()(const StGen& g) const {
  std::size_t h = g.ultra ? 0x9e37 : 0x7f4a;
  h = h * 131 + static_cast<std::size_t>(g.i + 64);
  h = h * 131 + static_cast<std::size_t>(g.j + 64);
  return h * 1000003 ^ (g.ultra ? g.u.hash() : g.a.hash());
}

StGen x_short(int i, int j, RElem a, const MatrixOFA& A) {
  return StGen{false, i, j, std::move(a), A.d_zero()};
}

StGen x_ultra(int i, DElem u, const MatrixOFA& A) {
  return StGen{true, i, 0, A.r_zero(), std::move(u)};
}

std::string gen_str(const MatrixOFA& A, const StGen& g) {
  if (g.ultra) return "X_" + std::to_string(g.i) + "(" + A.d_str(g.u) + ")";
  return "X_" + std::to_string(g.i) + "," + std::to_string(g.j) + "(" + A.r_str(g.a) + ")";
}

RootBC gen_root(int n, const StGen& g) {
  return g.ultra ? root_of_index(n, g.i) : root_of_pair(n, g.i, g.j);
}

std::uint32_t Presentation::intern(const StGen& g) {
  auto [it, fresh] = index_.try_emplace(g, static_cast<std::uint32_t>(gens_.size()));
  if (fresh) gens_.push_back(g);
  return it->second;
}

void Presentation::add(std::string tag, Word lhs, Word rhs) {
  rels_.push_back({std::move(tag), std::move(lhs), std::move(rhs)});
}

std::map<std::string, std::size_t> Presentation::counts() const {
  std::map<std::string, std::size_t> out;
  for (const auto& t : tags()) out[t] = 0;
  for (const auto& r : rels_) ++out[r.tag];
  return out;
}

std::string Presentation::relation_str(const MatrixOFA& A, const StRelation& r) const {
  auto word = [&](const Word& w) {
    if (w.empty()) return std::string("1");
    std::string s;
    for (const auto& l : w) {
      if (!s.empty()) s += " ";
      s += gen_str(A, gens_[l.gen]) + (l.exp < 0 ? "^-1" : "");
    }
    return s;
  };
  return r.tag + ": " + word(r.lhs) + " = " + word(r.rhs);
}

Presentation instantiate_relations(const HypFamily& fam, std::size_t cap) {
  if (fam.rank() < 2) throw InvalidInput("Steinberg relations need rank at least 2");
  return build_relations(fam, cap);
}

Assignment stmap_assignment(const HypFamily& fam) {
  Assignment asg;
  asg.k = fam.ofa().base_ptr();
  asg.dim = fam.ofa().size();
  asg.image = [fam](const StGen& g) {
    const MatrixOFA& A = fam.ofa();
    return unit_matrix(A, g.ultra ? fam.t_ultra(g.i, g.u) : fam.t_short(g.i, g.j, g.a));
  };
  return asg;
}

Assignment trivial_assignment(RingPtr k, int dim) {
  Mat id = mat_id(*k, dim);
  return Assignment{k, dim, [id](const StGen&) { return id; }};
}

RelationEvaluator::RelationEvaluator(const Presentation& p, RingPtr k, int dim)
    : p_(&p), k_(std::move(k)), dim_(dim), packed_(is_f2(*k_) && dim <= 8) {
  auto flat = [](const Word& w) {
    std::vector<std::uint32_t> out;
    for (const auto& l : w) out.push_back(2 * l.gen + (l.exp < 0));
    return out;
  };
  for (const auto& r : p.relations()) {
    lhs_.push_back(flat(r.lhs));
    rhs_.push_back(flat(r.rhs));
  }
}

std::optional<std::size_t> RelationEvaluator::first_failure(
    const std::vector<std::uint64_t>& img, const std::vector<std::uint64_t>& inv) const {
  const std::uint64_t id = pack_gf2(mat_id(*k_, dim_));
  std::vector<Gf2Right> tab(2 * img.size());
  std::vector<char> trivial(2 * img.size());
  for (std::size_t g = 0; g < img.size(); ++g) {
    tab[2 * g] = Gf2Right(img[g], dim_);
    tab[2 * g + 1] = Gf2Right(inv[g], dim_);
    trivial[2 * g] = trivial[2 * g + 1] = img[g] == id;
  }
  auto eval = [&](const std::vector<std::uint32_t>& w) {
    std::uint64_t x = id;
    for (auto c : w)
      if (!trivial[c]) x = tab[c].apply(x);
    return x;
  };
  for (std::size_t r = 0; r < lhs_.size(); ++r)
    if (eval(lhs_[r]) != eval(rhs_[r])) return r;
  return std::nullopt;
}

Report RelationEvaluator::check(const std::vector<Mat>& images, const MatrixOFA* A) const {
  const CommRing& K = *k_;
  const auto& rels = p_->relations();
  std::vector<Mat> inverse;
  for (const Mat& m : images) {
    auto i = mat_inverse(K, m);
    if (!i) throw InvalidInput("generator image is not invertible");
    inverse.push_back(*i);
  }
  std::vector<char> fails(rels.size(), 0);
  if (packed_) {
    std::vector<std::uint64_t> img, iv;
    for (std::size_t g = 0; g < images.size(); ++g) {
      img.push_back(pack_gf2(images[g]));
      iv.push_back(pack_gf2(inverse[g]));
    }
    const std::uint64_t id = pack_gf2(mat_id(K, dim_));
    std::vector<Gf2Right> tab(2 * img.size());
    for (std::size_t g = 0; g < img.size(); ++g) {
      tab[2 * g] = Gf2Right(img[g], dim_);
      tab[2 * g + 1] = Gf2Right(iv[g], dim_);
    }
    auto eval = [&](const std::vector<std::uint32_t>& w) {
      std::uint64_t x = id;
      for (auto c : w) x = tab[c].apply(x);
      return x;
    };
    for (std::size_t r = 0; r < rels.size(); ++r) fails[r] = eval(lhs_[r]) != eval(rhs_[r]);
  } else {
    const Mat id = mat_id(K, dim_);
    auto eval = [&](const std::vector<std::uint32_t>& w) {
      Mat x = id;
      for (auto c : w) x = mat_mul(K, x, (c & 1) ? inverse[c >> 1] : images[c >> 1]);
      return x;
    };
    for (std::size_t r = 0; r < rels.size(); ++r) fails[r] = eval(lhs_[r]) != eval(rhs_[r]);
  }
  Report rep;
  std::map<std::string, AxiomStat> st;
  for (const auto& t : tags()) st[t] = AxiomStat{t, 0, 0, true};
  for (std::size_t r = 0; r < rels.size(); ++r) {
    auto& s = st[rels[r].tag];
    s.axiom = rels[r].tag;
    s.exhaustive = true;
    ++s.tuples;
    if (!fails[r]) continue;
    if (s.failures++ == 0)
      rep.violations.push_back({rels[r].tag, A ? p_->relation_str(*A, rels[r])
                                               : "relation #" + std::to_string(r)});
  }
  for (auto& [t, s] : st) rep.stats.push_back(s);
  return rep;
}

Report check_assignment(const Assignment& asg, const Presentation& p, const MatrixOFA* A) {
  std::vector<Mat> images;
  for (const auto& g : p.generators()) images.push_back(asg.image(g));
  return RelationEvaluator(p, asg.k, asg.dim).check(images, A);
}

Mat diag_matrix(const HypFamily& fam, const DiagGen& d) {
  const MatrixOFA& A = fam.ofa();
  return unit_matrix(A, d.i == 0 ? d.g : fam.dil(d.i, d.a));
}

StGen diag_action(const HypFamily& fam, const DiagGen& d, const StGen& x) {
  const MatrixOFA& A = fam.ofa();
  if (d.i == 0) {
    if (!x.ultra) return x;
    return x_ultra(x.i, A.d_add(A.d_act(d.g.gamma, A.pi(x.u)), x.u), A);
  }
  const int i = d.i;
  auto ainv = A.corner_inverse(d.a, fam.e(i));
  if (!ainv) throw InvalidInput("dilation parameter is not a unit of R_ii");
  if (x.ultra) {
    if (x.i == i) return x_ultra(x.i, A.d_act(x.u, *ainv), A);
    if (x.i == -i) return x_ultra(x.i, A.d_act(x.u, A.r_bar(d.a)), A);
    return x;
  }
  RElem b = x.a;
  if (x.i == i) b = A.r_mul(d.a, b);
  if (x.i == -i) b = A.r_mul(A.r_bar(*ainv), b);
  if (x.j == i) b = A.r_mul(b, *ainv);
  if (x.j == -i) b = A.r_mul(b, A.r_bar(d.a));
  return x_short(x.i, x.j, b, A);
}

std::vector<StGen> root_subgroup(const HypFamily& fam, const RootBC& alpha) {
  const MatrixOFA& A = fam.ofa();
  const int n = fam.rank();
  if (static_cast<int>(alpha.v.size()) != n) throw InvalidInput("root of the wrong rank");
  const RootLength len = root_length(alpha);
  std::vector<StGen> out;
  if (len == RootLength::Short) {
    for (int i : indices(n))
      for (int j : indices(n))
        if (pair_ok(i, j) && root_of_pair(n, i, j) == alpha) {
          for (const auto& a : fam.component(i, j)) out.push_back(x_short(i, j, a, A));
          return out;
        }
  }
  int i = 0;
  for (int k = 0; k < n; ++k)
    if (alpha.v[k]) i = alpha.v[k] > 0 ? k + 1 : -(k + 1);
  for (const auto& u : fam.delta0(i))
    if (len == RootLength::Ultrashort || A.r_is_zero(u.p)) out.push_back(x_ultra(i, u, A));
  return out;
}

namespace {

bool in_phi(const RootBC& r) {
  try {
    root_length(r);
    return true;
  } catch (const InvalidInput&) {
    return false;
  }
}

RootBC combo(int i, const RootBC& a, int j, const RootBC& b) {
  RootBC r{std::vector<int>(a.v.size())};
  for (std::size_t k = 0; k < a.v.size(); ++k) r.v[k] = i * a.v[k] + j * b.v[k];
  return r;
}

bool proportional(const RootBC& a, const RootBC& b) {
  for (std::size_t p = 0; p < a.v.size(); ++p)
    for (std::size_t q = 0; q < a.v.size(); ++q)
      if (a.v[p] * b.v[q] != a.v[q] * b.v[p]) return false;
  return true;
}

int dot(const RootBC& a, const RootBC& b) {
  int s = 0;
  for (std::size_t k = 0; k < a.v.size(); ++k) s += a.v[k] * b.v[k];
  return s;
}

}  // namespace

bool commutator_contained(const HypFamily& fam, const RootBC& alpha, const RootBC& beta) {
  if (proportional(alpha, beta) && dot(alpha, beta) < 0)
    throw InvalidInput("antiparallel roots");
  const MatrixOFA& A = fam.ofa();
  const CommRing& K = A.base();
  const auto asg = stmap_assignment(fam);
  std::vector<Mat> rhs;
  std::set<RootBC> seen;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) {
      RootBC g = combo(i, alpha, j, beta);
      if (!in_phi(g) || !seen.insert(g).second) continue;
      for (const auto& x : root_subgroup(fam, g)) rhs.push_back(asg.image(x));
    }
  auto closure = MatGroup::closure(A.base_ptr(), A.size(), rhs);
  for (const auto& x : root_subgroup(fam, alpha))
    for (const auto& y : root_subgroup(fam, beta))
      if (!closure.contains(mat_comm(K, asg.image(x), asg.image(y)))) return false;
  return true;
}

Elimination eliminate(const HypFamily& fam, const RootBC& alpha) {
  const int n = fam.rank();
  if (static_cast<int>(alpha.v.size()) != n) throw InvalidInput("root of the wrong rank");
  Elimination e;
  e.alpha = alpha;
  e.length = root_length(alpha);
  if (e.length == RootLength::Long) throw InvalidInput("long roots cannot be eliminated");
  e.full = &fam;
  RootBC standard{std::vector<int>(n, 0)};
  if (e.length == RootLength::Short) {
    standard.v[n - 1] = 1;
    standard.v[n - 2] = -1;
  } else {
    standard.v[0] = 1;
  }
  bool found = false;
  for (const auto& w : weyl_group(n))
    if (weyl_act(w, standard) == alpha) {
      e.w = w;
      found = true;
      break;
    }
  if (!found) throw std::logic_error("Weyl group is not transitive on roots of one length");
  std::vector<HypPair> pairs;
  for (int k = 1; k <= n; ++k) pairs.push_back(fam.eta(e.w.act(k)));
  e.moved = HypFamily(fam.ofa_ptr(), pairs);
  std::vector<HypPair> q;
  if (e.length == RootLength::Short) {
    q.assign(pairs.begin(), pairs.end() - 2);
    q.push_back(direct_sum(fam.ofa(), pairs[n - 2], pairs[n - 1]));
  } else {
    q.assign(pairs.begin() + 1, pairs.end());
  }
  e.quotient = HypFamily(fam.ofa_ptr(), q);
  return e;
}

std::vector<StGen> Elimination::image(const StGen& x) const {
  const MatrixOFA& A = moved.ofa();
  const int n = moved.rank();
  auto e = [&](int k) { return moved.e(k); };
  std::vector<StGen> out;
  auto X = [&](int i, int j, const RElem& a) { out.push_back(x_short(i, j, a, A)); };
  auto Y = [&](int i, const DElem& u) { out.push_back(x_ultra(i, u, A)); };
  if (length == RootLength::Short) {
    const int m = n - 1;
    if (!x.ultra) {
      const int i = x.i, j = x.j;
      const RElem& a = x.a;
      RElem b = A.r_neg(A.r_bar(a));
      if (std::abs(i) != m && std::abs(j) != m) {
        X(i, j, a);
      } else if (j == m) {
        X(i, n - 1, A.r_mul(a, e(n - 1)));
        X(i, n, A.r_mul(a, e(n)));
      } else if (j == -m) {
        X(n - 1, -i, A.r_mul(e(n - 1), b));
        X(n, -i, A.r_mul(e(n), b));
      } else if (i == m) {
        X(n - 1, j, A.r_mul(e(n - 1), a));
        X(n, j, A.r_mul(e(n), a));
      } else {
        X(-j, n - 1, A.r_mul(b, e(n - 1)));
        X(-j, n, A.r_mul(b, e(n)));
      }
    } else if (std::abs(x.i) != m) {
      Y(x.i, x.u);
    } else {
      const int s = x.i > 0 ? 1 : -1;
      const int p = s * (n - 1), r = s * n;
      Y(p, A.d_act(x.u, e(p)));
      Y(r, A.d_act(x.u, e(r)));
      X(-r, p, A.r_mul(A.r_mul(e(-r), A.rho(x.u)), e(p)));
    }
  } else {
    auto up = [](int k) { return k > 0 ? k + 1 : k - 1; };
    if (!x.ultra) {
      X(up(x.i), up(x.j), x.a);
    } else {
      const int i = up(x.i);
      const RElem& p = A.pi(x.u);
      DElem v = A.d_sub(A.d_sub(x.u, A.d_act(moved.q(1), p)), A.d_act(moved.q(-1), p));
      Y(i, v);
      X(-1, i, A.r_mul(e(-1), p));
      X(1, i, A.r_mul(e(1), p));
    }
  }
  for (auto& g : out) {
    g.i = w.act(g.i);
    if (!g.ultra) g.j = w.act(g.j);
  }
  return out;
}

RootBC Elimination::project(const RootBC& r) const {
  const int n = static_cast<int>(r.v.size());
  std::vector<int> moved_v(n);
  for (int k = 1; k <= n; ++k) {
    int img = w.act(k);
    moved_v[k - 1] = (img > 0 ? 1 : -1) * r.v[std::abs(img) - 1];
  }
  RootBC out;
  if (length == RootLength::Short) {
    out.v.assign(moved_v.begin(), moved_v.end() - 2);
    out.v.push_back(moved_v[n - 2] + moved_v[n - 1]);
  } else {
    out.v.assign(moved_v.begin() + 1, moved_v.end());
  }
  return out;
}

ElimCheck check_elimination(const Elimination& e, std::size_t cap) {
  ElimCheck out;
  const HypFamily& full = *e.full;
  const MatrixOFA& A = full.ofa();
  const CommRing& K = A.base();
  const int n = full.rank();
  const int m = e.quotient.rank();
  Presentation quot = build_relations(e.quotient, cap);
  Presentation moved;
  std::vector<Word> img_words;
  const auto st_full = stmap_assignment(full);
  const auto st_quot = stmap_assignment(e.quotient);
  for (const auto& g : quot.generators()) {
    auto img = e.image(g);
    Word w;
    Mat prod = mat_id(K, A.size());
    RootBC rq = gen_root(m, g);
    RootBC rq2 = combo(2, rq, 0, rq);
    for (const auto& x : img) {
      w.push_back(moved.letter(x));
      prod = mat_mul(K, prod, st_full.image(x));
      RootBC p = e.project(gen_root(n, x));
      if (!(p == rq || (g.ultra && p == rq2))) ++out.root_mismatches;
    }
    if (prod != st_quot.image(g)) ++out.generator_mismatches;
    img_words.push_back(std::move(w));
  }
  auto transport = [&](const Word& w) {
    Word out;
    for (const auto& l : w) {
      const Word& im = img_words[l.gen];
      if (l.exp > 0) {
        out.insert(out.end(), im.begin(), im.end());
      } else {
        for (auto it = im.rbegin(); it != im.rend(); ++it) out.push_back(inv(*it));
      }
    }
    return out;
  };
  for (const auto& r : quot.relations()) moved.add(r.tag, transport(r.lhs), transport(r.rhs));
  out.transported = moved.relations().size();
  out.relations = check_assignment(st_full, moved, &A);
  return out;
}

UnipotentCheck u_plus_minus(const HypFamily& fam, int sign, std::uint64_t bound) {
  const MatrixOFA& A = fam.ofa();
  const CommRing& K = A.base();
  const int n = fam.rank();
  const auto asg = stmap_assignment(fam);
  UnipotentCheck out;
  // One root subgroup per positive (or negative) root, in a fixed order.
  std::vector<std::vector<Mat>> subgroups;
  std::set<RootBC> roots;
  out.root_product = 1;
  for (int i : indices(n))
    for (int j : indices(n)) {
      if (!pair_ok(i, j) || (sign > 0 ? i >= j : i <= j)) continue;
      auto comp = fam.component_all(i, j);
      for (const auto& a : comp) out.gens.push_back(x_short(i, j, a, A));
      if (!roots.insert(root_of_pair(n, i, j)).second) continue;
      out.root_product *= comp.size();
      std::vector<Mat> ms;
      for (const auto& a : comp) ms.push_back(asg.image(x_short(i, j, a, A)));
      subgroups.push_back(std::move(ms));
    }
  for (int k : indices(n)) {
    if (sign * k < 0) continue;
    auto ds = fam.delta0_all(k);
    out.root_product *= ds.size();
    std::vector<Mat> ms;
    for (const auto& u : ds) {
      out.gens.push_back(x_ultra(k, u, A));
      ms.push_back(asg.image(out.gens.back()));
    }
    subgroups.push_back(std::move(ms));
  }
  std::vector<Mat> gm;
  for (const auto& g : out.gens) gm.push_back(asg.image(g));
  out.closure_order = MatGroup::closure(A.base_ptr(), A.size(), gm, bound).size();
  if (out.root_product > bound) throw BoundExceeded("root product exceeds bound");
  std::unordered_set<Mat, MatHash> forms{mat_id(K, A.size())};
  for (const auto& sub : subgroups) {
    std::unordered_set<Mat, MatHash> next;
    for (const Mat& x : forms)
      for (const Mat& y : sub) next.insert(mat_mul(K, x, y));
    forms = std::move(next);
  }
  out.normal_forms = forms.size();
  return out;
}

namespace {

void short_witness(const HypFamily& fam, int i, int k, const RElem& c, CommutatorWord& out) {
  const MatrixOFA& A = fam.ofa();
  if (A.r_is_zero(c)) return;
  int j = 1;
  while (j == std::abs(i) || j == std::abs(k)) ++j;
  auto w = fam.morita_witness(i, j, true);
  if (!w) throw InvalidInput("no Morita witness for e_" + std::to_string(i));
  for (const auto& t : w->terms)
    out.pairs.push_back({x_short(i, t.l, t.x, A), x_short(t.l, k, A.r_mul(t.y, c), A)});
}

}  // namespace

CommutatorWord perfectness_witness(const HypFamily& fam, const StGen& g) {
  const int n = fam.rank();
  if (n < 3) throw InvalidInput("perfectness witnesses need rank at least 3");
  const MatrixOFA& A = fam.ofa();
  CommutatorWord out;
  if (!g.ultra) {
    short_witness(fam, g.i, g.j, g.a, out);
    return out;
  }
  const int i = g.i;
  if (g.u == A.d_zero()) return out;
  const int j = std::abs(i) == 1 ? 2 : 1;
  auto w = fam.morita_witness(i, j, true);
  auto wm = fam.morita_witness(-i, j, true);
  if (!w || !wm) throw InvalidInput("no Morita witness for e_" + std::to_string(i));
  FormSection sf = section_form(A, g.u, *w);
  for (std::size_t p = 0; p < sf.terms.size(); ++p) {
    const int l = w->terms[p].l;
    const auto& [u, b] = sf.terms[p];
    // X_i(u.b) = X_{-l,i}(rho(-u) b) [X_l(-u), X_li(-b)]
    short_witness(fam, -l, i, A.r_mul(A.rho(A.d_neg(u)), b), out);
    out.pairs.push_back({x_ultra(l, A.d_neg(u), A), x_short(l, i, A.r_neg(b), A)});
  }
  if (!A.r_is_zero(sf.correction))
    for (const auto& t : wm->terms)
      out.pairs.push_back({x_short(-i, t.l, t.x, A), x_short(t.l, i, A.r_mul(t.y, sf.correction), A)});
  return out;
}

Mat commutator_word_image(const Assignment& asg, const CommutatorWord& w) {
  const CommRing& K = *asg.k;
  Mat acc = mat_id(K, asg.dim);
  for (const auto& [x, y] : w.pairs) acc = mat_mul(K, acc, mat_comm(K, asg.image(x), asg.image(y)));
  return acc;
}

namespace {

[[noreturn]] void identity_fails(const std::string& name, int l) {
  throw InvalidInput("identity '" + name + "' fails (l = " + std::to_string(l) + ")");
}

}  // namespace

GroupMap induced_hom_ring(const HypFamily& fam, RingPtr k, int dim, int i, int j, int kk,
                          const RingPairMap& f, const MoritaWitness& w, std::size_t cap) {
  const MatrixOFA& A = fam.ofa();
  const CommRing& K = *k;
  const Mat id = mat_id(K, dim);
  const std::vector<int> ls{j, -j};
  for (int l : ls) {
    auto as = fam.component(i, l, cap), bs = fam.component(l, kk, cap);
    for (int l2 : ls) {
      auto as2 = fam.component(i, l2, cap), bs2 = fam.component(l2, kk, cap);
      for (const auto& a : as)
        for (const auto& b : bs)
          for (const auto& a2 : as2)
            for (const auto& b2 : bs2)
              if (mat_comm(K, f(l, a, b), f(l2, a2, b2)) != id) identity_fails("commuting", l);
    }
    for (const auto& a : as)
      for (const auto& a2 : as)
        for (const auto& b : bs)
          if (f(l, A.r_add(a, a2), b) != mat_mul(K, f(l, a, b), f(l, a2, b)))
            identity_fails("additive left", l);
    for (const auto& a : as)
      for (const auto& b : bs)
        for (const auto& b2 : bs)
          if (f(l, a, A.r_add(b, b2)) != mat_mul(K, f(l, a, b), f(l, a, b2)))
            identity_fails("additive right", l);
    for (int l2 : ls)
      for (const auto& a : as)
        for (const auto& b : fam.component(l, l2, cap))
          for (const auto& c : fam.component(l2, kk, cap))
            if (f(l, a, A.r_mul(b, c)) != f(l2, A.r_mul(a, b), c)) identity_fails("balanced", l);
  }
  GroupMap g = [f, w, K = k, dim, Ap = fam.ofa_ptr()](const RElem& c) {
    Mat acc = mat_id(*K, dim);
    for (const auto& t : w.terms) acc = mat_mul(*K, acc, f(t.l, t.x, Ap->r_mul(t.y, c)));
    return acc;
  };
  auto cs = fam.component(i, kk, cap);
  for (const auto& c : cs)
    for (const auto& c2 : cs)
      if (g(A.r_add(c, c2)) != mat_mul(K, g(c), g(c2)))
        throw std::logic_error("induced map is not additive");
  for (int l : ls)
    for (const auto& a : fam.component(i, l, cap))
      for (const auto& b : fam.component(l, kk, cap))
        if (g(A.r_mul(a, b)) != f(l, a, b)) throw std::logic_error("induced map does not restrict");
  return g;
}

std::function<Mat(const DElem&)> induced_hom_form(const HypFamily& fam, RingPtr k, int dim, int i,
                                                  int j, const FormPairMap& f, const GroupMap& g,
                                                  const MoritaWitness& w, std::size_t cap) {
  const MatrixOFA& A = fam.ofa();
  const CommRing& K = *k;
  const Mat id = mat_id(K, dim);
  const std::vector<int> ls{j, -j};
  auto gs = fam.component(-i, i, cap);
  auto mul = [&K](const Mat& x, const Mat& y) { return mat_mul(K, x, y); };
  for (int l : ls) {
    auto us = fam.delta0(l, cap);
    auto as = fam.component(l, i, cap);
    for (const auto& u : us)
      for (const auto& a : as)
        for (const auto& b : gs)
          if (mat_comm(K, f(l, u, a), g(b)) != id) identity_fails("commutes with g", l);
    for (int l2 : ls) {
      auto vs = fam.delta0(l2, cap);
      auto bs = fam.component(l2, i, cap);
      for (const auto& u : us)
        for (const auto& a : as)
          for (const auto& v : vs)
            for (const auto& b : bs) {
              RElem c = A.r_neg(A.r_mul(A.r_mul(A.r_bar(a), A.r_bar(A.pi(u))), A.r_mul(A.pi(v), b)));
              if (mat_comm(K, f(l, u, a), f(l2, v, b)) != g(c)) identity_fails("commutator", l);
            }
    }
    for (const auto& u : us)
      for (const auto& u2 : us)
        for (const auto& a : as)
          if (f(l, A.d_add(u, u2), a) != mul(f(l, u, a), f(l, u2, a)))
            identity_fails("additive in u", l);
    for (const auto& u : us)
      for (const auto& a : as)
        for (const auto& a2 : as) {
          RElem c = A.r_mul(A.r_mul(A.r_bar(a2), A.rho(u)), a);
          if (f(l, u, A.r_add(a, a2)) != mul(mul(f(l, u, a), g(c)), f(l, u, a2)))
            identity_fails("quadratic in a", l);
        }
    for (int l2 : ls)
      for (const auto& u : us)
        for (const auto& a : fam.component(l, l2, cap))
          for (const auto& b : fam.component(l2, i, cap))
            if (f(l, u, A.r_mul(a, b)) != f(l2, A.d_act(u, a), b)) identity_fails("balanced", l);
    for (const auto& a : fam.component(-l, l, cap))
      for (const auto& b : as)
        if (f(l, A.phi(a), b) != g(A.r_mul(A.r_mul(A.r_bar(b), a), b)))
          identity_fails("on phi", l);
  }
  for (const auto& a : gs) {
    for (const auto& b : gs)
      if (g(A.r_add(a, b)) != mul(g(a), g(b))) identity_fails("g additive", i);
    if (g(A.r_bar(a)) != *mat_inverse(K, g(a))) identity_fails("g on conjugates", i);
  }
  std::function<Mat(const DElem&)> h = [f, g, w, K = k, dim, Ap = fam.ofa_ptr()](const DElem& u) {
    FormSection s = section_form(*Ap, u, w);
    Mat acc = mat_id(*K, dim);
    for (std::size_t p = 0; p < s.terms.size(); ++p)
      acc = mat_mul(*K, acc, f(w.terms[p].l, s.terms[p].first, s.terms[p].second));
    return mat_mul(*K, acc, g(s.correction));
  };
  auto vs = fam.delta0(i, cap);
  for (const auto& u : vs)
    for (const auto& v : vs)
      if (h(A.d_add(u, v)) != mul(h(u), h(v))) throw std::logic_error("induced map is not additive");
  for (const auto& a : gs)
    if (h(A.phi(a)) != g(a)) throw std::logic_error("induced map does not restrict to g");
  for (int l : ls)
    for (const auto& u : fam.delta0(l, cap))
      for (const auto& a : fam.component(l, i, cap))
        if (h(A.d_act(u, a)) != f(l, u, a)) throw std::logic_error("induced map does not restrict to f");
  return h;
}

std::vector<RootPairClass> weyl_pair_classes(int n) {
  const auto roots = roots_bc(n);
  const auto W = weyl_group(n);
  auto len = [](const RootBC& r) {
    switch (root_length(r)) {
      case RootLength::Long: return std::string("long");
      case RootLength::Short: return std::string("short");
      default: return std::string("ultrashort");
    }
  };
  auto in_span = [&](const RootBC& a, const RootBC& b, const RootBC& c) {
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q)
        for (int r = q + 1; r < n; ++r) {
          int det = a.v[p] * (b.v[q] * c.v[r] - b.v[r] * c.v[q]) -
                    a.v[q] * (b.v[p] * c.v[r] - b.v[r] * c.v[p]) +
                    a.v[r] * (b.v[p] * c.v[q] - b.v[q] * c.v[p]);
          if (det) return false;
        }
    return true;
  };
  auto key = [&](const RootBC& a, const RootBC& b) {
    std::size_t count = 0;
    std::set<std::string> lens;
    for (const auto& c : roots)
      if (in_span(a, b, c)) {
        ++count;
        lens.insert(len(c));
      }
    std::string type = count == 12 ? "BC2" : count == 4 ? "A1xA1" : lens.size() == 1 ? "A2" : "A1xBC1";
    return len(a) + "," + len(b) + ",dot=" + std::to_string(dot(a, b)) + "," + type;
  };
  std::map<std::pair<RootBC, RootBC>, std::string> cls;
  for (const auto& a : roots)
    for (const auto& b : roots)
      if (!proportional(a, b)) cls[{a, b}] = key(a, b);
  std::map<std::string, RootPairClass> out;
  std::set<std::pair<RootBC, RootBC>> seen;
  for (const auto& [ab, k] : cls) {
    auto& c = out[k];
    c.key = k;
    ++c.pairs;
    if (seen.count(ab)) continue;
    ++c.orbits;
    for (const auto& w : W) seen.insert({weyl_act(w, ab.first), weyl_act(w, ab.second)});
  }
  std::vector<RootPairClass> v;
  for (auto& [k, c] : out) v.push_back(c);
  return v;
}

namespace {

using ojson = nlohmann::ordered_json;

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

// One generator or relation per line; everything else compact.
std::string render(const ojson& doc) {
  std::string s = "{\n";
  bool first = true;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (!first) s += ",\n";
    first = false;
    s += "  " + ojson(it.key()).dump() + ": ";
    if (it->is_array()) {
      s += "[";
      for (std::size_t p = 0; p < it->size(); ++p) s += (p ? ",\n    " : "\n    ") + (*it)[p].dump();
      s += it->empty() ? "]" : "\n  ]";
    } else {
      s += it->dump();
    }
  }
  return s + "\n}\n";
}

}  // namespace

std::string export_presentation(const Presentation& p, const HypFamily& fam,
                                const std::string& family) {
  const MatrixOFA& A = fam.ofa();
  ojson doc;
  doc["format"] = "oddform-steinberg-presentation";
  doc["version"] = 1;
  doc["algebra"] = {{"base", A.base().name()}, {"family", family}, {"rank", fam.rank()},
                    {"dim", A.size()}};
  ojson counts = ojson::object();
  for (const auto& [t, c] : p.counts()) counts[t] = c;
  doc["counts"] = counts;
  ojson gens = ojson::array();
  for (std::size_t g = 0; g < p.generators().size(); ++g) {
    const StGen& x = p.generators()[g];
    ojson e;
    e["id"] = g;
    e["kind"] = x.ultra ? "ultrashort" : "short";
    e["i"] = x.i;
    if (!x.ultra) e["j"] = x.j;
    e["element"] = x.ultra ? A.d_str(x.u) : A.r_str(x.a);
    gens.push_back(e);
  }
  doc["generators"] = gens;
  auto word = [](const Word& w) {
    ojson a = ojson::array();
    for (const auto& l : w) a.push_back({l.gen, l.exp});
    return a;
  };
  ojson rels = ojson::array();
  for (const auto& r : p.relations()) {
    ojson e;
    e["tag"] = r.tag;
    e["lhs"] = word(r.lhs);
    e["rhs"] = word(r.rhs);
    rels.push_back(e);
  }
  doc["relations"] = rels;
  doc["hash"] = hex64(fnv1a(doc.dump()));
  return render(doc);
}

std::string reimport_presentation(const std::string& text) {
  ojson doc;
  try {
    doc = ojson::parse(text);
  } catch (const ojson::parse_error& e) {
    throw InvalidInput(std::string("malformed presentation: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("hash") || !doc["hash"].is_string())
    throw InvalidInput("presentation has no content hash");
  std::string h = doc["hash"];
  doc.erase("hash");
  if (hex64(fnv1a(doc.dump())) != h) throw InvalidInput("presentation hash mismatch");
  for (const auto& r : doc.value("relations", ojson::array()))
    for (const char* side : {"lhs", "rhs"})
      for (const auto& l : r.at(side))
        if (l.at(0).get<std::size_t>() >= doc["generators"].size())
          throw InvalidInput("relation refers to an unknown generator");
  doc["hash"] = h;
  return render(doc);
}

}  // namespace oddform
