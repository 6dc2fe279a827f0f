#include "oddform/unitary.hpp"

#include <algorithm>
#include <bit>
#include <deque>
#include <numeric>

namespace oddform {

Mat unit_matrix(const MatrixOFA& a, const MUnit& g) {
  return mat_add(a.base(), mat_id(a.base(), a.size()), g.beta.a);
}

bool in_unitary(const MatrixOFA& a, const Mat& m) {
  const CommRing& k = a.base();
  auto inv = mat_inverse(k, m);
  if (!inv) return false;
  Mat id = mat_id(k, a.size());
  RElem beta{mat_sub(k, m, id), mat_sub(k, *inv, id)};
  if (!a.in_r(beta)) return false;
  return is_unitary(a, MUnit{beta, DElem{beta, a.r_bar(beta)}});
}

MUnit unit_from_matrix(const MatrixOFA& a, const Mat& m) {
  const CommRing& k = a.base();
  auto inv = mat_inverse(k, m);
  if (!inv) throw InvalidInput("matrix is not invertible");
  Mat id = mat_id(k, a.size());
  RElem beta{mat_sub(k, m, id), mat_sub(k, *inv, id)};
  MUnit g{beta, DElem{beta, a.r_bar(beta)}};
  if (!a.in_r(beta) || !is_unitary(a, g)) throw InvalidInput("matrix is not unitary");
  return g;
}

Report check_group_action(const MatrixOFA& a, const std::vector<MUnit>& elems,
                          const CheckConfig& cfg) {
  Report rep;
  const bool ex = a.exhaustive_ok(cfg.exhaustive_limit);
  auto gstr = [&a](const MUnit& g) { return mat_str(a.base(), unit_matrix(a, g)); };
  const auto cg = listed_carrier<MUnit>("g", elems, gstr), ch = cg.renamed("h");
  const auto ra = a.r_carrier().renamed("a");
  const auto du = a.d_carrier().renamed("u");
  auto chk = [&](const std::string& name, auto pred, const auto&... cs) {
    check_axiom(rep, cfg, ex, name, pred, cs...);
  };
  chk("g in U", [&](const MUnit& g) { return is_unitary(a, g); }, cg);
  chk("(gh).a=g.(h.a)", [&](const MUnit& g, const MUnit& h, const RElem& x) {
    return u_act_r(a, u_mul(a, g, h), x) == u_act_r(a, g, u_act_r(a, h, x));
  }, cg, ch, ra);
  chk("(gh).u=g.(h.u)", [&](const MUnit& g, const MUnit& h, const DElem& u) {
    return u_act_d(a, u_mul(a, g, h), u) == u_act_d(a, g, u_act_d(a, h, u));
  }, cg, ch, du);
  chk("g.phi(a)=phi(g.a), g.conj(a)=conj(g.a)", [&](const MUnit& g, const RElem& x) {
    return u_act_d(a, g, a.phi(x)) == a.phi(u_act_r(a, g, x)) &&
           u_act_r(a, g, a.r_bar(x)) == a.r_bar(u_act_r(a, g, x));
  }, cg, ra);
  chk("g.u in Delta, pi(g.u)=g.pi(u), rho(g.u)=g.rho(u)", [&](const MUnit& g, const DElem& u) {
    DElem v = u_act_d(a, g, u);
    return a.in_delta(v) && a.pi(v) == u_act_r(a, g, a.pi(u)) &&
           a.rho(v) == u_act_r(a, g, a.rho(u));
  }, cg, du);
  chk("g.(u+v)=g.u+g.v", [&](const MUnit& g, const DElem& u, const DElem& v) {
    return u_act_d(a, g, a.d_add(u, v)) == a.d_add(u_act_d(a, g, u), u_act_d(a, g, v));
  }, cg, du, du.renamed("v"));
  return rep;
}

std::uint64_t pack_gf2(const Mat& m) {
  std::uint64_t c = 0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j)
      if (m.at(i, j) & 1) c |= std::uint64_t(1) << (8 * i + j);
  return c;
}

Mat unpack_gf2(std::uint64_t code, int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.set(i, j, (code >> (8 * i + j)) & 1);
  return m;
}

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdull;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ull;
  return x ^ (x >> 33);
}

constexpr std::uint64_t kEmpty = ~std::uint64_t(0);

}  // namespace

void U64Set::grow() {
  std::vector<std::uint64_t> old = std::move(slots_);
  slots_.assign(old.empty() ? 1024 : old.size() * 2, kEmpty);
  count_ = 0;
  for (auto k : old)
    if (k != kEmpty) insert(k);
}

bool U64Set::insert(std::uint64_t key) {
  if ((count_ + 1) * 2 > slots_.size()) grow();
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = mix64(key) & mask;; i = (i + 1) & mask) {
    if (slots_[i] == key) return false;
    if (slots_[i] == kEmpty) {
      slots_[i] = key;
      ++count_;
      return true;
    }
  }
}

bool U64Set::contains(std::uint64_t key) const {
  if (slots_.empty()) return false;
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = mix64(key) & mask;; i = (i + 1) & mask) {
    if (slots_[i] == key) return true;
    if (slots_[i] == kEmpty) return false;
  }
}

Gf2Right::Gf2Right(std::uint64_t g, int size) : n(size) {
  // Only rows with bits below n occur; each entry adds one row of g.
  for (int x = 1; x < (1 << n); ++x) {
    const int low = std::countr_zero(static_cast<unsigned>(x));
    row[x] = row[x & (x - 1)] ^ static_cast<std::uint8_t>(g >> (8 * low));
  }
}

std::uint64_t gf2_mul(std::uint64_t x, std::uint64_t y, int n) {
  std::uint64_t out = 0;
  for (int i = 0; i < n; ++i) {
    std::uint8_t xi = static_cast<std::uint8_t>(x >> (8 * i)), acc = 0;
    for (int j = 0; j < n; ++j)
      if (xi >> j & 1) acc ^= static_cast<std::uint8_t>(y >> (8 * j));
    out |= std::uint64_t(acc) << (8 * i);
  }
  return out;
}

MatGroup MatGroup::closure(RingPtr k, int n, std::vector<Mat> gens, std::size_t bound) {
  MatGroup g;
  g.k_ = k;
  g.n_ = n;
  const CommRing& K = *k;
  std::vector<Mat> sym;
  for (const Mat& m : gens) {
    auto inv = mat_inverse(K, m);
    if (!inv) throw InvalidInput("generator is not invertible");
    sym.push_back(m);
    if (*inv != m) sym.push_back(*inv);
  }
  g.gens_ = std::move(gens);
  Mat id = mat_id(K, n);
  g.packed_ = K.size() == 2 && K.modulus() == 2;
  if (g.packed_) {
    std::vector<Gf2Right> right;
    for (const Mat& m : sym) right.emplace_back(pack_gf2(m), n);
    std::vector<std::uint64_t> order{pack_gf2(id)};
    g.codes_.insert(order[0]);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const std::uint64_t x = order[head];
      for (const auto& r : right) {
        std::uint64_t y = r.apply(x);
        if (g.codes_.insert(y)) {
          order.push_back(y);
          if (order.size() > bound) throw BoundExceeded("group closure exceeds bound");
        }
      }
    }
    g.elems_.reserve(order.size());
    for (auto c : order) g.elems_.push_back(unpack_gf2(c, n));
    return g;
  }
  g.elems_.push_back(id);
  g.set_.insert(id);
  for (std::size_t head = 0; head < g.elems_.size(); ++head) {
    const Mat x = g.elems_[head];
    for (const Mat& s : sym) {
      Mat y = mat_mul(K, x, s);
      if (g.set_.insert(y).second) {
        g.elems_.push_back(y);
        if (g.elems_.size() > bound) throw BoundExceeded("group closure exceeds bound");
      }
    }
  }
  return g;
}

bool MatGroup::contains(const Mat& m) const {
  if (m.n != n_) return false;
  if (packed_) return codes_.contains(pack_gf2(m));
  return set_.count(m) > 0;
}

WeylElem WeylElem::identity(int n) {
  WeylElem w;
  w.perm.resize(n);
  std::iota(w.perm.begin(), w.perm.end(), 1);
  w.sign.assign(n, 1);
  return w;
}

WeylElem WeylElem::transposition(int n, int i, int j) {
  WeylElem w = identity(n);
  std::swap(w.perm[i - 1], w.perm[j - 1]);
  return w;
}

WeylElem WeylElem::sign_change(int n, int i) {
  WeylElem w = identity(n);
  w.sign[i - 1] = -1;
  return w;
}

int WeylElem::act(int i) const {
  if (i == 0) return 0;
  int a = std::abs(i);
  int img = sign[a - 1] * perm[a - 1];
  return i > 0 ? img : -img;
}

WeylElem WeylElem::compose(const WeylElem& w) const {
  WeylElem out;
  const int n = rank();
  out.perm.resize(n);
  out.sign.resize(n);
  for (int i = 1; i <= n; ++i) {
    int img = act(w.act(i));
    out.perm[i - 1] = std::abs(img);
    out.sign[i - 1] = img > 0 ? 1 : -1;
  }
  return out;
}

std::vector<WeylElem> weyl_group(int n) {
  std::vector<WeylElem> out;
  std::vector<int> p(n);
  std::iota(p.begin(), p.end(), 1);
  do {
    for (int mask = 0; mask < (1 << n); ++mask) {
      WeylElem w;
      w.perm = p;
      w.sign.resize(n);
      for (int i = 0; i < n; ++i) w.sign[i] = (mask >> i & 1) ? -1 : 1;
      out.push_back(w);
    }
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

RootLength root_length(const RootBC& r) {
  int nz = 0, l1 = 0, maxabs = 0;
  for (int x : r.v) {
    if (x) ++nz;
    l1 += std::abs(x);
    maxabs = std::max(maxabs, std::abs(x));
  }
  if (nz == 1 && maxabs == 2) return RootLength::Long;
  if (nz == 1 && maxabs == 1) return RootLength::Ultrashort;
  if (nz == 2 && maxabs == 1 && l1 == 2) return RootLength::Short;
  throw InvalidInput("not a root of BC_n: " + root_str(r));
}

std::vector<RootBC> roots_bc(int n) {
  std::vector<RootBC> out;
  for (int i = 0; i < n; ++i)
    for (int s : {1, -1}) {
      for (int m : {1, 2}) {
        RootBC r{std::vector<int>(n, 0)};
        r.v[i] = s * m;
        out.push_back(r);
      }
      for (int j = i + 1; j < n; ++j)
        for (int t : {1, -1}) {
          RootBC r{std::vector<int>(n, 0)};
          r.v[i] = s;
          r.v[j] = t;
          out.push_back(r);
        }
    }
  std::sort(out.begin(), out.end());
  return out;
}

RootBC weyl_act(const WeylElem& w, const RootBC& r) {
  RootBC out{std::vector<int>(r.v.size(), 0)};
  for (int i = 1; i <= static_cast<int>(r.v.size()); ++i) {
    int img = w.act(i);
    out.v[std::abs(img) - 1] += (img > 0 ? 1 : -1) * r.v[i - 1];
  }
  return out;
}

RootBC root_of_index(int n, int i) {
  RootBC r{std::vector<int>(n, 0)};
  r.v[std::abs(i) - 1] = i > 0 ? 1 : -1;
  return r;
}

RootBC root_of_pair(int n, int i, int j) {
  RootBC r{std::vector<int>(n, 0)};
  r.v[std::abs(j) - 1] += j > 0 ? 1 : -1;
  r.v[std::abs(i) - 1] -= i > 0 ? 1 : -1;
  return r;
}

std::string root_str(const RootBC& r) {
  std::string s = "(";
  for (std::size_t i = 0; i < r.v.size(); ++i) s += (i ? "," : "") + std::to_string(r.v[i]);
  return s + ")";
}

}  // namespace oddform
