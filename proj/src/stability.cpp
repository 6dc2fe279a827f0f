#include "oddform/stability.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace oddform {

namespace {

// Odometer over a product of index ranges, last coordinate fastest; stops
// when `f` returns true. Returns whether it stopped early.
bool for_each_tuple(const std::vector<std::size_t>& sizes,
                    const std::function<bool(const std::vector<std::size_t>&)>& f) {
  for (auto s : sizes)
    if (s == 0) return false;
  std::vector<std::size_t> idx(sizes.size(), 0);
  while (true) {
    if (f(idx)) return true;
    std::size_t k = sizes.size();
    while (k > 0) {
      --k;
      if (++idx[k] < sizes[k]) break;
      idx[k] = 0;
      if (k == 0) return false;
    }
    if (sizes.empty()) return false;
  }
}

std::uint64_t product_size(const std::vector<std::size_t>& sizes, std::uint64_t bound) {
  std::uint64_t total = 1;
  for (auto s : sizes) {
    total *= s;
    if (total > bound) throw BoundExceeded("search space exceeds bound");
  }
  return total;
}

RElem alpha_of(const MatrixOFA& A, const MUnit& g) { return A.r_add(g.beta, A.r_one()); }

// Sum-set search for a left witness: sum x_k a_k = target, x_k from coeffs[k].
std::optional<std::vector<RElem>> sumset_witness(const MatrixOFA& A, const std::vector<RElem>& seq,
                                                 const std::vector<const std::vector<RElem>*>& coeffs,
                                                 const RElem& target) {
  struct Back {
    RElem prev;
    std::size_t coeff;
  };
  std::vector<std::unordered_map<RElem, Back, RElemHash>> stage(seq.size() + 1);
  stage[0].emplace(A.r_zero(), Back{A.r_zero(), 0});
  for (std::size_t k = 0; k < seq.size(); ++k) {
    std::vector<RElem> prods;
    std::vector<std::size_t> which;
    std::unordered_set<RElem, RElemHash> seen;
    const auto& cs = *coeffs[k];
    for (std::size_t c = 0; c < cs.size(); ++c) {
      RElem p = A.r_mul(cs[c], seq[k]);
      if (seen.insert(p).second) {
        prods.push_back(p);
        which.push_back(c);
      }
    }
    for (const auto& [v, back] : stage[k])
      for (std::size_t t = 0; t < prods.size(); ++t) stage[k + 1].try_emplace(A.r_add(v, prods[t]), Back{v, which[t]});
  }
  auto it = stage.back().find(target);
  if (it == stage.back().end()) return std::nullopt;
  std::vector<RElem> out(seq.size());
  RElem cur = target;
  for (std::size_t k = seq.size(); k > 0; --k) {
    const Back& b = stage[k].at(cur);
    out[k - 1] = (*coeffs[k - 1])[b.coeff];
    cur = b.prev;
  }
  return out;
}

bool radical_zero(const MatrixOFA& A, const std::vector<char>& rad, const RElem& x) {
  const int n = A.size();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      if (!rad[x.a.at(r, c)]) return false;
      if (A.is_linear() && !rad[x.b.at(r, c)]) return false;
    }
  return true;
}

std::vector<char> radical_mask(const CommRing& K) {
  std::vector<char> rad(K.size(), 0);
  for (std::size_t a = 0; a < K.size(); ++a) {
    Elt p = static_cast<Elt>(a);
    for (std::size_t t = 0; t <= K.size(); ++t) {
      if (p == K.zero()) {
        rad[a] = 1;
        break;
      }
      p = K.mul(p, static_cast<Elt>(a));
    }
  }
  return rad;
}

}  // namespace

// ---------------------------------------------------------------- rings

FinRing FinRing::from_comm(const CommRing& k) {
  FinRing r;
  r.name = k.name();
  r.size = k.size();
  r.add.resize(r.size * r.size);
  r.mul.resize(r.size * r.size);
  for (std::size_t a = 0; a < r.size; ++a)
    for (std::size_t b = 0; b < r.size; ++b) {
      r.add[a * r.size + b] = k.add(static_cast<Elt>(a), static_cast<Elt>(b));
      r.mul[a * r.size + b] = k.mul(static_cast<Elt>(a), static_cast<Elt>(b));
    }
  r.zero = k.zero();
  r.one = k.one();
  return r;
}

FinRing FinRing::corner(const HypFamily& fam, int i, std::vector<RElem>* elems) {
  const MatrixOFA& A = fam.ofa();
  auto all = fam.component_all(i, i);
  if (all.size() > 0xFFFF) throw BoundExceeded("corner ring too large");
  std::unordered_map<RElem, Elt, RElemHash> index;
  for (std::size_t k = 0; k < all.size(); ++k) index.emplace(all[k], static_cast<Elt>(k));
  FinRing r;
  r.name = "R_" + std::to_string(i) + std::to_string(i);
  r.size = all.size();
  r.add.resize(r.size * r.size);
  r.mul.resize(r.size * r.size);
  for (std::size_t a = 0; a < r.size; ++a)
    for (std::size_t b = 0; b < r.size; ++b) {
      r.add[a * r.size + b] = index.at(A.r_add(all[a], all[b]));
      r.mul[a * r.size + b] = index.at(A.r_mul(all[a], all[b]));
    }
  r.zero = index.at(A.r_zero());
  r.one = index.at(fam.e(i));
  if (elems) *elems = std::move(all);
  return r;
}

std::optional<std::vector<Elt>> is_left_unimodular(const FinRing& A, const std::vector<Elt>& seq) {
  std::optional<std::vector<Elt>> out;
  std::vector<std::size_t> sizes(seq.size(), A.size);
  for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    Elt s = A.zero;
    for (std::size_t k = 0; k < seq.size(); ++k) s = A.plus(s, A.times(static_cast<Elt>(idx[k]), seq[k]));
    if (s != A.one) return false;
    out.emplace(idx.begin(), idx.end());
    return true;
  });
  return out;
}

std::optional<std::vector<RElem>> is_left_unimodular(const HypFamily& fam, const UnimodSeq& seq) {
  if (seq.rows.size() != seq.elems.size()) throw InvalidInput("rows and elements differ in length");
  std::map<int, std::vector<RElem>> spaces;
  std::vector<const std::vector<RElem>*> coeffs;
  for (int r : seq.rows) {
    auto it = spaces.find(r);
    if (it == spaces.end()) it = spaces.emplace(r, fam.component_all(seq.col, r)).first;
    coeffs.push_back(&it->second);
  }
  return sumset_witness(fam.ofa(), seq.elems, coeffs, fam.e(seq.col));
}

StableRankResult stable_rank_leq(const FinRing& A, int k, std::uint64_t bound) {
  StableRankResult res;
  if (k < 1) {
    res.supported = false;
    return res;
  }
  std::vector<std::size_t> sizes(static_cast<std::size_t>(k) + 1, A.size);
  product_size(sizes, bound);
  res.holds = true;
  for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    std::vector<Elt> seq(idx.begin(), idx.end());
    if (!is_left_unimodular(A, seq)) return false;
    ++res.unimodular;
    std::vector<std::size_t> csz(static_cast<std::size_t>(k), A.size);
    bool found = for_each_tuple(csz, [&](const std::vector<std::size_t>& c) {
      std::vector<Elt> shorter(static_cast<std::size_t>(k));
      for (int i = 0; i < k; ++i) shorter[i] = A.plus(seq[i], A.times(static_cast<Elt>(c[i]), seq[k]));
      auto w = is_left_unimodular(A, shorter);
      if (!w) return false;
      res.certificates.push_back({seq, std::vector<Elt>(c.begin(), c.end()), *w});
      return true;
    });
    if (!found) {
      res.holds = false;
      res.counterexample = seq;
      return true;
    }
    return false;
  });
  return res;
}

// ---------------------------------------------------------------- Lambda

bool FormParamLambda::contains(const RElem& x) const {
  return std::find(carrier.begin(), carrier.end(), x) != carrier.end();
}

FormParamLambda lambda_param(const HypFamily& fam) {
  const MatrixOFA& A = fam.ofa();
  if (fam.rank() < 1) throw InvalidInput("Lambda needs n >= 1");
  FormParamLambda L;
  std::unordered_set<RElem, RElemHash> seen;
  for (const auto& u : fam.delta0_all(-1))
    if (A.r_is_zero(u.p) && seen.insert(u.r).second) L.carrier.push_back(u.r);
  std::sort(L.carrier.begin(), L.carrier.end(), [](const RElem& x, const RElem& y) {
    return x.a.e < y.a.e;
  });
  auto comp = fam.component_all(1, -1);
  L.component_size = comp.size();
  L.contains_min = std::all_of(comp.begin(), comp.end(),
                               [&](const RElem& a) { return seen.count(A.r_sub(a, A.r_bar(a))) > 0; });
  L.within_max = std::all_of(L.carrier.begin(), L.carrier.end(),
                             [&](const RElem& x) { return A.r_is_zero(A.r_add(x, A.r_bar(x))); });
  L.additive = true;
  for (const auto& x : L.carrier)
    for (const auto& y : L.carrier)
      if (!seen.count(A.r_add(x, y))) L.additive = false;
  L.conj_closed = true;
  for (const auto& a : fam.component_all(1, 1))
    for (const auto& x : L.carrier)
      if (!seen.count(A.r_mul(A.r_mul(a, x), A.r_bar(a)))) L.conj_closed = false;
  return L;
}

LambdaSrResult lambda_sr_leq(const HypFamily& fam, int k, std::uint64_t bound) {
  const MatrixOFA& A = fam.ofa();
  LambdaSrResult res;
  if (k < 1) {
    res.supported = false;
    return res;
  }
  res.corner = stable_rank_leq(FinRing::corner(fam, 1), k);
  res.lambda = lambda_param(fam);
  const std::size_t K = static_cast<std::size_t>(k) + 1;
  const auto as = fam.component_all(-1, 1);
  const auto bs = fam.component_all(1, 1);
  const auto cs = fam.component_all(1, -1);
  const auto& lam = res.lambda.carrier;
  std::vector<std::size_t> sizes;
  for (std::size_t i = 0; i < K; ++i) sizes.push_back(as.size());
  for (std::size_t i = 0; i < K; ++i) sizes.push_back(bs.size());
  product_size(sizes, bound);
  // Free entries: the diagonal from Lambda, then c_{i,-i'} for i < i'.
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for (std::size_t i = 0; i < K; ++i)
    for (std::size_t i2 = i + 1; i2 < K; ++i2) off.push_back({i, i2});
  std::vector<std::size_t> csz(K, lam.size());
  for (std::size_t t = 0; t < off.size(); ++t) csz.push_back(cs.size());
  product_size(csz, bound);

  std::vector<const std::vector<RElem>*> full_coeffs;
  for (std::size_t i = 0; i < K; ++i) full_coeffs.push_back(&cs);
  for (std::size_t i = 0; i < K; ++i) full_coeffs.push_back(&bs);
  std::vector<const std::vector<RElem>*> short_coeffs(K, &bs);

  bool all_ok = true;
  for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
    std::vector<RElem> a(K), b(K), seq;
    for (std::size_t i = 0; i < K; ++i) a[i] = as[idx[i]];
    for (std::size_t i = 0; i < K; ++i) b[i] = bs[idx[K + i]];
    seq = a;
    seq.insert(seq.end(), b.begin(), b.end());
    if (!sumset_witness(A, seq, full_coeffs, fam.e(1))) return false;
    ++res.unimodular;
    std::optional<LambdaCert> cert;
    for_each_tuple(csz, [&](const std::vector<std::size_t>& c) {
      std::vector<std::vector<RElem>> m(K, std::vector<RElem>(K, A.r_zero()));
      for (std::size_t i = 0; i < K; ++i) m[i][i] = lam[c[i]];
      for (std::size_t t = 0; t < off.size(); ++t) {
        auto [i, i2] = off[t];
        m[i][i2] = cs[c[K + t]];
        m[i2][i] = A.r_neg(A.r_bar(m[i][i2]));
      }
      std::vector<RElem> s(K);
      for (std::size_t i = 0; i < K; ++i) {
        s[i] = b[i];
        for (std::size_t j = 0; j < K; ++j) s[i] = A.r_add(s[i], A.r_mul(m[i][j], a[j]));
      }
      auto w = sumset_witness(A, s, short_coeffs, fam.e(1));
      if (!w) return false;
      cert = LambdaCert{a, b, m, *w};
      return true;
    });
    if (!cert) {
      all_ok = false;
      res.counterexample = LambdaCert{a, b, {}, {}};
      return true;
    }
    res.certificates.push_back(std::move(*cert));
    return false;
  });
  res.holds = all_ok && res.corner.holds && res.lambda.ok();
  return res;
}

// ---------------------------------------------------------------- words

MUnit eval_word(const HypFamily& fam, const std::vector<StGen>& w) {
  const MatrixOFA& A = fam.ofa();
  MUnit acc = u_identity(A);
  for (const auto& x : w)
    acc = u_mul(A, acc, x.ultra ? fam.t_ultra(x.i, x.u) : fam.t_short(x.i, x.j, x.a));
  return acc;
}

std::vector<StGen> inverse_word(const HypFamily& fam, const std::vector<StGen>& w) {
  const MatrixOFA& A = fam.ofa();
  std::vector<StGen> out;
  for (auto it = w.rbegin(); it != w.rend(); ++it)
    out.push_back(it->ultra ? x_ultra(it->i, A.d_neg(it->u), A) : x_short(it->i, it->j, A.r_neg(it->a), A));
  return out;
}

std::vector<StGen> transvection_letters(const HypFamily& fam, int l, const DElem& u) {
  const MatrixOFA& A = fam.ofa();
  const int n = fam.rank();
  auto [as, v0] = fam.split_delta(l, u);
  std::vector<StGen> out;
  std::size_t k = 0;
  for (int j = -n; j <= n; ++j) {
    if (j == 0) continue;
    const RElem& a = as[k++];
    if (A.r_is_zero(a)) continue;
    if (j == l || j == -l) throw InvalidInput("transvection parameter meets |eta_l|");
    out.push_back(x_short(j, l, a, A));
  }
  if (v0 != A.d_zero()) out.push_back(x_ultra(l, v0, A));
  return out;
}

// ---------------------------------------------------------------- reduction

struct Reducer::Ctx {
  int n = 0;
  // Coefficient spaces R_{n,i} for rows i.
  std::map<int, std::vector<RElem>> to_n;
  std::map<std::pair<int, int>, std::vector<RElem>> comp;
  std::map<int, std::vector<DElem>> d0;    // Delta^0_{-i}, i > 0
  std::map<int, std::vector<DElem>> lam;   // those with pi = 0, one per rho
};

Reducer::Reducer(const HypFamily& fam) : fam_(&fam) {
  const int n = fam.rank();
  if (n < 2) throw InvalidInput("reduction needs n >= 2");
  if (!fam.is_free()) throw InvalidInput("reduction needs a free family");
  hyp_ = lambda_sr_leq(fam, n - 1);
  if (!hyp_.holds) throw InvalidInput("Lambda sr(eta_1) <= n - 1 fails");
  auto ctx = std::make_shared<Ctx>();
  ctx->n = n;
  const MatrixOFA& A = fam.ofa();
  for (int i = -n; i <= n; ++i) ctx->to_n[i] = fam.component_all(n, i);
  for (int i = -n; i <= n; ++i)
    for (int j = -n; j <= n; ++j)
      if (i && j && i != j && i != -j) ctx->comp[{i, j}] = fam.component_all(i, j);
  for (int i = 1; i <= n; ++i) {
    ctx->d0[i] = fam.delta0_all(-i);
    std::unordered_set<RElem, RElemHash> seen;
    for (const auto& u : ctx->d0[i])
      if (A.r_is_zero(u.p) && seen.insert(u.r).second) ctx->lam[i].push_back(u);
  }
  ctx_ = ctx;
}

ReduceResult Reducer::reduce(const MUnit& g) const {
  const HypFamily& fam = *fam_;
  const MatrixOFA& A = fam.ofa();
  const Ctx& C = *ctx_;
  const int n = C.n;
  ReduceResult res;
  std::vector<StGen> h;  // applied on the left, last letter first
  MUnit cur = g;
  auto column = [&](const MUnit& x) {
    RElem m = A.r_mul(alpha_of(A, x), fam.e(n));
    std::map<int, RElem> v;
    for (int i = -n; i <= n; ++i) v[i] = A.r_mul(fam.e(i), m);
    return v;
  };
  auto unimodular = [&](const std::map<int, RElem>& v, bool negatives) {
    std::vector<RElem> seq;
    std::vector<const std::vector<RElem>*> coeffs;
    for (int i = -n; i <= n; ++i) {
      if (i == 0 || (i < 0 && !negatives)) continue;
      seq.push_back(v.at(i));
      coeffs.push_back(&C.to_n.at(i));
    }
    return sumset_witness(A, seq, coeffs, fam.e(n)).has_value();
  };
  auto apply = [&](const std::vector<StGen>& w) {
    cur = u_mul(A, eval_word(fam, w), cur);
    h.insert(h.begin(), w.begin(), w.end());
  };
  auto corner_unit = [&](const std::map<int, RElem>& v) {
    return A.corner_inverse(v.at(n), fam.e(n)).has_value();
  };

  auto v = column(cur);
  if (v.at(n) != fam.e(n)) {
    res.corner_step = true;
    if (!corner_unit(v)) {
      if (!unimodular(v, true)) {
        // The e_0 row: T_{-i}(u_i) add multiples of it to the positive rows.
        res.unimod_step = true;
        std::vector<std::size_t> sizes;
        for (int i = 1; i <= n; ++i) sizes.push_back(C.d0.at(i).size());
        product_size(sizes, 1u << 20);
        std::vector<StGen> found;
        bool ok = for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
          std::vector<StGen> w;
          for (int i = 1; i <= n; ++i) {
            const DElem& u = C.d0.at(i)[idx[i - 1]];
            if (u != A.d_zero()) w.push_back(x_ultra(-i, u, A));
          }
          if (!unimodular(column(u_mul(A, eval_word(fam, w), cur)), true)) return false;
          found = w;
          return true;
        });
        if (!ok) throw std::logic_error("no elementary element makes the column unimodular");
        apply(found);
        v = column(cur);
      }
      if (!unimodular(v, false)) {
        // 1 + c with c_{i,-i} in Lambda and c_{i,-i'} = -conj(c_{i',-i}).
        res.lambda_step = true;
        std::vector<std::pair<int, int>> off;
        for (int i = 1; i <= n; ++i)
          for (int i2 = i + 1; i2 <= n; ++i2) off.push_back({i, -i2});
        std::vector<std::size_t> sizes;
        for (int i = 1; i <= n; ++i) sizes.push_back(C.lam.at(i).size());
        for (auto [i, j] : off) sizes.push_back(C.comp.at({i, j}).size());
        product_size(sizes, 1u << 20);
        std::vector<StGen> found;
        bool ok = for_each_tuple(sizes, [&](const std::vector<std::size_t>& idx) {
          std::vector<StGen> w;
          for (std::size_t t = 0; t < off.size(); ++t) {
            const RElem& c = C.comp.at(off[t])[idx[n + t]];
            if (!A.r_is_zero(c)) w.push_back(x_short(off[t].first, off[t].second, c, A));
          }
          for (int i = 1; i <= n; ++i) {
            const DElem& u = C.lam.at(i)[idx[i - 1]];
            if (u != A.d_zero()) w.push_back(x_ultra(-i, u, A));
          }
          if (!unimodular(column(u_mul(A, eval_word(fam, w), cur)), false)) return false;
          found = w;
          return true;
        });
        if (!ok) throw std::logic_error("Lambda stable rank step found no matrix");
        apply(found);
        v = column(cur);
      }
      if (!corner_unit(v)) {
        // T_{n,i}(x_i), after T_{i,n}(y_i) if a single round does not do.
        std::vector<std::size_t> xs, ys;
        for (int i = 1; i < n; ++i) {
          xs.push_back(C.comp.at({n, i}).size());
          ys.push_back(C.comp.at({i, n}).size());
        }
        product_size(xs, 1u << 20);
        auto try_x = [&](const MUnit& base, std::vector<StGen>& out) {
          return for_each_tuple(xs, [&](const std::vector<std::size_t>& idx) {
            std::vector<StGen> w;
            for (int i = 1; i < n; ++i) {
              const RElem& x = C.comp.at({n, i})[idx[i - 1]];
              if (!A.r_is_zero(x)) w.push_back(x_short(n, i, x, A));
            }
            if (!corner_unit(column(u_mul(A, eval_word(fam, w), base)))) return false;
            out = w;
            return true;
          });
        };
        std::vector<StGen> found;
        bool ok = try_x(cur, found);
        if (!ok) {
          product_size(ys, 1u << 20);
          ok = for_each_tuple(ys, [&](const std::vector<std::size_t>& idx) {
            std::vector<StGen> w;
            for (int i = 1; i < n; ++i) {
              const RElem& y = C.comp.at({i, n})[idx[i - 1]];
              if (!A.r_is_zero(y)) w.push_back(x_short(i, n, y, A));
            }
            std::vector<StGen> wx;
            if (!try_x(u_mul(A, eval_word(fam, w), cur), wx)) return false;
            found = wx;
            found.insert(found.end(), w.begin(), w.end());
            return true;
          });
        }
        if (!ok) throw std::logic_error("no corner transvection found");
        apply(found);
        v = column(cur);
      }
    }
    // Corner x invertible: make row 1 equal e_{1n}, then the corner e_n.
    RElem xi = *A.corner_inverse(v.at(n), fam.e(n));
    RElem a = A.r_mul(A.r_sub(fam.unit(1, n), v.at(1)), xi);
    if (!A.r_is_zero(a)) apply({x_short(1, n, a, A)});
    v = column(cur);
    RElem b = A.r_mul(A.r_sub(fam.e(n), v.at(n)), fam.unit(n, 1));
    if (!A.r_is_zero(b)) apply({x_short(n, 1, b, A)});
    v = column(cur);
    if (v.at(n) != fam.e(n)) throw std::logic_error("corner is not e_n after normalization");
  }

  const HypPair eta = fam.eta(n);
  auto u = parabolic_extract(A, eta, cur);
  if (!u) throw std::logic_error("parabolic extraction failed on a unit corner");
  MUnit p = u_mul(A, transvection(A, eta, A.d_neg(*u)), cur);
  LeviParts parts = levi_retraction(A, neg_pair(eta), p);
  if (parts.p1 != fam.e(-n)) throw std::logic_error("dilation part is not trivial");
  res.h = inverse_word(fam, h);
  auto t1 = transvection_letters(fam, n, *u);
  auto t2 = transvection_letters(fam, -n, parts.u);
  res.h.insert(res.h.end(), t1.begin(), t1.end());
  res.h.insert(res.h.end(), t2.begin(), t2.end());
  res.g_prime = parts.p2;
  return res;
}

bool Reducer::verify(const MUnit& g, const ReduceResult& r) const {
  const MatrixOFA& A = fam_->ofa();
  return u_mul(A, eval_word(*fam_, r.h), r.g_prime) == g &&
         in_levi_complement(A, fam_->eta(fam_->rank()), r.g_prime);
}

ReduceResult reduce_to_smaller(const MUnit& g, const HypFamily& fam) { return Reducer(fam).reduce(g); }

// ---------------------------------------------------------------- Gauss

namespace {

int last_coordinate_sign(const RootBC& r) {
  for (std::size_t k = r.v.size(); k > 1; --k)
    if (r.v[k - 1]) return r.v[k - 1] > 0 ? 1 : -1;
  return 0;
}

}  // namespace

bool word_in_u(const HypFamily& fam, const std::vector<StGen>& w, int sign) {
  for (const auto& x : w)
    if (last_coordinate_sign(gen_root(fam.rank(), x)) != sign) return false;
  return true;
}

namespace {

// Peels T^{+-eta_l} factors for l = m..2; nullopt when g is not in st(U+-).
std::optional<std::vector<StGen>> peel(const HypFamily& fam, MUnit g, int sign, int m) {
  const MatrixOFA& A = fam.ofa();
  std::vector<StGen> out;
  for (int l = m; l >= 2; --l) {
    HypPair eta = sign > 0 ? fam.eta(l) : neg_pair(fam.eta(l));
    if (!in_parabolic(A, eta, g)) return std::nullopt;
    LeviParts parts = levi_retraction(A, eta, g);
    if (parts.p1 != fam.e(sign * l)) return std::nullopt;
    auto letters = transvection_letters(fam, sign * l, parts.u);
    out.insert(out.end(), letters.begin(), letters.end());
    g = parts.p2;
  }
  if (g != u_identity(A)) return std::nullopt;
  return out;
}

}  // namespace

bool in_u_quotient(const HypFamily& fam, const MUnit& g, int sign) {
  return peel(fam, g, sign, fam.rank()).has_value();
}

bool in_diag_quotient(const HypFamily& fam, const MUnit& g) {
  const MatrixOFA& A = fam.ofa();
  for (int i = 2; i <= fam.rank(); ++i)
    if (!in_parabolic(A, fam.eta(i), g) || !in_parabolic(A, neg_pair(fam.eta(i)), g)) return false;
  return true;
}

struct GaussDecomposer::Ctx {
  int n = 0;
  std::vector<char> rad;
  std::map<int, std::vector<RElem>> pieces;  // m -> primitive pieces of e_m
  std::map<std::pair<int, int>, std::vector<RElem>> comp;
  std::map<int, std::vector<DElem>> d0;
  std::map<int, std::vector<RElem>> units;
  std::map<int, std::size_t> residue_size;  // |R_ff / J| for the pieces f of e_m
};

namespace {

bool is_idem_mod(const MatrixOFA& A, const std::vector<char>& rad, const RElem& x) {
  return radical_zero(A, rad, A.r_sub(A.r_mul(x, x), x));
}

RElem lift_idempotent(const MatrixOFA& A, RElem x) {
  for (int t = 0; t < 64; ++t) {
    RElem x2 = A.r_mul(x, x);
    if (x2 == x) return x;
    RElem x3 = A.r_mul(x2, x);
    x = A.r_sub(A.r_kmul(A.base().from_int(3), x2), A.r_kmul(A.base().from_int(2), x3));
  }
  throw std::logic_error("idempotent does not lift");
}

}  // namespace

GaussDecomposer::GaussDecomposer(const HypFamily& fam) : fam_(&fam) {
  const MatrixOFA& A = fam.ofa();
  const int n = fam.rank();
  if (n < 1) throw InvalidInput("Gauss decomposition needs n >= 1");
  auto ctx = std::make_shared<Ctx>();
  ctx->n = n;
  ctx->rad = radical_mask(A.base());
  const auto& rad = ctx->rad;
  for (int m = 2; m <= n; ++m) {
    // Primitive idempotents of R_mm modulo the radical, greedily covering e_m.
    auto all = fam.component_all(m, m);
    std::vector<RElem> idem;
    for (const auto& x : all)
      if (!radical_zero(A, rad, x) && is_idem_mod(A, rad, x)) idem.push_back(x);
    auto below = [&](const RElem& f, const RElem& r) {
      return radical_zero(A, rad, A.r_sub(A.r_mul(f, r), f)) &&
             radical_zero(A, rad, A.r_sub(A.r_mul(r, f), f));
    };
    auto primitive = [&](const RElem& f) {
      for (const auto& g : idem)
        if (below(g, f) && !radical_zero(A, rad, A.r_sub(f, g))) return false;
      return true;
    };
    std::vector<RElem> pieces;
    RElem rest = fam.e(m);
    while (!radical_zero(A, rad, rest)) {
      auto it = std::find_if(idem.begin(), idem.end(),
                             [&](const RElem& f) { return below(f, rest) && primitive(f); });
      if (it == idem.end()) throw std::logic_error("no primitive idempotent below the remainder");
      // Lift inside the corner of what is left.
      RElem f = lift_idempotent(A, A.r_mul(A.r_mul(rest, *it), rest));
      pieces.push_back(f);
      rest = A.r_sub(rest, f);
      rest = lift_idempotent(A, rest);
    }
    RElem sum = A.r_zero();
    for (const auto& f : pieces) sum = A.r_add(sum, f);
    if (sum != fam.e(m)) throw std::logic_error("pieces do not sum to e_m");
    for (std::size_t a = 0; a < pieces.size(); ++a)
      for (std::size_t b = 0; b < pieces.size(); ++b)
        if (a != b && !A.r_is_zero(A.r_mul(pieces[a], pieces[b])))
          throw std::logic_error("pieces are not orthogonal");
    ctx->pieces[m] = pieces;
    ctx->units[m] = fam.corner_units(m);
    // Residue field size of the first piece, for the small field shortcut.
    std::unordered_set<RElem, RElemHash> seen;
    std::size_t count = 0;
    for (const auto& x : all) {
      RElem y = A.r_mul(A.r_mul(pieces.front(), x), pieces.front());
      if (seen.insert(y).second) ++count;
    }
    std::size_t rcount = 0;
    for (const auto& y : seen)
      if (radical_zero(A, rad, y)) ++rcount;
    ctx->residue_size[m] = rcount ? count / rcount : count;
  }
  for (int i = -n; i <= n; ++i) {
    if (i) ctx->d0[i] = fam.delta0_all(i);
    for (int j = -n; j <= n; ++j)
      if (i && j && i != j && i != -j) ctx->comp[{i, j}] = fam.component_all(i, j);
  }
  for (int m = 2; m <= n; ++m) ctx->comp[{-m, m}] = fam.component_all(-m, m);
  ctx_ = ctx;
}

const std::vector<RElem>& GaussDecomposer::pieces(int i) const { return ctx_->pieces.at(i); }

namespace {

struct GaussParts {
  MUnit p1, p2, p3, d;
};

}  // namespace

GaussFactors GaussDecomposer::decompose(const MUnit& g) const {
  const HypFamily& fam = *fam_;
  const MatrixOFA& A = fam.ofa();
  const Ctx& C = *ctx_;
  const MUnit one = u_identity(A);
  auto inv = [&](const MUnit& x) { return u_inv(A, x); };
  auto mul = [&](std::initializer_list<MUnit> xs) {
    MUnit acc = one;
    for (const auto& x : xs) acc = u_mul(A, acc, x);
    return acc;
  };

  // h in T^{eta_m}(*) x| D_m(*) with e_{-m} alpha(h g) e_{-m} invertible.
  auto corner_step = [&](const MUnit& g0, int m) {
    const auto& pcs = C.pieces.at(m);
    MUnit H = one;
    RElem eps_neg = A.r_zero(), eps_pos = A.r_zero();
    std::vector<int> others;
    for (int j = -(m - 1); j <= m - 1; ++j)
      if (j) others.push_back(j);
    for (std::size_t k = 0; k < pcs.size(); ++k) {
      ++stats_.pieces;
      const RElem& f = pcs[k];
      const RElem fb = A.r_bar(f);
      const RElem eps_next = A.r_add(eps_neg, fb);
      auto success = [&](const MUnit& x) {
        RElem M = alpha_of(A, u_mul(A, x, g0));
        return A.corner_inverse(A.r_mul(A.r_mul(eps_next, M), eps_next), eps_next).has_value();
      };
      if (success(H)) {
        ++stats_.cases["v0"];
        eps_neg = eps_next;
        eps_pos = A.r_add(eps_pos, f);
        continue;
      }
      RElem M = alpha_of(A, u_mul(A, H, g0));
      RElem col = A.r_mul(M, fb);
      if (k > 0) {
        RElem blk = A.r_mul(A.r_mul(eps_neg, M), eps_neg);
        auto binv = A.corner_inverse(blk, eps_neg);
        if (!binv) throw std::logic_error("previous corner lost invertibility");
        RElem proj = A.r_mul(A.r_mul(A.r_mul(M, eps_neg), *binv), eps_neg);
        col = A.r_sub(col, A.r_mul(proj, col));
      }
      const RElem base = A.r_sub(A.r_one(), A.r_add(fam.e(0), eps_neg));
      const RElem x1 = A.r_sub(base, A.r_add(eps_pos, f));
      const RElem x2 = A.r_sub(base, eps_pos);
      const RElem v0 = A.r_mul(fb, col);
      const RElem v1 = A.r_mul(x1, col), v2 = A.r_mul(x2, col), v3 = A.r_mul(base, col);
      auto nz = [&](const RElem& x) { return !radical_zero(A, C.rad, x); };
      std::vector<std::string> order{"v1", "v2", "v3", "delta"};
      std::string first = nz(v0) ? "v1" : nz(v1) ? "v1" : nz(v2) ? "v2" : nz(v3) ? "v3" : "delta";
      std::rotate(order.begin(), std::find(order.begin(), order.end(), first), order.end());

      auto search = [&](const std::string& c) -> std::optional<MUnit> {
        auto test = [&](const MUnit& cand) -> std::optional<MUnit> {
          MUnit next = u_mul(A, cand, H);
          if (success(next)) return next;
          return std::nullopt;
        };
        if (c == "v1") {
          for (int j : others)
            for (const auto& x : C.comp.at({-m, j}))
              if (!A.r_is_zero(x))
                if (auto r = test(fam.t_short(-m, j, x))) return r;
          for (const auto& x : C.units.at(m))
            if (x != fam.e(m))
              if (auto r = test(fam.dil(m, x))) return r;
        } else if (c == "v2") {
          for (int j : others)
            for (const auto& x : C.comp.at({-m, j}))
              for (const auto& y : C.comp.at({j, m})) {
                RElem xx = A.r_mul(fb, x), yy = A.r_mul(y, f);
                if (auto r = test(u_mul(A, fam.t_short(-m, j, xx), fam.t_short(j, m, yy)))) return r;
              }
        } else if (c == "v3") {
          const bool small = C.residue_size.at(m) <= 2;
          for (std::size_t p = 0; p < k; ++p)
            for (int j : others)
              for (const auto& x : C.comp.at({-m, m})) {
                MUnit t = fam.t_ultra(m, A.phi(A.r_mul(A.r_mul(fb, x), pcs[p])));
                if (!small)
                  if (auto r = test(t)) return r;
                for (const auto& y : C.comp.at({-m, j}))
                  for (const auto& z : C.comp.at({j, m}))
                    for (const auto& w : C.comp.at({-j, m})) {
                      MUnit cand = mul({t, fam.t_short(-m, j, A.r_mul(fb, y)),
                                        fam.t_short(j, m, A.r_mul(z, pcs[p])),
                                        fam.t_short(-j, m, A.r_mul(w, f))});
                      if (auto r = test(cand)) return r;
                    }
              }
        } else {
          std::unordered_set<DElem, DElemHash> seen;
          for (const auto& u : C.d0.at(m)) {
            DElem uf = A.d_act(u, f);
            if (uf == A.d_zero() || !seen.insert(uf).second) continue;
            if (auto r = test(fam.t_ultra(m, uf))) return r;
          }
        }
        return std::nullopt;
      };
      std::optional<MUnit> next;
      for (std::size_t t = 0; t < order.size() && !next; ++t) {
        next = search(order[t]);
        if (next) ++stats_.cases[order[t]];
        else ++stats_.fallbacks;
      }
      if (!next) throw std::logic_error("no corner step found");
      H = *next;
      eps_neg = eps_next;
      eps_pos = A.r_add(eps_pos, f);
    }
    return H;
  };

  std::function<GaussParts(const MUnit&, int)> rec = [&](const MUnit& x, int m) -> GaussParts {
    if (m < 2) return {one, one, one, x};
    const HypPair eta = fam.eta(m), neta = neg_pair(eta);
    MUnit H = corner_step(x, m);
    MUnit hx = u_mul(A, H, x);
    auto u = parabolic_extract(A, neta, hx);
    if (!u) throw std::logic_error("corner not invertible after the corner step");
    MUnit t1 = transvection(A, neta, *u);
    LeviParts L = levi_retraction(A, eta, u_mul(A, inv(t1), hx));
    GaussParts sub = rec(L.p2, m - 1);
    MUnit T2 = transvection(A, eta, L.u), D = fam.dil(m, L.p1);
    MUnit Mid = mul({sub.p1, sub.p2, sub.p3});
    MUnit T2d = mul({inv(D), T2, D});
    MUnit Tw = mul({inv(Mid), T2d, Mid});
    MUnit DA = u_mul(A, D, sub.p1);
    MUnit Sm = mul({inv(DA), t1, DA});
    LeviParts Y = levi_retraction(A, eta, u_mul(A, inv(H), D));
    if (Y.p2 != one) throw std::logic_error("corner step left the parabolic");
    MUnit Db = fam.dil(m, Y.p1), Dbi = inv(Db);
    GaussParts out;
    out.p1 = mul({transvection(A, eta, Y.u), Db, sub.p1, Dbi});
    out.p2 = mul({Db, Sm, sub.p2, Dbi});
    out.p3 = mul({Db, sub.p3, Tw, Dbi});
    out.d = u_mul(A, Db, sub.d);
    return out;
  };

  GaussParts parts = rec(g, fam.rank());
  GaussFactors f;
  auto w1 = peel(fam, parts.p1, 1, fam.rank());
  auto w2 = peel(fam, parts.p2, -1, fam.rank());
  auto w3 = peel(fam, parts.p3, 1, fam.rank());
  if (!w1 || !w2 || !w3) throw std::logic_error("Gauss factor outside its unipotent subgroup");
  f.u_plus1 = std::move(*w1);
  f.u_minus = std::move(*w2);
  f.u_plus2 = std::move(*w3);
  f.d = parts.d;
  return f;
}

bool GaussDecomposer::verify(const MUnit& g, const GaussFactors& f) const {
  const HypFamily& fam = *fam_;
  const MatrixOFA& A = fam.ofa();
  MUnit prod = u_mul(A, u_mul(A, eval_word(fam, f.u_plus1), eval_word(fam, f.u_minus)),
                     u_mul(A, eval_word(fam, f.u_plus2), f.d));
  return prod == g && word_in_u(fam, f.u_plus1, 1) && word_in_u(fam, f.u_minus, -1) &&
         word_in_u(fam, f.u_plus2, 1) && in_diag_quotient(fam, f.d);
}

GaussFactors gauss_decompose(const MUnit& g, const HypFamily& fam) {
  return GaussDecomposer(fam).decompose(g);
}

// ---------------------------------------------------------------- groups

IntersectionCheck unipotent_intersections(const NamedInstance& in) {
  const HypFamily& fam = in.fam;
  const MatrixOFA& A = *in.ofa;
  const int n = fam.rank();
  const auto asg = stmap_assignment(fam);
  std::vector<Mat> plus, minus;
  for (const auto& r : roots_bc(n)) {
    int s = last_coordinate_sign(r);
    if (!s) continue;
    for (const auto& x : root_subgroup(fam, r)) (s > 0 ? plus : minus).push_back(asg.image(x));
  }
  auto full = MatGroup::closure(A.base_ptr(), A.size(), full_group_generators(in));
  std::vector<Mat> diag;
  for (const Mat& m : full.elements())
    if (in_diag_quotient(fam, unit_from_matrix(A, m))) diag.push_back(m);
  IntersectionCheck out;
  auto up = MatGroup::closure(A.base_ptr(), A.size(), plus);
  auto um = MatGroup::closure(A.base_ptr(), A.size(), minus);
  auto dg = MatGroup::closure(A.base_ptr(), A.size(), diag);
  std::vector<Mat> md = minus;
  md.insert(md.end(), diag.begin(), diag.end());
  auto mdg = MatGroup::closure(A.base_ptr(), A.size(), md);
  out.u_plus = up.size();
  out.u_minus = um.size();
  out.diag = dg.size();
  out.minus_diag = mdg.size();
  for (const Mat& m : um.elements()) out.minus_cap_diag += dg.contains(m);
  for (const Mat& m : up.elements()) out.plus_cap_minus_diag += mdg.contains(m);
  return out;
}

CrossedModuleReport crossed_module_consequences(const NamedInstance& in, std::uint64_t limit,
                                                std::size_t cap) {
  const HypFamily& fam = in.fam;
  const MatrixOFA& A = *in.ofa;
  const CommRing& K = A.base();
  const int dim = A.size();
  CrossedModuleReport out;
  const int n = fam.rank();
  out.rank_ok = n >= 4 || (n >= 3 && fam.is_strong());
  if (n < 2) throw InvalidInput("crossed module checks need n >= 2");

  auto full = MatGroup::closure(A.base_ptr(), dim, full_group_generators(in));
  auto elem = MatGroup::closure(A.base_ptr(), dim, elementary_generators(fam));
  out.group_order = full.size();
  out.elementary_order = elem.size();

  AxiomStat normal{"normality", 0, 0, true};
  for (const Mat& s : full.generators()) {
    Mat si = *mat_inverse(K, s);
    for (const Mat& t : elem.generators()) {
      ++normal.tuples;
      if (!elem.contains(mat_mul(K, mat_mul(K, s, t), si))) {
        ++normal.failures;
        if (normal.failures == 1)
          out.report.violations.push_back({"normality", "s=" + mat_str(K, s) + ", t=" + mat_str(K, t)});
      }
    }
  }
  out.report.stats.push_back(normal);

  Presentation P = instantiate_relations(fam, cap);
  out.relations = P.relations().size();
  RelationEvaluator ev(P, A.base_ptr(), dim);
  auto asg = stmap_assignment(fam);
  std::vector<Mat> images;
  for (const auto& x : P.generators()) images.push_back(asg.image(x));

  AxiomStat conj{"conjugated relations", 0, 0, limit == 0};
  const auto& G = full.elements();
  const std::size_t count = limit ? std::min<std::size_t>(limit, G.size()) : G.size();
  if (ev.packed()) {
    std::vector<std::uint64_t> img(images.size()), inv(images.size()), base(images.size()),
        base_inv(images.size());
    for (std::size_t k = 0; k < images.size(); ++k) {
      base[k] = pack_gf2(images[k]);
      base_inv[k] = pack_gf2(*mat_inverse(K, images[k]));
    }
    for (std::size_t e = 0; e < count; ++e) {
      std::uint64_t g = pack_gf2(G[e]);
      std::uint64_t gi = pack_gf2(*mat_inverse(K, G[e]));
      for (std::size_t k = 0; k < images.size(); ++k) {
        img[k] = gf2_mul(gf2_mul(g, base[k], dim), gi, dim);
        inv[k] = gf2_mul(gf2_mul(g, base_inv[k], dim), gi, dim);
      }
      ++conj.tuples;
      if (auto r = ev.first_failure(img, inv)) {
        ++conj.failures;
        if (conj.failures == 1)
          out.report.violations.push_back(
              {"conjugated relations", "g=" + mat_str(K, G[e]) + ", " + P.relation_str(A, P.relations()[*r])});
      }
    }
  } else {
    for (std::size_t e = 0; e < count; ++e) {
      Mat gi = *mat_inverse(K, G[e]);
      std::vector<Mat> img;
      for (const Mat& m : images) img.push_back(mat_mul(K, mat_mul(K, G[e], m), gi));
      ++conj.tuples;
      Report r = ev.check(img, &A);
      if (!r.ok()) {
        ++conj.failures;
        if (conj.failures == 1)
          out.report.violations.push_back({"conjugated relations", "g=" + mat_str(K, G[e]) + ", " +
                                                                       r.violations.front().witness});
      }
    }
  }
  out.conjugates_checked = conj.tuples;
  out.report.stats.push_back(conj);

  AxiomStat ad{"Ad", 0, 0, true};
  std::vector<DiagGen> ds;
  for (int i = 1; i <= n; ++i)
    for (const auto& a : fam.corner_units(i)) ds.push_back({i, a, u_identity(A)});
  for (const auto& g : fam.d0_elements()) ds.push_back({0, A.r_zero(), g});
  for (const auto& d : ds) {
    Mat dm = diag_matrix(fam, d);
    Mat di = *mat_inverse(K, dm);
    for (std::size_t k = 0; k < P.generators().size(); ++k) {
      ++ad.tuples;
      const StGen& x = P.generators()[k];
      if (mat_mul(K, mat_mul(K, dm, images[k]), di) != asg.image(diag_action(fam, d, x))) {
        ++ad.failures;
        if (ad.failures == 1)
          out.report.violations.push_back({"Ad", "d=" + mat_str(K, dm) + ", x=" + gen_str(A, x)});
      }
    }
  }
  out.ad_checks = ad.tuples;
  out.report.stats.push_back(ad);
  return out;
}

}  // namespace oddform
