#include "oddform/matrix_ofa.hpp"

#include <unordered_set>

namespace oddform {

namespace {

constexpr std::uint64_t kSat = 1ull << 62;
constexpr std::size_t kPool = 4096;

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  return a > kSat / b ? kSat : a * b;
}

std::uint64_t sat_pow(std::uint64_t q, std::size_t e) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < e; ++i) r = sat_mul(r, q);
  return r;
}

// Entry (x, y) of a^T J - J b as a row over the 2N^2 variables of (a, b).
std::vector<std::vector<Elt>> adjoint_rows(const CommRing& k, const Mat& j, int n) {
  std::vector<std::vector<Elt>> rows;
  const int nn = n * n;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<Elt> row(2 * nn, k.zero());
      for (int l = 0; l < n; ++l) {
        row[l * n + x] = k.add(row[l * n + x], j.at(l, y));
        row[nn + l * n + y] = k.sub(row[nn + l * n + y], j.at(x, l));
      }
      rows.push_back(std::move(row));
    }
  return rows;
}

Mat mat_from(const std::vector<Elt>& v, std::size_t off, int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.set(i, j, v[off + i * n + j]);
  return m;
}

}  // namespace

std::string kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::Linear: return "linear";
    case FamilyKind::Symplectic: return "sp";
    case FamilyKind::OrthEven: return "o-even";
    case FamilyKind::OrthOdd: return "o-odd";
  }
  return "?";
}

FamilyKind parse_kind(const std::string& s) {
  if (s == "linear") return FamilyKind::Linear;
  if (s == "sp") return FamilyKind::Symplectic;
  if (s == "o-even") return FamilyKind::OrthEven;
  if (s == "o-odd") return FamilyKind::OrthOdd;
  throw InvalidInput("unknown algebra family '" + s + "'");
}

MatrixOFA MatrixOFA::from_module(const QuadraticModule& q) {
  if (!q.k) throw InvalidInput("quadratic module without base ring");
  if (q.rank < 0 || q.rank > Mat::kMax) throw InvalidInput("module rank out of range");
  if (q.lambda != 1 && q.lambda != -1) throw InvalidInput("lambda must be 1 or -1");
  const CommRing& k = *q.k;
  const Elt lam = q.lambda == 1 ? k.one() : k.neg(k.one());
  MatrixOFA m;
  m.k_ = q.k;
  m.n_ = q.rank;
  m.lambda_ = q.lambda;
  m.j_ = q.form.n == q.rank ? q.form : Mat(q.rank);
  m.param_ = q.param;
  m.explicit_member_ = q.explicit_member;
  for (int i = 0; i < m.n_; ++i)
    for (int j = 0; j < m.n_; ++j)
      if (m.j_.at(j, i) != k.mul(lam, m.j_.at(i, j)))
        throw InvalidInput("form is not lambda-hermitian");
  if (q.quad.n == q.rank) {
    m.f_ = q.quad;
    Mat t = mat_add(k, m.f_, mat_scale(k, lam, mat_transpose(m.f_)));
    if (t != m.j_) throw InvalidInput("quadratic part does not polarize to the form");
  } else {
    if (q.param == FormParam::Min) throw InvalidInput("Min parameter needs a quadratic part");
    // Upper-triangular part, when the diagonal allows it.
    m.f_ = Mat(m.n_);
    for (int i = 0; i < m.n_; ++i)
      for (int j = i + 1; j < m.n_; ++j) m.f_.set(i, j, m.j_.at(i, j));
    if (mat_add(k, m.f_, mat_scale(k, lam, mat_transpose(m.f_))) != m.j_) {
      bool ok = true;
      for (int i = 0; i < m.n_ && ok; ++i) {
        ok = false;
        for (Elt c = 0; c < k.size(); ++c)
          if (k.add(c, k.mul(lam, c)) == m.j_.at(i, i)) {
            m.f_.set(i, i, c);
            ok = true;
            break;
          }
      }
      if (!ok) throw InvalidInput("form has no quadratic refinement");
    }
  }
  if (q.param == FormParam::Explicit && !q.explicit_member)
    throw InvalidInput("explicit parameter without predicate");
  m.jinv_ = mat_inverse(k, m.j_);
  m.setup();
  if (q.param == FormParam::Explicit && m.d_count() <= (1u << 16)) {
    // Bounds: the minimal parameter is contained in L, L in the maximal one.
    MatrixOFA lo = m, hi = m;
    lo.param_ = FormParam::Min;
    hi.param_ = FormParam::Max;
    lo.setup();
    hi.setup();
    for (const auto& u : lo.enumerate_d(1u << 16))
      if (!q.explicit_member(u)) throw InvalidInput("parameter misses a minimal element");
    for (const auto& u : hi.enumerate_d(1u << 16))
      if (q.explicit_member(u) && !hi.in_delta(u))
        throw InvalidInput("parameter exceeds the maximal one");
  }
  return m;
}

MatrixOFA MatrixOFA::linear(RingPtr k, int n) {
  if (n < 1 || n > Mat::kMax) throw InvalidInput("linear rank out of range");
  MatrixOFA m;
  m.k_ = std::move(k);
  m.n_ = n;
  m.linear_ = true;
  m.j_ = Mat(n);
  m.f_ = Mat(n);
  m.setup();
  return m;
}

void MatrixOFA::setup() {
  const CommRing& k = *k_;
  const int n = n_, nn = n * n;
  r_basis_.clear();
  r_null_.clear();
  rho_null_.clear();
  s_free_.clear();
  r_sys_.reset();
  rho_sys_.reset();
  r_pool_.reset();
  d_pool_.reset();
  aug_pool_.reset();
  if (k.is_field()) {
    auto rows = linear_ ? std::vector<std::vector<Elt>>{} : adjoint_rows(k, j_, n);
    r_sys_ = std::make_shared<FieldSystem>(k, rows, 2 * nn);
    r_null_ = r_sys_->nullspace();
    for (const auto& v : r_null_) r_basis_.push_back({mat_from(v, 0, n), mat_from(v, nn, n)});
    // rho system: R-membership, rho + conj(rho) = -conj(pi) pi, and for Min
    // the diagonal and lambda-symmetry of S = J rho_1 + pi_1^T F pi_1.
    std::vector<Elt> sum_row;
    for (int x = 0; x < n; ++x)
      for (int y = 0; y < n; ++y) {
        std::vector<Elt> row(2 * nn, k.zero());
        row[x * n + y] = k.one();
        row[nn + x * n + y] = k.one();
        rows.push_back(std::move(row));
      }
    if (param_ == FormParam::Min) {
      const Elt lam = lambda_ == 1 ? k.one() : k.neg(k.one());
      const bool diag_zero = k.sub(k.one(), lam) == k.zero();
      for (int x = 0; x < n; ++x)
        for (int y = x; y < n; ++y) {
          if (x == y && !diag_zero) continue;
          std::vector<Elt> row(2 * nn, k.zero());
          for (int l = 0; l < n; ++l) {
            row[l * n + y] = k.add(row[l * n + y], j_.at(x, l));
            if (x != y) row[l * n + x] = k.add(row[l * n + x], k.mul(lam, j_.at(y, l)));
          }
          rows.push_back(std::move(row));
        }
    }
    rho_sys_ = std::make_shared<FieldSystem>(k, rows, 2 * nn);
    rho_null_ = rho_sys_->nullspace();
    return;
  }
  if (linear_) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        r_basis_.push_back({mat_unit(k, n, i, j, k.one()), Mat(n)});
        r_basis_.push_back({Mat(n), mat_unit(k, n, i, j, k.one())});
      }
    return;
  }
  if (!jinv_) throw InvalidInput("degenerate forms need a field base");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r_basis_.push_back(lift(mat_unit(k, n, i, j, k.one())));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) s_free_.push_back({i, j});
}

std::vector<Elt> MatrixOFA::rho_rhs(const R& p) const {
  const CommRing& k = *k_;
  const int n = n_;
  std::vector<Elt> b;
  if (!linear_) b.assign(n * n, k.zero());
  Mat pp = mat_mul(k, p.b, p.a);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) b.push_back(k.neg(pp.at(x, y)));
  if (param_ == FormParam::Min) {
    const Elt lam = lambda_ == 1 ? k.one() : k.neg(k.one());
    const bool diag_zero = k.sub(k.one(), lam) == k.zero();
    Mat m = mat_mul(k, mat_transpose(p.a), mat_mul(k, f_, p.a));
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y) {
        if (x == y && !diag_zero) continue;
        Elt v = m.at(x, y);
        if (x != y) v = k.add(v, k.mul(lam, m.at(y, x)));
        b.push_back(k.neg(v));
      }
  }
  return b;
}

MatrixOFA::R MatrixOFA::rho_from_vars(const std::vector<Elt>& v) const {
  return {mat_from(v, 0, n_), mat_from(v, n_ * n_, n_)};
}

MatrixOFA::R MatrixOFA::r_add(const R& x, const R& y) const {
  return {mat_add(*k_, x.a, y.a), mat_add(*k_, x.b, y.b)};
}
MatrixOFA::R MatrixOFA::r_neg(const R& x) const {
  return {mat_neg(*k_, x.a), mat_neg(*k_, x.b)};
}
MatrixOFA::R MatrixOFA::r_mul(const R& x, const R& y) const {
  return {mat_mul(*k_, x.a, y.a), mat_mul(*k_, y.b, x.b)};
}
MatrixOFA::R MatrixOFA::r_one() const {
  Mat i = mat_id(*k_, n_);
  return {i, i};
}
MatrixOFA::R MatrixOFA::r_kmul(Elt c, const R& x) const {
  return {mat_scale(*k_, c, x.a), mat_scale(*k_, c, x.b)};
}

MatrixOFA::D MatrixOFA::d_add(const D& u, const D& v) const {
  return {r_add(u.p, v.p), r_add(r_sub(u.r, r_mul(r_bar(u.p), v.p)), v.r)};
}
MatrixOFA::D MatrixOFA::d_neg(const D& u) const {
  return {r_neg(u.p), r_sub(r_neg(u.r), r_mul(r_bar(u.p), u.p))};
}
MatrixOFA::D MatrixOFA::d_act(const D& u, const R& x) const {
  return {r_mul(u.p, x), r_mul(r_mul(r_bar(x), u.r), x)};
}
MatrixOFA::D MatrixOFA::d_kact(const D& u, Elt c) const {
  return {r_kmul(c, u.p), r_kmul(k_->mul(c, c), u.r)};
}

std::optional<Mat> MatrixOFA::adjoint(const Mat& a) const {
  if (linear_) return std::nullopt;
  const CommRing& k = *k_;
  if (jinv_) return mat_mul(k, *jinv_, mat_mul(k, mat_transpose(a), j_));
  std::vector<Elt> rhs;
  Mat t = mat_mul(k, mat_transpose(a), j_);
  // Solve J b = a^T J for b, using the R system with a fixed.
  std::vector<std::vector<Elt>> rows;
  std::vector<Elt> b;
  const int n = n_;
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      std::vector<Elt> row(n * n, k.zero());
      for (int l = 0; l < n; ++l) row[l * n + y] = j_.at(x, l);
      rows.push_back(std::move(row));
      b.push_back(t.at(x, y));
    }
  FieldSystem sys(k, rows, n * n);
  auto s = sys.solve(b);
  if (!s) return std::nullopt;
  return mat_from(*s, 0, n);
}

MatrixOFA::R MatrixOFA::lift(const Mat& a) const {
  auto b = adjoint(a);
  if (!b) throw InvalidInput("matrix has no adjoint");
  return {a, *b};
}

bool MatrixOFA::in_r(const R& x) const {
  if (x.a.n != n_ || x.b.n != n_) return false;
  if (linear_) return true;
  const CommRing& k = *k_;
  return mat_mul(k, mat_transpose(x.a), j_) == mat_mul(k, j_, x.b);
}

bool MatrixOFA::in_delta(const D& u) const {
  if (!in_r(u.p) || !in_r(u.r)) return false;
  const CommRing& k = *k_;
  R t = r_add(r_add(u.r, r_bar(u.r)), r_mul(r_bar(u.p), u.p));
  if (!r_is_zero(t)) return false;
  if (param_ == FormParam::Explicit) return explicit_member_(u);
  if (param_ == FormParam::Min) {
    const Elt lam = lambda_ == 1 ? k.one() : k.neg(k.one());
    Mat s = mat_add(k, mat_mul(k, j_, u.r.a),
                    mat_mul(k, mat_transpose(u.p.a), mat_mul(k, f_, u.p.a)));
    const Elt ml = k.sub(k.one(), lam);
    for (int i = 0; i < n_; ++i) {
      for (int j = i + 1; j < n_; ++j)
        if (k.add(s.at(i, j), k.mul(lam, s.at(j, i))) != k.zero()) return false;
      bool hit = false;
      for (Elt c = 0; c < k.size() && !hit; ++c) hit = k.mul(ml, c) == s.at(i, i);
      if (!hit) return false;
    }
  }
  return true;
}

std::optional<MatrixOFA::R> MatrixOFA::corner_inverse(const R& x, const R& e) const {
  R y = r_add(x, r_sub(r_one(), e));
  auto ia = mat_inverse(*k_, y.a);
  auto ib = mat_inverse(*k_, y.b);
  if (!ia || !ib) return std::nullopt;
  return r_sub(R{*ia, *ib}, r_sub(r_one(), e));
}

std::uint64_t MatrixOFA::r_count() const {
  const CommRing& k = *k_;
  if (r_sys_) return sat_pow(k.size(), r_null_.size());
  return sat_pow(k.size(), (linear_ ? 2 : 1) * n_ * n_);
}

namespace {

// Admissible diagonal entries of S on the non-field path.
std::vector<Elt> diag_choices(const CommRing& k, int lambda, FormParam param) {
  const Elt lam = lambda == 1 ? k.one() : k.neg(k.one());
  std::vector<Elt> out;
  for (Elt c = 0; c < k.size(); ++c) {
    if (k.add(c, k.mul(lam, c)) != k.zero()) continue;
    if (param == FormParam::Min) {
      bool hit = false;
      for (Elt t = 0; t < k.size() && !hit; ++t) hit = k.mul(k.sub(k.one(), lam), t) == c;
      if (!hit) continue;
    }
    out.push_back(c);
  }
  return out;
}

}  // namespace

std::uint64_t MatrixOFA::d_count() const {
  const CommRing& k = *k_;
  std::uint64_t fib;
  if (rho_sys_) {
    fib = sat_pow(k.size(), rho_null_.size());
  } else if (linear_) {
    fib = sat_pow(k.size(), n_ * n_);
  } else {
    auto dc = diag_choices(k, lambda_, param_);
    fib = sat_mul(sat_pow(dc.size(), n_), sat_pow(k.size(), n_ * (n_ - 1) / 2));
  }
  return sat_mul(r_count(), fib);
}

MatrixOFA::R MatrixOFA::random_r(Rng& rng) const {
  const CommRing& k = *k_;
  std::uniform_int_distribution<unsigned> pick(0, k.size() - 1);
  if (r_sys_) {
    std::vector<Elt> v(2 * n_ * n_, k.zero());
    for (const auto& b : r_null_) {
      Elt c = static_cast<Elt>(pick(rng));
      if (c == k.zero()) continue;
      for (std::size_t i = 0; i < v.size(); ++i) v[i] = k.add(v[i], k.mul(c, b[i]));
    }
    return rho_from_vars(v);
  }
  Mat a(n_), b(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      a.set(i, j, static_cast<Elt>(pick(rng)));
      b.set(i, j, static_cast<Elt>(pick(rng)));
    }
  if (linear_) return {a, b};
  return lift(a);
}

MatrixOFA::D MatrixOFA::random_d_over(const R& p, Rng& rng) const {
  const CommRing& k = *k_;
  std::uniform_int_distribution<unsigned> pick(0, k.size() - 1);
  for (int attempt = 0; attempt < 4096; ++attempt) {
    D u{p, r_zero()};
    if (rho_sys_) {
      auto s = rho_sys_->solve(rho_rhs(p));
      if (!s) throw InvalidInput("pi has no rho completion");
      for (const auto& b : rho_null_) {
        Elt c = static_cast<Elt>(pick(rng));
        if (c == k.zero()) continue;
        for (std::size_t i = 0; i < s->size(); ++i) (*s)[i] = k.add((*s)[i], k.mul(c, b[i]));
      }
      u.r = rho_from_vars(*s);
    } else if (linear_) {
      Mat r2(n_);
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) r2.set(i, j, static_cast<Elt>(pick(rng)));
      u.r = {mat_sub(k, mat_neg(k, r2), mat_mul(k, p.b, p.a)), r2};
    } else {
      auto dc = diag_choices(k, lambda_, param_);
      const Elt lam = lambda_ == 1 ? k.one() : k.neg(k.one());
      Mat s(n_);
      for (auto [i, j] : s_free_) {
        if (i == j) {
          s.set(i, i, dc[std::uniform_int_distribution<std::size_t>(0, dc.size() - 1)(rng)]);
        } else {
          Elt c = static_cast<Elt>(pick(rng));
          s.set(i, j, c);
          s.set(j, i, k.neg(k.mul(lam, c)));
        }
      }
      Mat m = mat_mul(k, mat_transpose(p.a), mat_mul(k, f_, p.a));
      u.r = lift(mat_mul(k, *jinv_, mat_sub(k, s, m)));
    }
    if (param_ != FormParam::Explicit || explicit_member_(u)) return u;
  }
  throw BoundExceeded("explicit parameter rejects every sample");
}

MatrixOFA::D MatrixOFA::random_d(Rng& rng) const {
  for (int attempt = 0; attempt < 4096; ++attempt) {
    R p = random_r(rng);
    if (rho_sys_ && !rho_sys_->solve(rho_rhs(p))) continue;
    return random_d_over(p, rng);
  }
  throw BoundExceeded("no sampled pi value lifts to Delta");
}

std::vector<MatrixOFA::R> MatrixOFA::enumerate_r(std::size_t bound) const {
  const CommRing& k = *k_;
  if (r_count() > bound) throw BoundExceeded("R exceeds enumeration bound");
  auto add = [this](const R& x, const R& y) { return r_add(x, y); };
  auto scale = [this](Elt c, const R& x) { return r_kmul(c, x); };
  return span_of<R, RElemHash>(k, r_zero(), r_basis_, add, scale, bound);
}

std::vector<MatrixOFA::D> MatrixOFA::enumerate_d_over(const R& p, std::size_t bound) const {
  const CommRing& k = *k_;
  std::vector<D> out;
  auto keep = [&](D u) {
    if (param_ == FormParam::Explicit && !explicit_member_(u)) return;
    out.push_back(std::move(u));
    if (out.size() > bound) throw BoundExceeded("Delta exceeds enumeration bound");
  };
  if (rho_sys_) {
    auto s = rho_sys_->solve(rho_rhs(p));
    if (!s) return out;
    R base = rho_from_vars(*s);
    std::vector<R> gens;
    for (const auto& v : rho_null_) gens.push_back(rho_from_vars(v));
    auto add = [this](const R& x, const R& y) { return r_add(x, y); };
    auto scale = [this](Elt c, const R& x) { return r_kmul(c, x); };
    for (const R& r : span_of<R, RElemHash>(k, r_zero(), gens, add, scale, bound))
      keep({p, r_add(base, r)});
    return out;
  }
  if (linear_) {
    Mat pp = mat_mul(k, p.b, p.a);
    for (const R& x : enumerate_r(kSat)) {
      if (!mat_is_zero(x.a)) continue;
      keep({p, {mat_sub(k, mat_neg(k, x.b), pp), x.b}});
    }
    return out;
  }
  auto dc = diag_choices(k, lambda_, param_);
  const Elt lam = lambda_ == 1 ? k.one() : k.neg(k.one());
  Mat m = mat_mul(k, mat_transpose(p.a), mat_mul(k, f_, p.a));
  std::vector<std::size_t> idx(s_free_.size(), 0);
  while (true) {
    Mat s(n_);
    for (std::size_t t = 0; t < s_free_.size(); ++t) {
      auto [i, j] = s_free_[t];
      if (i == j) {
        s.set(i, i, dc[idx[t]]);
      } else {
        Elt c = static_cast<Elt>(idx[t]);
        s.set(i, j, c);
        s.set(j, i, k.neg(k.mul(lam, c)));
      }
    }
    keep({p, lift(mat_mul(k, *jinv_, mat_sub(k, s, m)))});
    std::size_t t = 0;
    for (; t < idx.size(); ++t) {
      auto [i, j] = s_free_[t];
      std::size_t lim = i == j ? dc.size() : k.size();
      if (++idx[t] < lim) break;
      idx[t] = 0;
    }
    if (t == idx.size()) break;
  }
  return out;
}

std::vector<MatrixOFA::D> MatrixOFA::enumerate_d(std::size_t bound) const {
  std::vector<D> out;
  for (const R& p : enumerate_r(bound)) {
    auto part = enumerate_d_over(p, bound);
    out.insert(out.end(), part.begin(), part.end());
    if (out.size() > bound) throw BoundExceeded("Delta exceeds enumeration bound");
  }
  return out;
}

std::string MatrixOFA::r_str(const R& x) const {
  return "(" + mat_str(*k_, x.a) + "," + mat_str(*k_, x.b) + ")";
}

std::string MatrixOFA::d_str(const D& u) const {
  return "<" + r_str(u.p) + "," + r_str(u.r) + ">";
}

Carrier<MatrixOFA::R> MatrixOFA::r_carrier() const {
  auto str = [this](const R& x) { return r_str(x); };
  if (r_count() <= kPool) return listed_carrier<R>("a", enumerate_r(kPool), str);
  if (!r_pool_) {
    Rng rng(0x5eed0001ull);
    auto pool = std::make_shared<std::vector<R>>();
    for (std::size_t i = 0; i < kPool; ++i) pool->push_back(random_r(rng));
    r_pool_ = pool;
  }
  auto pool = r_pool_;
  return sampled_carrier<R>("a", [pool](Rng& rng) {
    return (*pool)[std::uniform_int_distribution<std::size_t>(0, pool->size() - 1)(rng)];
  }, str);
}

Carrier<MatrixOFA::D> MatrixOFA::d_carrier() const {
  auto str = [this](const D& u) { return d_str(u); };
  if (d_count() <= 16 * kPool) return listed_carrier<D>("u", enumerate_d(16 * kPool), str);
  if (!d_pool_) {
    Rng rng(0x5eed0002ull);
    auto pool = std::make_shared<std::vector<D>>();
    for (std::size_t i = 0; i < kPool; ++i) pool->push_back(random_d(rng));
    d_pool_ = pool;
  }
  auto pool = d_pool_;
  return sampled_carrier<D>("u", [pool](Rng& rng) {
    return (*pool)[std::uniform_int_distribution<std::size_t>(0, pool->size() - 1)(rng)];
  }, str);
}

Carrier<MatrixOFA::D> MatrixOFA::aug_carrier() const {
  auto str = [this](const D& u) { return d_str(u); };
  if (!aug_pool_) {
    Rng rng(0x5eed0003ull);
    auto pool = std::make_shared<std::vector<D>>();
    for (std::size_t i = 0; i < kPool; ++i) pool->push_back(random_d_over(r_zero(), rng));
    aug_pool_ = pool;
  }
  auto pool = aug_pool_;
  return sampled_carrier<D>("v", [pool](Rng& rng) {
    return (*pool)[std::uniform_int_distribution<std::size_t>(0, pool->size() - 1)(rng)];
  }, str);
}

bool MatrixOFA::exhaustive_ok(std::uint64_t limit) const {
  return r_count() <= kPool && d_count() <= 16 * kPool && sat_mul(r_count(), d_count()) <= limit;
}

int basis_pos(int i, int l, bool odd) {
  if (i < 0) return i + l;
  if (i == 0) return l;
  return odd ? l + i : l + i - 1;
}

QuadraticModule named_module(const NamedFamily& f) {
  if (f.kind == FamilyKind::Linear) throw InvalidInput("linear family has no form");
  const CommRing& k = *f.k;
  const bool odd = f.kind == FamilyKind::OrthOdd;
  const int l = f.rank, n = 2 * l + (odd ? 1 : 0);
  if (l < 0 || n > Mat::kMax) throw InvalidInput("rank out of range");
  QuadraticModule q;
  q.k = f.k;
  q.rank = n;
  q.lambda = f.kind == FamilyKind::Symplectic ? -1 : 1;
  q.quad = Mat(n);
  for (int i = 1; i <= l; ++i) q.quad.set(basis_pos(i, l, odd), basis_pos(-i, l, odd), k.one());
  if (odd) q.quad.set(basis_pos(0, l, odd), basis_pos(0, l, odd), k.one());
  const Elt lam = q.lambda == 1 ? k.one() : k.neg(k.one());
  q.form = mat_add(k, q.quad, mat_scale(k, lam, mat_transpose(q.quad)));
  q.param = f.kind == FamilyKind::Symplectic ? FormParam::Max : FormParam::Min;
  return q;
}

bool classical_oracle(const NamedFamily& f, const Mat& g) {
  const CommRing& k = *f.k;
  if (f.kind == FamilyKind::Linear) return k.is_unit(mat_det(k, g));
  QuadraticModule q = named_module(f);
  const int n = q.rank;
  // Bilinear form on all pairs of basis vectors.
  std::vector<std::vector<Elt>> cols(n, std::vector<Elt>(n));
  for (int c = 0; c < n; ++c)
    for (int r = 0; r < n; ++r) cols[c][r] = g.at(r, c);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      if (bilinear(k, q.form, cols[a], cols[b]) != q.form.at(a, b)) return false;
  if (f.kind == FamilyKind::Symplectic) return true;
  // Quadratic form on basis vectors; with the polar form this is all of it.
  for (int a = 0; a < n; ++a)
    if (bilinear(k, q.quad, cols[a], cols[a]) != q.quad.at(a, a)) return false;
  return true;
}

std::uint64_t classical_order(const NamedFamily& f) {
  const CommRing& k = *f.k;
  if (!k.is_field()) throw InvalidInput("classical orders need a field base");
  const std::uint64_t q = k.size();
  const int l = f.rank;
  auto pw = [](std::uint64_t b, int e) { return sat_pow(b, e); };
  std::uint64_t r = 1;
  switch (f.kind) {
    case FamilyKind::Linear:
      for (int i = 0; i < l; ++i) r = sat_mul(r, pw(q, l) - pw(q, i));
      return r;
    case FamilyKind::Symplectic:
      r = pw(q, l * l);
      for (int i = 1; i <= l; ++i) r = sat_mul(r, pw(q, 2 * i) - 1);
      return r;
    case FamilyKind::OrthEven:
      r = sat_mul(2 * pw(q, l * (l - 1)), pw(q, l) - 1);
      for (int i = 1; i < l; ++i) r = sat_mul(r, pw(q, 2 * i) - 1);
      return r;
    case FamilyKind::OrthOdd:
      r = pw(q, l * l);
      if (q % 2 == 1) r *= 2;
      for (int i = 1; i <= l; ++i) r = sat_mul(r, pw(q, 2 * i) - 1);
      return r;
  }
  return 0;
}

}  // namespace oddform
