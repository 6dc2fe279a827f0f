#include "oddform/matrix.hpp"

#include <numeric>

namespace oddform {

std::size_t Mat::hash() const {
  std::uint64_t h = 1469598103934665603ull ^ n;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      h ^= e[i * kMax + j];
      h *= 1099511628211ull;
    }
  return static_cast<std::size_t>(h);
}

Mat mat_zero(int n) { return Mat(n); }

Mat mat_id(const CommRing& k, int n) {
  Mat m(n);
  for (int i = 0; i < n; ++i) m.set(i, i, k.one());
  return m;
}

Mat mat_unit(const CommRing& k, int n, int i, int j, Elt c) {
  (void)k;
  Mat m(n);
  m.set(i, j, c);
  return m;
}

Mat mat_add(const CommRing& k, const Mat& a, const Mat& b) {
  Mat m(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.set(i, j, k.add(a.at(i, j), b.at(i, j)));
  return m;
}

Mat mat_sub(const CommRing& k, const Mat& a, const Mat& b) {
  Mat m(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.set(i, j, k.sub(a.at(i, j), b.at(i, j)));
  return m;
}

Mat mat_neg(const CommRing& k, const Mat& a) {
  Mat m(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.set(i, j, k.neg(a.at(i, j)));
  return m;
}

Mat mat_mul(const CommRing& k, const Mat& a, const Mat& b) {
  const int n = a.n;
  Mat m(n);
  if (unsigned q = k.modulus()) {
    // Row accumulation; most operands are sparse.
    for (int i = 0; i < n; ++i) {
      unsigned acc[Mat::kMax] = {};
      for (int l = 0; l < n; ++l) {
        const unsigned x = a.at(i, l);
        if (!x) continue;
        for (int j = 0; j < n; ++j) acc[j] += x * b.at(l, j);
      }
      if ((q & (q - 1)) == 0)
        for (int j = 0; j < n; ++j) m.set(i, j, static_cast<Elt>(acc[j] & (q - 1)));
      else
        for (int j = 0; j < n; ++j) m.set(i, j, static_cast<Elt>(acc[j] % q));
    }
    return m;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Elt acc = k.zero();
      for (int l = 0; l < n; ++l) acc = k.add(acc, k.mul(a.at(i, l), b.at(l, j)));
      m.set(i, j, acc);
    }
  return m;
}

Mat mat_scale(const CommRing& k, Elt c, const Mat& a) {
  Mat m(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.set(i, j, k.mul(c, a.at(i, j)));
  return m;
}

Mat mat_transpose(const Mat& a) {
  Mat m(a.n);
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j) m.set(i, j, a.at(j, i));
  return m;
}

bool mat_is_zero(const Mat& a) {
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      if (a.at(i, j)) return false;
  return true;
}

namespace {

Elt det_rec(const CommRing& k, const Mat& a, std::vector<int>& cols, int row) {
  const int n = a.n;
  if (row == n) return k.one();
  Elt acc = k.zero();
  int sign = 0;
  for (int idx = 0; idx < static_cast<int>(cols.size()); ++idx) {
    int c = cols[idx];
    Elt entry = a.at(row, c);
    if (entry != k.zero()) {
      cols.erase(cols.begin() + idx);
      Elt minor = det_rec(k, a, cols, row + 1);
      cols.insert(cols.begin() + idx, c);
      Elt term = k.mul(entry, minor);
      acc = (sign % 2) ? k.sub(acc, term) : k.add(acc, term);
    }
    ++sign;
  }
  return acc;
}

}  // namespace

Elt mat_det(const CommRing& k, const Mat& a) {
  std::vector<int> cols(a.n);
  std::iota(cols.begin(), cols.end(), 0);
  return det_rec(k, a, cols, 0);
}

std::optional<Mat> mat_inverse(const CommRing& k, const Mat& a) {
  const int n = a.n;
  Mat m = a, inv = mat_id(k, n);
  bool ok = true;
  for (int c = 0; c < n && ok; ++c) {
    int piv = -1;
    for (int r = c; r < n; ++r)
      if (k.is_unit(m.at(r, c))) {
        piv = r;
        break;
      }
    if (piv < 0) {
      ok = false;
      break;
    }
    if (piv != c)
      for (int j = 0; j < n; ++j) {
        Elt t = m.at(c, j);
        m.set(c, j, m.at(piv, j));
        m.set(piv, j, t);
        t = inv.at(c, j);
        inv.set(c, j, inv.at(piv, j));
        inv.set(piv, j, t);
      }
    Elt s = *k.inverse(m.at(c, c));
    for (int j = 0; j < n; ++j) {
      m.set(c, j, k.mul(s, m.at(c, j)));
      inv.set(c, j, k.mul(s, inv.at(c, j)));
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || m.at(r, c) == k.zero()) continue;
      Elt f = m.at(r, c);
      for (int j = 0; j < n; ++j) {
        m.set(r, j, k.sub(m.at(r, j), k.mul(f, m.at(c, j))));
        inv.set(r, j, k.sub(inv.at(r, j), k.mul(f, inv.at(c, j))));
      }
    }
  }
  if (ok) return inv;
  // Non-local base rings: adjugate over the determinant.
  Elt d = mat_det(k, a);
  auto dinv = k.inverse(d);
  if (!dinv) return std::nullopt;
  Mat adj(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Mat minor(n);
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          Elt v = (r == j) ? (c == i ? k.one() : k.zero()) : a.at(r, c);
          minor.set(r, c, v);
        }
      adj.set(i, j, k.mul(*dinv, mat_det(k, minor)));
    }
  return adj;
}

std::string mat_str(const CommRing& k, const Mat& a) {
  std::string s = "[";
  for (int i = 0; i < a.n; ++i) {
    if (i) s += ";";
    for (int j = 0; j < a.n; ++j) s += (j ? " " : "") + k.str(a.at(i, j));
  }
  return s + "]";
}

Elt bilinear(const CommRing& k, const Mat& a, const std::vector<Elt>& v,
             const std::vector<Elt>& w) {
  Elt acc = k.zero();
  for (int i = 0; i < a.n; ++i)
    for (int j = 0; j < a.n; ++j)
      acc = k.add(acc, k.mul(v[i], k.mul(a.at(i, j), w[j])));
  return acc;
}

FieldSystem::FieldSystem(const CommRing& k, std::vector<std::vector<Elt>> rows,
                         std::size_t ncols)
    : k_(&k), nrows_(rows.size()), ncols_(ncols), rref_(std::move(rows)) {
  if (!k.is_field()) throw InvalidInput("linear systems need a field");
  trans_.assign(nrows_, std::vector<Elt>(nrows_, k.zero()));
  for (std::size_t i = 0; i < nrows_; ++i) trans_[i][i] = k.one();
  std::size_t r = 0;
  for (std::size_t c = 0; c < ncols_ && r < nrows_; ++c) {
    std::size_t piv = r;
    while (piv < nrows_ && rref_[piv][c] == k.zero()) ++piv;
    if (piv == nrows_) continue;
    std::swap(rref_[piv], rref_[r]);
    std::swap(trans_[piv], trans_[r]);
    Elt s = *k.inverse(rref_[r][c]);
    for (auto& v : rref_[r]) v = k.mul(s, v);
    for (auto& v : trans_[r]) v = k.mul(s, v);
    for (std::size_t o = 0; o < nrows_; ++o) {
      if (o == r || rref_[o][c] == k.zero()) continue;
      Elt f = rref_[o][c];
      for (std::size_t j = 0; j < ncols_; ++j)
        rref_[o][j] = k.sub(rref_[o][j], k.mul(f, rref_[r][j]));
      for (std::size_t j = 0; j < nrows_; ++j)
        trans_[o][j] = k.sub(trans_[o][j], k.mul(f, trans_[r][j]));
    }
    pivots_.push_back(c);
    ++r;
  }
}

std::optional<std::vector<Elt>> FieldSystem::solve(
    const std::vector<Elt>& b) const {
  const CommRing& k = *k_;
  std::vector<Elt> tb(nrows_, k.zero());
  for (std::size_t i = 0; i < nrows_; ++i)
    for (std::size_t j = 0; j < nrows_; ++j)
      if (trans_[i][j] != k.zero() && b[j] != k.zero())
        tb[i] = k.add(tb[i], k.mul(trans_[i][j], b[j]));
  for (std::size_t i = pivots_.size(); i < nrows_; ++i)
    if (tb[i] != k.zero()) return std::nullopt;
  std::vector<Elt> x(ncols_, k.zero());
  for (std::size_t i = 0; i < pivots_.size(); ++i) x[pivots_[i]] = tb[i];
  return x;
}

std::vector<std::vector<Elt>> FieldSystem::nullspace() const {
  const CommRing& k = *k_;
  std::vector<bool> is_piv(ncols_, false);
  for (auto c : pivots_) is_piv[c] = true;
  std::vector<std::vector<Elt>> out;
  for (std::size_t f = 0; f < ncols_; ++f) {
    if (is_piv[f]) continue;
    std::vector<Elt> x(ncols_, k.zero());
    x[f] = k.one();
    for (std::size_t i = 0; i < pivots_.size(); ++i) x[pivots_[i]] = k.neg(rref_[i][f]);
    out.push_back(std::move(x));
  }
  return out;
}

}  // namespace oddform
