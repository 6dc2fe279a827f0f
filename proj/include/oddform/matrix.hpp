#pragma once

// Small dense square matrices over a finite commutative ring, and linear
// algebra over finite fields.

#include <array>
#include <cstdint>
#include <functional>
#include <unordered_set>
#include <optional>
#include <string>
#include <vector>

#include "oddform/ring.hpp"

namespace oddform {

/// Square matrix of size n <= 8 with entries in a ring of size <= 256.
struct Mat {
  static constexpr int kMax = 8;
  std::uint8_t n = 0;
  std::array<std::uint8_t, kMax * kMax> e{};

  Mat() = default;
  explicit Mat(int size) : n(static_cast<std::uint8_t>(size)) {}

  Elt at(int i, int j) const { return e[i * kMax + j]; }
  void set(int i, int j, Elt v) { e[i * kMax + j] = static_cast<std::uint8_t>(v); }
  bool operator==(const Mat& o) const { return n == o.n && e == o.e; }
  bool operator!=(const Mat& o) const { return !(*this == o); }
  std::size_t hash() const;
};

Mat mat_zero(int n);
Mat mat_id(const CommRing& k, int n);
/// Matrix unit E_ij scaled by c.
Mat mat_unit(const CommRing& k, int n, int i, int j, Elt c);
Mat mat_add(const CommRing& k, const Mat& a, const Mat& b);
Mat mat_sub(const CommRing& k, const Mat& a, const Mat& b);
Mat mat_neg(const CommRing& k, const Mat& a);
Mat mat_mul(const CommRing& k, const Mat& a, const Mat& b);
Mat mat_scale(const CommRing& k, Elt c, const Mat& a);
Mat mat_transpose(const Mat& a);
bool mat_is_zero(const Mat& a);
/// Inverse by Gauss-Jordan with unit pivots, falling back to the adjugate.
std::optional<Mat> mat_inverse(const CommRing& k, const Mat& a);
Elt mat_det(const CommRing& k, const Mat& a);
std::string mat_str(const CommRing& k, const Mat& a);

/// v^T A w for vectors given as entry lists.
Elt bilinear(const CommRing& k, const Mat& a, const std::vector<Elt>& v,
             const std::vector<Elt>& w);

/// Dense linear system over a finite field.
class FieldSystem {
 public:
  FieldSystem(const CommRing& k, std::vector<std::vector<Elt>> rows,
              std::size_t ncols);
  std::size_t rank() const { return pivots_.size(); }
  std::size_t ncols() const { return ncols_; }
  /// Particular solution of A x = b with free variables set to zero.
  std::optional<std::vector<Elt>> solve(const std::vector<Elt>& b) const;
  /// Basis of {x : A x = 0}.
  std::vector<std::vector<Elt>> nullspace() const;

 private:
  const CommRing* k_;
  std::size_t nrows_, ncols_;
  std::vector<std::vector<Elt>> rref_;   // reduced rows
  std::vector<std::vector<Elt>> trans_;  // row operations: rref = trans * A
  std::vector<std::size_t> pivots_;      // pivot column of each reduced row
};

/// Every K-linear combination of the generators, built one generator at a
/// time with deduplication. `Hash` and `==` must be defined on T.
template <class T, class Hash, class Add, class Scale>
std::vector<T> span_of(const CommRing& k, const T& zero,
                       const std::vector<T>& gens, Add add, Scale scale,
                       std::size_t bound) {
  std::vector<T> out{zero};
  std::unordered_set<T, Hash> seen{zero};
  for (const T& g : gens) {
    std::vector<T> mult;
    for (Elt c = 0; c < k.size(); ++c) mult.push_back(scale(static_cast<Elt>(c), g));
    const std::size_t cur = out.size();
    for (std::size_t i = 0; i < cur; ++i)
      for (const T& m : mult) {
        T s = add(out[i], m);
        if (seen.insert(s).second) {
          out.push_back(s);
          if (out.size() > bound) throw BoundExceeded("span exceeds bound");
        }
      }
  }
  return out;
}

struct MatHash {
  std::size_t operator()(const Mat& m) const { return m.hash(); }
};

}  // namespace oddform
