#pragma once

// Special unital odd form algebras built from free modules with a hermitian
// form: the linear, symplectic and orthogonal families, and the general
// quadratic-module recipe.
//
// An element of R is a pair (a, b) of N x N matrices with product
// (a, b)(a', b') = (aa', b'b) and involution (a, b) -> (b, a). For a form J
// the pairs are constrained by a^T J = J b; the linear family has no
// constraint. Delta consists of pairs (pi, rho) in R x R.

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oddform/matrix.hpp"
#include "oddform/report.hpp"
#include "oddform/ring.hpp"

namespace oddform {

struct RElem {
  Mat a, b;
  bool operator==(const RElem& o) const { return a == o.a && b == o.b; }
  bool operator!=(const RElem& o) const { return !(*this == o); }
  std::size_t hash() const { return a.hash() * 31 + b.hash(); }
};

struct DElem {
  RElem p, r;  // pi and rho
  bool operator==(const DElem& o) const { return p == o.p && r == o.r; }
  bool operator!=(const DElem& o) const { return !(*this == o); }
  std::size_t hash() const { return p.hash() * 131 + r.hash(); }
};

struct RElemHash {
  std::size_t operator()(const RElem& x) const { return x.hash(); }
};
struct DElemHash {
  std::size_t operator()(const DElem& x) const { return x.hash(); }
};

enum class FamilyKind { Linear, Symplectic, OrthEven, OrthOdd };
/// Max: rho + conj(rho) + conj(pi) pi = 0 only. Min: in addition the
/// quadratic form vanishes on the pair. Explicit: a supplied predicate.
enum class FormParam { Max, Min, Explicit };

std::string kind_name(FamilyKind k);
/// Parses "linear", "sp", "o-even", "o-odd".
FamilyKind parse_kind(const std::string& s);

/// Free K-module of rank N with form matrix B (B^T = lambda B) and, for the
/// Min parameter, a matrix F with F + lambda F^T = B giving q(x) = x^T F x.
struct QuadraticModule {
  RingPtr k;
  int rank = 0;
  int lambda = 1;
  Mat form;
  Mat quad;
  FormParam param = FormParam::Max;
  std::function<bool(const DElem&)> explicit_member;
};

class MatrixOFA {
 public:
  using R = RElem;
  using D = DElem;

  /// Odd form algebra of a quadratic module; throws InvalidInput when the
  /// form is not hermitian or the parameter bounds fail.
  static MatrixOFA from_module(const QuadraticModule& q);
  /// R = S x S^op for S = M_n(K), with Delta^max.
  static MatrixOFA linear(RingPtr k, int n);

  const CommRing& base() const { return *k_; }
  RingPtr base_ptr() const { return k_; }
  int size() const { return n_; }
  bool is_linear() const { return linear_; }
  int lambda() const { return lambda_; }
  const Mat& form() const { return j_; }
  const Mat& quad() const { return f_; }
  FormParam param() const { return param_; }

  R r_add(const R& x, const R& y) const;
  R r_neg(const R& x) const;
  R r_sub(const R& x, const R& y) const { return r_add(x, r_neg(y)); }
  R r_mul(const R& x, const R& y) const;
  R r_bar(const R& x) const { return {x.b, x.a}; }
  R r_zero() const { return {Mat(n_), Mat(n_)}; }
  R r_one() const;
  R r_kmul(Elt c, const R& x) const;
  bool r_is_zero(const R& x) const { return mat_is_zero(x.a) && mat_is_zero(x.b); }

  D d_add(const D& u, const D& v) const;
  D d_neg(const D& u) const;
  D d_sub(const D& u, const D& v) const { return d_add(u, d_neg(v)); }
  D d_zero() const { return {r_zero(), r_zero()}; }
  D phi(const R& x) const { return {r_zero(), r_sub(x, r_bar(x))}; }
  R pi(const D& u) const { return u.p; }
  R rho(const D& u) const { return u.r; }
  D d_act(const D& u, const R& x) const;
  D d_kact(const D& u, Elt c) const;

  bool is_unital() const { return true; }
  /// The augmentation is ker(pi).
  bool has_aug() const { return true; }
  bool in_aug(const D& u) const { return r_is_zero(u.p); }
  D aug_kmul(Elt c, const D& u) const { return {u.p, r_kmul(c, u.r)}; }

  bool in_r(const R& x) const;
  bool in_delta(const D& u) const;
  /// Canonical second component for a first component, if it lies in R.
  std::optional<Mat> adjoint(const Mat& a) const;
  /// (a, adjoint(a)); throws InvalidInput when a is not a first component.
  R lift(const Mat& a) const;
  /// Inverse of x in the corner ring eRe with unit e, if it exists.
  std::optional<R> corner_inverse(const R& x, const R& e) const;
  std::optional<R> r_inverse(const R& x) const { return corner_inverse(x, r_one()); }

  /// K-module generators of R.
  const std::vector<R>& r_basis() const { return r_basis_; }
  /// |R| and |Delta| (saturating at 2^62).
  std::uint64_t r_count() const;
  std::uint64_t d_count() const;
  R random_r(Rng& rng) const;
  /// Uniform element of Delta with the given pi.
  D random_d_over(const R& p, Rng& rng) const;
  /// Uniform over the pi values that lift to Delta, then over the fibre.
  D random_d(Rng& rng) const;
  std::vector<R> enumerate_r(std::size_t bound) const;
  /// All rho with (p, rho) in Delta.
  std::vector<D> enumerate_d_over(const R& p, std::size_t bound) const;
  std::vector<D> enumerate_d(std::size_t bound) const;

  std::string r_str(const R& x) const;
  std::string d_str(const D& u) const;
  Carrier<R> r_carrier() const;
  Carrier<D> d_carrier() const;
  Carrier<D> aug_carrier() const;
  bool exhaustive_ok(std::uint64_t limit) const;

 private:
  void setup();
  std::vector<Elt> rho_rhs(const R& p) const;
  R rho_from_vars(const std::vector<Elt>& v) const;

  RingPtr k_;
  int n_ = 0;
  bool linear_ = false;
  int lambda_ = 1;
  Mat j_, f_;
  std::optional<Mat> jinv_;
  FormParam param_ = FormParam::Max;
  std::function<bool(const DElem&)> explicit_member_;
  std::vector<R> r_basis_;
  std::shared_ptr<const FieldSystem> r_sys_;    // constraint on (a, b), fields only
  std::shared_ptr<const FieldSystem> rho_sys_;  // constraint on rho given pi
  std::vector<std::vector<Elt>> r_null_, rho_null_;
  std::vector<std::pair<int, int>> s_free_;  // free entries of S (non-field path)
  mutable std::shared_ptr<std::vector<R>> r_pool_;
  mutable std::shared_ptr<std::vector<D>> d_pool_, aug_pool_;
};

/// Position of basis index i in {-l..-1, (0), 1..l} within 0..N-1.
int basis_pos(int i, int l, bool odd);

/// A named classical family over a finite base ring.
struct NamedFamily {
  FamilyKind kind = FamilyKind::Symplectic;
  int rank = 1;
  RingPtr k;
};

/// Quadratic module underlying a non-linear named family.
QuadraticModule named_module(const NamedFamily& f);

/// True iff g preserves the form (and the quadratic form where relevant);
/// for the linear family, iff g is invertible.
bool classical_oracle(const NamedFamily& f, const Mat& g);

/// Order of the classical group of the family, computed from the standard
/// product formulas; requires a finite field base.
std::uint64_t classical_order(const NamedFamily& f);

}  // namespace oddform
