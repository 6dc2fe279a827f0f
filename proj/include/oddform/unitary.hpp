#pragma once

// Unitary groups: the group law and action for any odd form algebra, the
// matrix picture for the classical families, finite subgroup closures, and
// Weyl-group bookkeeping.

#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

#include "oddform/matrix_ofa.hpp"
#include "oddform/oddform.hpp"

namespace oddform {

/// g = (beta, gamma) with alpha(g) = beta + 1 in R x| K.
template <OddFormStructure A>
struct UnitaryElem {
  typename A::R beta;
  typename A::D gamma;
  bool operator==(const UnitaryElem& o) const { return beta == o.beta && gamma == o.gamma; }
  bool operator!=(const UnitaryElem& o) const { return !(*this == o); }
};

template <OddFormStructure A>
UnitaryElem<A> u_identity(const A& a) {
  return {a.r_zero(), a.d_zero()};
}

template <OddFormStructure A>
UnitaryElem<A> u_mul(const A& a, const UnitaryElem<A>& g, const UnitaryElem<A>& h) {
  auto b = a.r_add(a.r_add(a.r_mul(g.beta, h.beta), g.beta), h.beta);
  auto gam = a.d_add(a.d_add(a.d_act(g.gamma, h.beta), a.phi(a.r_mul(a.rho(g.gamma), h.beta))),
                     a.d_add(g.gamma, h.gamma));
  return {b, gam};
}

template <OddFormStructure A>
UnitaryElem<A> u_inv(const A& a, const UnitaryElem<A>& g) {
  auto bb = a.r_bar(g.beta);
  auto t = a.d_add(a.d_add(a.d_act(g.gamma, bb), a.phi(a.r_mul(a.rho(g.gamma), bb))), g.gamma);
  return {bb, a.d_neg(t)};
}

/// Conjugation g x g^{-1} inside the group.
template <OddFormStructure A>
UnitaryElem<A> u_conj(const A& a, const UnitaryElem<A>& g, const UnitaryElem<A>& x) {
  return u_mul(a, u_mul(a, g, x), u_inv(a, g));
}

/// [g, h] = g h g^{-1} h^{-1}.
template <OddFormStructure A>
UnitaryElem<A> u_comm(const A& a, const UnitaryElem<A>& g, const UnitaryElem<A>& h) {
  return u_mul(a, u_mul(a, g, h), u_mul(a, u_inv(a, g), u_inv(a, h)));
}

/// alpha(g) x alpha(g)^bar.
template <OddFormStructure A>
typename A::R u_act_r(const A& a, const UnitaryElem<A>& g, const typename A::R& x) {
  auto bb = a.r_bar(g.beta);
  auto bx = a.r_mul(g.beta, x);
  return a.r_add(a.r_add(x, bx), a.r_add(a.r_mul(x, bb), a.r_mul(bx, bb)));
}

/// (gamma(g).pi(u) + u).alpha(g)^bar.
template <OddFormStructure A>
typename A::D u_act_d(const A& a, const UnitaryElem<A>& g, const typename A::D& u) {
  auto w = a.d_add(a.d_act(g.gamma, a.pi(u)), u);
  auto bb = a.r_bar(g.beta);
  return a.d_add(a.d_add(a.d_act(w, bb), a.phi(a.r_mul(a.rho(w), bb))), w);
}

/// pi(gamma) = beta, rho(gamma) = conj(beta) and alpha^bar = alpha^{-1}.
template <OddFormStructure A>
bool is_unitary(const A& a, const UnitaryElem<A>& g) {
  if (a.pi(g.gamma) != g.beta) return false;
  auto bb = a.r_bar(g.beta);
  if (a.rho(g.gamma) != bb) return false;
  auto z = a.r_zero();
  if (a.r_add(a.r_add(g.beta, bb), a.r_mul(g.beta, bb)) != z) return false;
  if (a.r_add(a.r_add(g.beta, bb), a.r_mul(bb, g.beta)) != z) return false;
  if constexpr (requires { a.in_delta(g.gamma); }) {
    if (!a.in_delta(g.gamma)) return false;
  }
  return true;
}

/// Every element of U(R, Delta) by brute force over R x Delta.
template <OddFormStructure A>
std::vector<UnitaryElem<A>> enumerate_unitary_brute(const A& a) {
  std::vector<UnitaryElem<A>> out;
  auto rs = a.r_carrier();
  auto ds = a.d_carrier();
  if (!rs.enumerable || !ds.enumerable) throw BoundExceeded("carriers are not enumerable");
  for (const auto& u : *ds.all) {
    UnitaryElem<A> g{a.pi(u), u};
    if (is_unitary(a, g)) out.push_back(g);
  }
  return out;
}

using MUnit = UnitaryElem<MatrixOFA>;

/// The matrix alpha_1 = 1 + beta_1 of a unitary element.
Mat unit_matrix(const MatrixOFA& a, const MUnit& g);
/// The unitary element with alpha_1 = m; throws InvalidInput if m is not in U.
MUnit unit_from_matrix(const MatrixOFA& a, const Mat& m);
bool in_unitary(const MatrixOFA& a, const Mat& m);

/// The action of U on (R, Delta) against the group law, phi, pi, rho and
/// membership in Delta, over the given elements and sampled R and Delta.
Report check_group_action(const MatrixOFA& a, const std::vector<MUnit>& elems,
                          const CheckConfig& cfg = {});

/// GF(2) matrix of size <= 8 packed row by row, one byte per row.
std::uint64_t pack_gf2(const Mat& m);
Mat unpack_gf2(std::uint64_t code, int n);

/// Open-addressing set of 64-bit keys (the key ~0 is reserved).
class U64Set {
 public:
  bool insert(std::uint64_t key);
  bool contains(std::uint64_t key) const;
  std::size_t size() const { return count_; }

 private:
  void grow();
  std::vector<std::uint64_t> slots_;
  std::size_t count_ = 0;
};

/// Right multiplication by a fixed GF(2) matrix through per-row lookup.
struct Gf2Right {
  std::array<std::uint8_t, 256> row{};
  int n = 0;
  explicit Gf2Right(std::uint64_t g = 0, int size = 0);
  std::uint64_t apply(std::uint64_t x) const {
    std::uint64_t out = 0;
    for (int i = 0; i < n; ++i)
      out |= std::uint64_t(row[(x >> (8 * i)) & 0xFF]) << (8 * i);
    return out;
  }
};
std::uint64_t gf2_mul(std::uint64_t x, std::uint64_t y, int n);

/// A finite matrix group stored as its element set, built by breadth-first
/// closure with a deterministic queue order.
class MatGroup {
 public:
  static constexpr std::size_t kDefaultBound = 1u << 22;
  static MatGroup closure(RingPtr k, int n, std::vector<Mat> gens,
                          std::size_t bound = kDefaultBound);

  std::size_t size() const { return elems_.size(); }
  bool contains(const Mat& m) const;
  /// Elements in discovery order (identity first).
  const std::vector<Mat>& elements() const { return elems_; }
  const std::vector<Mat>& generators() const { return gens_; }
  int dim() const { return n_; }
  bool packed() const { return packed_; }

 private:
  RingPtr k_;
  int n_ = 0;
  bool packed_ = false;
  std::vector<Mat> gens_;
  std::vector<Mat> elems_;
  std::unordered_set<Mat, MatHash> set_;
  U64Set codes_;
};

/// Signed permutation of {1..n}: i -> sign[i] * perm[i] (1-based entries).
struct WeylElem {
  std::vector<int> perm;
  std::vector<int> sign;

  static WeylElem identity(int n);
  static WeylElem transposition(int n, int i, int j);
  static WeylElem sign_change(int n, int i);
  int rank() const { return static_cast<int>(perm.size()); }
  /// Image of a nonzero index in {-n..-1, 1..n}.
  int act(int i) const;
  /// (this o w)(i) = this(w(i)).
  WeylElem compose(const WeylElem& w) const;
  bool operator==(const WeylElem& o) const { return perm == o.perm && sign == o.sign; }
};

/// All 2^n n! signed permutations.
std::vector<WeylElem> weyl_group(int n);

enum class RootLength { Long, Short, Ultrashort };

/// A root of BC_n as an integer vector.
struct RootBC {
  std::vector<int> v;
  bool operator==(const RootBC& o) const { return v == o.v; }
  bool operator<(const RootBC& o) const { return v < o.v; }
};

/// Raises InvalidInput if the vector is not a root of BC_n.
RootLength root_length(const RootBC& r);
std::vector<RootBC> roots_bc(int n);
RootBC weyl_act(const WeylElem& w, const RootBC& r);
/// Root e_j - e_i of the short generator X_ij (with e_{-k} = -e_k).
RootBC root_of_pair(int n, int i, int j);
/// Root e_i of the ultrashort generator X_i.
RootBC root_of_index(int n, int i);
std::string root_str(const RootBC& r);

}  // namespace oddform
