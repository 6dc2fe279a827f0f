#pragma once

// Finite commutative rings and finite associative algebras with involution,
// all given by explicit operation tables.

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace oddform {

/// Raised when an input violates a documented precondition.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a search or enumeration would exceed its configured bound.
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Element of a finite commutative ring, stored as an index into its tables.
using Elt = std::uint16_t;

class CommRing {
 public:
  CommRing() = default;
  CommRing(std::string name, std::size_t size, std::vector<Elt> add,
           std::vector<Elt> mul, Elt zero, Elt one);

  std::size_t size() const { return size_; }
  const std::string& name() const { return name_; }
  Elt zero() const { return zero_; }
  Elt one() const { return one_; }

  Elt add(Elt a, Elt b) const { return add_[a * size_ + b]; }
  Elt mul(Elt a, Elt b) const { return mul_[a * size_ + b]; }
  Elt neg(Elt a) const { return neg_[a]; }
  Elt sub(Elt a, Elt b) const { return add(a, neg(b)); }
  bool is_unit(Elt a) const { return inv_[a] != kNone; }
  std::optional<Elt> inverse(Elt a) const;
  /// Image of the integer n under Z -> K.
  Elt from_int(long long n) const;
  /// Modulus when the ring is Z/m with the natural labelling, else 0.
  unsigned modulus() const { return modulus_; }
  bool is_field() const;
  std::vector<Elt> units() const;
  std::string str(Elt a) const;

  bool operator==(const CommRing& o) const;

 private:
  friend CommRing build_zmod(unsigned);
  friend CommRing build_gf(unsigned, unsigned, std::size_t);
  static constexpr Elt kNone = 0xFFFF;
  std::string name_;
  std::size_t size_ = 0;
  std::vector<Elt> add_, mul_, neg_, inv_;
  Elt zero_ = 0, one_ = 0;
  unsigned modulus_ = 0;
};

using RingPtr = std::shared_ptr<const CommRing>;

CommRing build_zmod(unsigned n);
/// GF(p^e) with elements labelled by base-p digit vectors of polynomial
/// coefficients modulo the lexicographically first monic irreducible.
CommRing build_gf(unsigned p, unsigned e, std::size_t bound = 4096);
/// Parses "z:N" or "gf:P" or "gf:P:E".
CommRing parse_base(const std::string& spec);

/// Violations of the commutative ring axioms (empty when the tables are valid).
std::vector<std::string> check_ring_axioms(const CommRing& k);

/// Multiplicative closure of the given generators together with 1.
std::vector<Elt> multiplicative_closure(const CommRing& k,
                                        const std::vector<Elt>& gens);

/// Quotient K/I by an ideal given as a set of elements.
struct RingQuotient {
  CommRing ring;
  std::vector<Elt> map;  // K -> K/I
};
RingQuotient quotient_ring(const CommRing& k, const std::vector<Elt>& ideal);

/// For finite K the localization S^{-1}K is K modulo the S-torsion ideal.
struct Localization {
  CommRing ring;
  std::vector<Elt> map;      // canonical K -> S^{-1}K
  std::vector<Elt> kernel;   // {k : s k = 0 for some s in S}
  std::vector<Elt> subset;   // S itself
};
Localization localize_finite(const CommRing& k, const std::vector<Elt>& s);

/// Jacobson radical of a finite commutative ring (intersection of maximal
/// ideals, computed as the set of k with 1 + xk a unit for all x).
std::vector<Elt> ring_radical(const CommRing& k);

/// Finite associative K-algebra with involution, possibly without unit.
class FiniteAlgebra {
 public:
  using Idx = std::uint32_t;

  FiniteAlgebra() = default;
  FiniteAlgebra(RingPtr base, std::size_t size, std::vector<Idx> add,
                std::vector<Idx> mul, std::vector<Idx> bar,
                std::vector<Idx> scal, Idx zero, std::optional<Idx> one,
                std::vector<std::string> names = {});

  std::size_t size() const { return size_; }
  const CommRing& base() const { return *base_; }
  RingPtr base_ptr() const { return base_; }
  Idx zero() const { return zero_; }
  std::optional<Idx> one() const { return one_; }
  Idx add(Idx a, Idx b) const { return add_[a * size_ + b]; }
  Idx mul(Idx a, Idx b) const { return mul_[a * size_ + b]; }
  Idx neg(Idx a) const { return neg_[a]; }
  Idx bar(Idx a) const { return bar_[a]; }
  /// Scalar action k a.
  Idx scale(Elt k, Idx a) const { return scal_[k * size_ + a]; }
  std::string str(Idx a) const;

  /// Units of a unital algebra; empty if there is no unit.
  std::vector<Idx> units() const;
  std::optional<Idx> inverse(Idx a) const;

  /// K viewed as an algebra over itself with trivial involution.
  static FiniteAlgebra from_ring(RingPtr k);
  /// M_n(K) with transpose involution; requires |K|^(n*n) <= bound.
  static FiniteAlgebra matrix_algebra(RingPtr k, int n,
                                      std::size_t bound = 1u << 16);

 private:
  RingPtr base_;
  std::size_t size_ = 0;
  std::vector<Idx> add_, mul_, neg_, bar_, scal_;
  Idx zero_ = 0;
  std::optional<Idx> one_;
  std::vector<std::string> names_;
};

std::vector<std::string> check_algebra_axioms(const FiniteAlgebra& a);

/// The element b with a + b + ab = 0 = a + b + ba, if any.
std::optional<FiniteAlgebra::Idx> quasi_inverse(const FiniteAlgebra& a,
                                                FiniteAlgebra::Idx x);

/// J(A): elements x such that every element of the two-sided ideal
/// generated by x is quasi-invertible.
std::vector<FiniteAlgebra::Idx> jacobson_radical(const FiniteAlgebra& a);

}  // namespace oddform
