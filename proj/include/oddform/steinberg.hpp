#pragma once

// Steinberg presentations over an orthogonal hyperbolic family. The abstract
// group is never built; relations are checked through assignments of the
// generators into finite matrix groups.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "oddform/hyperbolic.hpp"
#include "oddform/report.hpp"
#include "oddform/unitary.hpp"

namespace oddform {

/// X_ij(a) (short) or X_i(u) (ultrashort; j is 0 and a is unused).
struct StGen {
  bool ultra = false;
  int i = 0, j = 0;
  RElem a;
  DElem u;
  bool operator==(const StGen& o) const {
    return ultra == o.ultra && i == o.i && j == o.j && a == o.a && u == o.u;
  }
};
struct StGenHash {
  std::size_t operator()(const StGen& g) const;
};

StGen x_short(int i, int j, RElem a, const MatrixOFA& A);
StGen x_ultra(int i, DElem u, const MatrixOFA& A);
std::string gen_str(const MatrixOFA& A, const StGen& g);
/// Root of the generator: e_j - e_i or e_i.
RootBC gen_root(int n, const StGen& g);

struct Letter {
  std::uint32_t gen = 0;
  int exp = 1;
};
using Word = std::vector<Letter>;

struct StRelation {
  std::string tag;
  Word lhs, rhs;
};

/// Interned generators plus relations between words in them.
class Presentation {
 public:
  std::uint32_t intern(const StGen& g);
  Letter letter(const StGen& g, int exp = 1) { return {intern(g), exp}; }
  void add(std::string tag, Word lhs, Word rhs);

  const std::vector<StGen>& generators() const { return gens_; }
  const std::vector<StRelation>& relations() const { return rels_; }
  /// Relation count per tag, in tag order.
  std::map<std::string, std::size_t> counts() const;
  std::string relation_str(const MatrixOFA& A, const StRelation& r) const;

 private:
  std::vector<StGen> gens_;
  std::unordered_map<StGen, std::uint32_t, StGenHash> index_;
  std::vector<StRelation> rels_;
};

/// Every instance of St0..St8 with elements from the (capped) components.
/// Throws InvalidInput for rank < 2.
Presentation instantiate_relations(const HypFamily& fam, std::size_t cap = 64);

/// Images of the generators in GL_dim(k).
struct Assignment {
  RingPtr k;
  int dim = 0;
  std::function<Mat(const StGen&)> image;
};

/// X_ij(a) -> T_ij(a), X_i(u) -> T_i(u), as matrices.
Assignment stmap_assignment(const HypFamily& fam);
Assignment trivial_assignment(RingPtr k, int dim);

/// Evaluates relations under generator images. Over F_2 with dim <= 8 the
/// packed path is used.
class RelationEvaluator {
 public:
  RelationEvaluator(const Presentation& p, RingPtr k, int dim);

  Report check(const std::vector<Mat>& images, const MatrixOFA* A = nullptr) const;
  /// Packed images (F_2 only); index of the first failing relation, if any.
  std::optional<std::size_t> first_failure(const std::vector<std::uint64_t>& img,
                                           const std::vector<std::uint64_t>& inv) const;
  bool packed() const { return packed_; }
  const Presentation& presentation() const { return *p_; }

 private:
  const Presentation* p_;
  RingPtr k_;
  int dim_;
  bool packed_;
  std::vector<std::vector<std::uint32_t>> lhs_, rhs_;  // letter codes 2*gen + (exp < 0)
};

/// Empty report iff every relation holds in the target.
Report check_assignment(const Assignment& asg, const Presentation& p, const MatrixOFA* A = nullptr);

/// D_i(a) for i != 0 (a a unit of R_ii) or D_0(g).
struct DiagGen {
  int i = 0;
  RElem a;
  MUnit g;
};
Mat diag_matrix(const HypFamily& fam, const DiagGen& d);
/// The generator d x d^{-1} prescribed by the diagonal action.
StGen diag_action(const HypFamily& fam, const DiagGen& d, const StGen& x);

/// Generators of the root subgroup of a root of BC_n; throws InvalidInput for
/// vectors outside the root system.
std::vector<StGen> root_subgroup(const HypFamily& fam, const RootBC& alpha);
/// Whether [X_alpha, X_beta] lies in the subgroup generated by the X_{i alpha +
/// j beta} (i, j > 0), checked on images.
bool commutator_contained(const HypFamily& fam, const RootBC& alpha, const RootBC& beta);

/// F_alpha for a short or ultrashort root alpha. The family is first moved by
/// a Weyl element w so that alpha becomes e_n - e_{n-1} or e_1; moved index k
/// is original index w(k).
struct Elimination {
  RootBC alpha;
  RootLength length = RootLength::Short;
  const HypFamily* full = nullptr;
  WeylElem w;
  HypFamily moved;
  /// Short case: eta_1..eta_{n-2}, eta_{n-1} + eta_n; ultrashort: eta_2..eta_n.
  HypFamily quotient;

  /// F_alpha(X) as generators of St(Phi) in original indices, product left to right.
  std::vector<StGen> image(const StGen& x) const;
  /// Class in Phi/alpha of a root of Phi, as a root of the quotient.
  RootBC project(const RootBC& r) const;
};
Elimination eliminate(const HypFamily& fam, const RootBC& alpha);

struct ElimCheck {
  Report relations;         // transported St(Phi/alpha) relations under stmap
  std::size_t generator_mismatches = 0;
  std::size_t root_mismatches = 0;
  std::size_t transported = 0;
  bool ok() const { return relations.ok() && generator_mismatches == 0 && root_mismatches == 0; }
};
ElimCheck check_elimination(const Elimination& e, std::size_t cap = 64);

struct UnipotentCheck {
  std::vector<StGen> gens;
  std::uint64_t closure_order = 0;
  std::uint64_t root_product = 0;    // product of root subgroup orders
  std::uint64_t normal_forms = 0;    // distinct ordered root products
  bool injective() const { return closure_order == root_product && normal_forms == root_product; }
};
/// U+ (sign > 0) or U- with its image closure and the normal form count.
UnipotentCheck u_plus_minus(const HypFamily& fam, int sign, std::uint64_t bound = 1u << 20);

/// Commutators [x_p, y_p] whose ordered product has the image of g.
struct CommutatorWord {
  std::vector<std::pair<StGen, StGen>> pairs;
};
/// Throws InvalidInput for rank < 3 or when no Morita witness is found.
CommutatorWord perfectness_witness(const HypFamily& fam, const StGen& g);
Mat commutator_word_image(const Assignment& asg, const CommutatorWord& w);

using GroupMap = std::function<Mat(const RElem&)>;
using RingPairMap = std::function<Mat(int l, const RElem& a, const RElem& b)>;
using FormPairMap = std::function<Mat(int l, const DElem& u, const RElem& a)>;

/// g(c) = prod_p f_{l_p}(x_p, y_p c) on R_ik from f_l on R_il x R_lk, l = +-j.
/// The defining identities of f are checked over capped components first;
/// throws InvalidInput naming the first one that fails.
GroupMap induced_hom_ring(const HypFamily& fam, RingPtr k, int dim, int i, int j, int kk,
                          const RingPairMap& f, const MoritaWitness& w, std::size_t cap = 6);
/// h(u) = prod_p f_{l_p}(u.x_p, y_p) g(correction) on Delta_i^0 from
/// f_l on Delta_l^0 x R_li and g on R_{-i,i}.
std::function<Mat(const DElem&)> induced_hom_form(const HypFamily& fam, RingPtr k, int dim, int i,
                                                  int j, const FormPairMap& f, const GroupMap& g,
                                                  const MoritaWitness& w, std::size_t cap = 5);

/// Pairs of non-collinear roots grouped by (lengths, inner product, type of
/// the rank 2 subsystem they span); each class with its number of W-orbits.
struct RootPairClass {
  std::string key;
  std::size_t pairs = 0;
  std::size_t orbits = 0;
};
std::vector<RootPairClass> weyl_pair_classes(int n);

/// Structured export with a content hash; bit-exact for fixed inputs.
std::string export_presentation(const Presentation& p, const HypFamily& fam,
                                const std::string& family);
/// Parses an export, verifies the hash and re-renders it; throws
/// InvalidInput on malformed input or a hash mismatch.
std::string reimport_presentation(const std::string& text);

}  // namespace oddform
