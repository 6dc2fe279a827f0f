#pragma once

// Hyperbolic pairs and orthogonal hyperbolic families in matrix odd form
// algebras: Pierce components, Morita witnesses, transvections, dilations,
// parabolic subgroups and the diagonal group.

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "oddform/matrix_ofa.hpp"
#include "oddform/unitary.hpp"

namespace oddform {

struct HypPair {
  RElem e_minus, e_plus;
  DElem q_minus, q_plus;
};

/// -eta: both components swapped.
HypPair neg_pair(const HypPair& p);
/// Violated pair axioms (empty when p is a hyperbolic pair).
std::vector<std::string> check_pair(const MatrixOFA& a, const HypPair& p);
/// Sum of two orthogonal pairs; throws InvalidInput when not orthogonal.
HypPair direct_sum(const MatrixOFA& a, const HypPair& p, const HypPair& q);

/// sum_p x_p y_p = e_i with x_p in R_{i,l_p}, y_p in R_{l_p,i}.
struct MoritaWitness {
  int i = 0, j = 0;
  struct Term {
    int l;
    RElem x, y;
  };
  std::vector<Term> terms;
};

class HypFamily {
 public:
  HypFamily() = default;
  HypFamily(std::shared_ptr<const MatrixOFA> a, std::vector<HypPair> pairs);

  const MatrixOFA& ofa() const { return *a_; }
  std::shared_ptr<const MatrixOFA> ofa_ptr() const { return a_; }
  int rank() const { return static_cast<int>(pairs_.size()); }
  /// eta_i for i in {-n..-1, 1..n}, with eta_{-i} = -eta_i.
  HypPair eta(int i) const;
  /// e_i for i in -n..n; e_0 = 1 - sum of the others.
  const RElem& e(int i) const { return e_[i + rank()]; }
  const DElem& q(int i) const { return q_[i + rank()]; }
  RElem e_abs(int i) const;
  /// e_{|1|} + ... + e_{|n|}.
  const RElem& e_sum() const { return esum_; }

  /// Matrix units e_ij with e_ij e_jk = e_ik for indices of equal sign.
  void set_free_units(std::vector<std::vector<RElem>> units);
  bool is_free() const { return !units_.empty(); }
  const RElem& unit(int i, int j) const;
  /// All e_i (i != 0) pairwise Morita equivalent.
  bool is_strong() const;

  RElem comp(int i, int j, const RElem& x) const;
  bool in_comp(int i, int j, const RElem& x) const { return comp(i, j, x) == x; }
  /// All of R_ij (bounded).
  std::vector<RElem> component_all(int i, int j, std::size_t bound = 1u << 16) const;
  /// R_ij, or a deterministic sample of `cap` elements (0 first) when larger.
  std::vector<RElem> component(int i, int j, std::size_t cap = 64) const;
  /// Delta_i^0 = {u in Delta.e_i : e_{|1|..|n|} pi(u) = 0}.
  std::vector<DElem> delta0_all(int i, std::size_t bound = 1u << 16) const;
  std::vector<DElem> delta0(int i, std::size_t cap = 64) const;
  bool in_delta0(int i, const DElem& u) const;
  /// Units of the corner ring R_ii.
  std::vector<RElem> corner_units(int i) const;

  /// Pierce components e_i x e_j, i, j in -n..n; their sum is x.
  std::map<std::pair<int, int>, RElem> pierce(const RElem& x) const;
  /// u = (+)_{i=-n..n} u.e_i (+) phi(c); returns the u.e_i and c.
  std::pair<std::vector<DElem>, RElem> pierce(const DElem& u) const;
  /// v in Delta.e_i: v = (+)_{j != 0} q_j.a_j (+) v0 with v0 in Delta_i^0.
  std::pair<std::vector<RElem>, DElem> split_delta(int i, const DElem& v) const;

  /// Witness for e_i via +-j (or only j when `both_signs` is false); nullopt
  /// if none exists within `max_terms` summands.
  std::optional<MoritaWitness> morita_witness(int i, int j, bool both_signs = true,
                                              bool prefer_free = true,
                                              int max_terms = 8) const;

  /// T_ij(a) = T^{eta_j}(q_i.a) and T_i(u) = T^{eta_i}(u).
  MUnit t_short(int i, int j, const RElem& a) const;
  MUnit t_ultra(int i, const DElem& u) const;
  /// D_i(a) = D^{eta_i}(a).
  MUnit dil(int i, const RElem& a) const;
  /// U_{|e_1..e_n|'}: the D_0 part of the diagonal group.
  bool in_d0(const MUnit& g) const;
  std::vector<MUnit> d0_elements(std::size_t bound = 1u << 16) const;

 private:
  std::shared_ptr<const MatrixOFA> a_;
  std::vector<HypPair> pairs_;
  std::vector<RElem> e_;
  std::vector<DElem> q_;
  RElem esum_;
  std::vector<std::vector<RElem>> units_;
};

/// T^eta(u); throws InvalidInput unless u.e_eta = u and e_{|eta|} pi(u) = 0.
MUnit transvection(const MatrixOFA& a, const HypPair& eta, const DElem& u);
/// D^eta(x) for a unit x of R_{eta,eta}; throws InvalidInput otherwise.
MUnit dilation(const MatrixOFA& a, const HypPair& eta, const RElem& x);
/// T^eta(*): the parameter of a transvection, read off beta.
DElem transvection_param(const MatrixOFA& a, const HypPair& eta, const MUnit& t);

bool in_parabolic(const MatrixOFA& a, const HypPair& eta, const MUnit& g);
/// U_{|eta|'}.
bool in_levi_complement(const MatrixOFA& a, const HypPair& eta, const MUnit& g);

struct LeviParts {
  DElem u;    // unipotent part T^eta(u)
  RElem p1;   // D^eta(p1)
  MUnit p2;   // in U_{|eta|'}
};
/// g = T^eta(u) D^eta(p1) p2 for g in P_eta; throws InvalidInput otherwise.
LeviParts levi_retraction(const MatrixOFA& a, const HypPair& eta, const MUnit& g);

/// u with T^eta(-u) g in P_{-eta}, when e_eta + e_eta beta e_eta is a unit of
/// R_{eta,eta}; nullopt otherwise.
std::optional<DElem> parabolic_extract(const MatrixOFA& a, const HypPair& eta, const MUnit& g);

/// c = sum_p a_p b_p with a_p = x_p in R_{i,l}, b_p = y_p c in R_{l,k}.
std::vector<std::pair<RElem, RElem>> section_ring(const MatrixOFA& a, const RElem& c,
                                                  const MoritaWitness& w);
struct FormSection {
  std::vector<std::pair<DElem, RElem>> terms;  // (u_p, a_p)
  RElem correction;
};
/// v = (+)_p u_p.a_p (+) phi(correction).
FormSection section_form(const MatrixOFA& a, const DElem& v, const MoritaWitness& w);
DElem reassemble_form(const MatrixOFA& a, const FormSection& s);

/// A built-in classical family with its standard hyperbolic family.
struct NamedInstance {
  NamedFamily spec;
  std::shared_ptr<const MatrixOFA> ofa;
  HypFamily fam;
  std::string label() const;
};
NamedInstance build_named(FamilyKind kind, int rank, RingPtr k);

/// Generators of the full unitary group of a named instance: elementary
/// transvections, dilations by scalars, a swap of e_1 and e_{-1}, and the
/// reflection in e_0 for odd orthogonal forms.
std::vector<Mat> full_group_generators(const NamedInstance& in);
/// Images of all T_ij(a), T_i(u) over the sampled components.
std::vector<Mat> elementary_generators(const HypFamily& f);

}  // namespace oddform
