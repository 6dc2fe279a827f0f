#pragma once

// Stable rank and its unitary variant, reduction of unitary elements to a
// smaller hyperbolic rank, Gauss decomposition, and crossed module checks
// on the canonical map from the Steinberg group.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "oddform/hyperbolic.hpp"
#include "oddform/report.hpp"
#include "oddform/steinberg.hpp"

namespace oddform {

/// A finite unital ring given by tables, elements 0..size-1.
struct FinRing {
  std::string name;
  std::size_t size = 0;
  std::vector<Elt> add, mul;
  Elt zero = 0, one = 0;

  Elt plus(Elt a, Elt b) const { return add[a * size + b]; }
  Elt times(Elt a, Elt b) const { return mul[a * size + b]; }

  static FinRing from_comm(const CommRing& k);
  /// The corner ring R_ii with unit e_i; `elems` receives the labelling.
  static FinRing corner(const HypFamily& fam, int i, std::vector<RElem>* elems = nullptr);
};

/// b with sum b_i a_i = 1, the first one in lexicographic order.
std::optional<std::vector<Elt>> is_left_unimodular(const FinRing& A, const std::vector<Elt>& seq);

/// Elements a_k in R_{rows[k], col}; unimodular when sum x_k a_k = e_col for
/// some x_k in R_{col, rows[k]}.
struct UnimodSeq {
  std::vector<RElem> elems;
  std::vector<int> rows;
  int col = 1;
};
std::optional<std::vector<RElem>> is_left_unimodular(const HypFamily& fam, const UnimodSeq& seq);

struct ShorteningCert {
  std::vector<Elt> seq;      // unimodular of length k + 1
  std::vector<Elt> c;        // a_i + c_i a_{k+1} is unimodular
  std::vector<Elt> witness;  // its coefficients
};

/// sr(A) <= k: every unimodular sequence of length k + 1 can be shortened.
struct StableRankResult {
  bool supported = true;
  bool holds = false;
  std::uint64_t unimodular = 0;
  std::vector<ShorteningCert> certificates;
  std::optional<std::vector<Elt>> counterexample;
};
StableRankResult stable_rank_leq(const FinRing& A, int k, std::uint64_t bound = 1u << 22);

/// Lambda = {rho(u) | u in Delta^0_{-1}, pi(u) = 0} inside R_{1,-1}.
struct FormParamLambda {
  std::vector<RElem> carrier;
  std::size_t component_size = 0;  // |R_{1,-1}|
  bool contains_min = false;       // a - conj(a) in Lambda for a in R_{1,-1}
  bool within_max = false;         // a + conj(a) = 0 on Lambda
  bool conj_closed = false;        // conj(a) Lambda a in Lambda for a in R_11
  bool additive = false;
  bool ok() const { return contains_min && within_max && conj_closed && additive; }
  bool contains(const RElem& x) const;
};
FormParamLambda lambda_param(const HypFamily& fam);

/// Certificate entry: the sequence (a_{-k}..a_{-1}, b_1..b_k), the matrix c
/// (row i = 1..k, column j = -1..-k) and the witness for b_i + sum_j c_ij a_j.
struct LambdaCert {
  std::vector<RElem> a, b;
  std::vector<std::vector<RElem>> c;
  std::vector<RElem> witness;
};
struct LambdaSrResult {
  bool supported = true;
  bool holds = false;
  StableRankResult corner;  // sr(R_11) <= k
  FormParamLambda lambda;
  std::uint64_t unimodular = 0;
  std::vector<LambdaCert> certificates;
  std::optional<LambdaCert> counterexample;
};
/// Lambda sr(eta_1) <= k; sequences have length k + 1 on each side.
LambdaSrResult lambda_sr_leq(const HypFamily& fam, int k, std::uint64_t bound = 1u << 20);

/// Product of the st images, left to right.
MUnit eval_word(const HypFamily& fam, const std::vector<StGen>& w);
std::vector<StGen> inverse_word(const HypFamily& fam, const std::vector<StGen>& w);
/// Letters of T^{eta_l}(u) for u in Delta.e_l with e_{|l|} pi(u) = 0:
/// the short parts X_{jl}(a_j) in index order, then X_l(v0).
std::vector<StGen> transvection_letters(const HypFamily& fam, int l, const DElem& u);

/// g = st(h) g' with g' in U_{|eta_n|'}.
struct ReduceResult {
  std::vector<StGen> h;
  MUnit g_prime;
  bool unimod_step = false;  // the e_0 row had to be mixed in
  bool lambda_step = false;  // the positive entries had to be made unimodular
  bool corner_step = false;  // the corner was not yet e_n
};

/// Surjective stability for a free family with Lambda sr(eta_1) <= n - 1.
class Reducer {
 public:
  /// Throws InvalidInput unless the family is free, n >= 2 and the
  /// hypothesis holds.
  explicit Reducer(const HypFamily& fam);
  ReduceResult reduce(const MUnit& g) const;
  bool verify(const MUnit& g, const ReduceResult& r) const;
  const LambdaSrResult& hypothesis() const { return hyp_; }

 private:
  struct Ctx;
  const HypFamily* fam_;
  LambdaSrResult hyp_;
  std::shared_ptr<const Ctx> ctx_;
};
ReduceResult reduce_to_smaller(const MUnit& g, const HypFamily& fam);

/// g = st(u_plus1) st(u_minus) st(u_plus2) d relative to Phi/e_1: positive
/// roots are those whose last nonzero coordinate among 2..n is positive.
struct GaussFactors {
  std::vector<StGen> u_plus1, u_minus, u_plus2;
  MUnit d;
};

struct GaussStats {
  std::map<std::string, std::uint64_t> cases;  // corner step guards taken
  std::uint64_t fallbacks = 0;                 // guard whose search came up empty
  std::uint64_t pieces = 0;                    // primitive pieces processed
};

class GaussDecomposer {
 public:
  explicit GaussDecomposer(const HypFamily& fam);
  GaussFactors decompose(const MUnit& g) const;
  /// Product matches and every factor lies in its subgroup.
  bool verify(const MUnit& g, const GaussFactors& f) const;
  const GaussStats& stats() const { return stats_; }
  /// Primitive idempotents of R_ii modulo the radical, lifted to R.
  const std::vector<RElem>& pieces(int i) const;

 private:
  struct Ctx;
  const HypFamily* fam_;
  std::shared_ptr<const Ctx> ctx_;
  mutable GaussStats stats_;
};
GaussFactors gauss_decompose(const MUnit& g, const HypFamily& fam);

/// Root-level membership of a word in U+ (sign > 0) or U- relative to Phi/e_1.
bool word_in_u(const HypFamily& fam, const std::vector<StGen>& w, int sign);
/// Element-level membership in st(U+-) relative to Phi/e_1.
bool in_u_quotient(const HypFamily& fam, const MUnit& g, int sign);
/// diag(Phi/e_1): g normalizes every eta_i, i >= 2.
bool in_diag_quotient(const HypFamily& fam, const MUnit& g);

/// Closure orders behind the last step of the Gauss decomposition.
struct IntersectionCheck {
  std::uint64_t u_plus = 0, u_minus = 0, diag = 0, minus_diag = 0;
  std::uint64_t minus_cap_diag = 0;       // |st(U-) cap diag|
  std::uint64_t plus_cap_minus_diag = 0;  // |st(U+) cap st(U-) diag|
  bool ok() const { return minus_cap_diag == 1 && plus_cap_minus_diag == 1; }
};
IntersectionCheck unipotent_intersections(const NamedInstance& in);

struct CrossedModuleReport {
  Report report;
  std::uint64_t group_order = 0, elementary_order = 0;
  std::uint64_t conjugates_checked = 0;
  std::uint64_t relations = 0;
  std::uint64_t ad_checks = 0;
  bool rank_ok = true;  // n >= 3 or a strong family at n = 3
};
/// Normality of EU, relations under every conjugated canonical assignment,
/// and agreement of the diagonal action with conjugation. `limit` caps the
/// number of group elements g (0 means all).
CrossedModuleReport crossed_module_consequences(const NamedInstance& in, std::uint64_t limit = 0,
                                                std::size_t cap = 64);

}  // namespace oddform
