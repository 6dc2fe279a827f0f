#pragma once

// Homotopes of 2-step nilpotent modules and of augmented odd form algebras,
// the structure maps of their towers, the action of fractions on the tower,
// and localization of 2-step nilpotent modules.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "oddform/matrix_ofa.hpp"
#include "oddform/oddform.hpp"
#include "oddform/report.hpp"

namespace oddform {

/// Table form of a matrix odd form algebra, augmented by ker(pi).
TableOFA tabulate(const MatrixOFA& a, std::size_t bound = 1u << 12);
/// (Delta, D) of an augmented table algebra.
TableNilModule delta_module(const TableOFA& a);
/// M = M0 = K, m.k = k^2 m.
TableNilModule scalar_nilmodule(RingPtr k);

/// Normal form for (M x M0) / {(y, -s y) : y in M0}: a coset representative
/// of M/M0 together with an element of M0. Element index = coset * |M0| + pos.
struct LevelPairs {
  static constexpr std::uint32_t npos = 0xFFFFFFFFu;
  Elt level = 0;
  std::vector<std::uint32_t> coset;   // m -> coset number
  std::vector<std::uint32_t> reps;    // coset number -> representative (zero first)
  std::vector<std::uint32_t> m0;      // position -> element of M0
  std::vector<std::uint32_t> m0_pos;  // element -> position, npos outside M0
  std::vector<std::uint32_t> shift;   // m -> position of s(-rep + m)
  std::vector<std::uint32_t> add0;    // addition of positions

  std::size_t size() const { return reps.size() * m0.size(); }
  /// Class of (m, x) for x in M0.
  std::uint32_t index(std::uint32_t m, std::uint32_t x) const;
  std::uint32_t rep_m(std::uint32_t e) const { return reps[e / m0.size()]; }
  std::uint32_t rep_x(std::uint32_t e) const { return m0[e % m0.size()]; }
};

/// M^(s) with m^(s) = (m, 0) and iota(x^(s)) = (0, x).
struct HomotopeModule {
  TableNilModule base;
  LevelPairs pairs;
  TableNilModule mod;
  std::uint32_t of(std::uint32_t m) const;
  std::uint32_t iota(std::uint32_t x) const;
};
HomotopeModule homotope_module(const TableNilModule& m, Elt s);
/// The displayed identities of M^(s), exactness of M0^(s) -> M^(s) ->
/// (M/M0)^(s), and the module axioms.
Report check_homotope_module(const TableNilModule& m, const HomotopeModule& h,
                             const CheckConfig& cfg = {});

/// (R^(s), Delta^(s), D^(s)). R^(s) keeps the indices of R.
struct HomotopeOFA {
  std::shared_ptr<const TableOFA> base;
  LevelPairs pairs;
  TableOFA alg;
  Elt level() const { return pairs.level; }
  TableOFA::D of(TableOFA::D u) const;
  TableOFA::D iota(TableOFA::D v) const;
};
/// Requires an augmentation; throws InvalidInput otherwise.
HomotopeOFA homotope_ofa(std::shared_ptr<const TableOFA> a, Elt s);
/// The operation formulas of the homotope against the base algebra.
Report check_homotope_ofa(const HomotopeOFA& h, const CheckConfig& cfg = {});
/// (R, Delta) acting on (R^(s), Delta^(s)) through fractions with denominator 1.
TableAction base_action(const HomotopeOFA& h);

/// Level s * twist -> level s: m^(s t) -> (m.t)^(s), iota(x^(s t)) -> iota((t x)^(s)).
struct TowerMap {
  Elt target = 0, twist = 1;
  std::vector<std::uint32_t> r;  // empty for modules
  std::vector<std::uint32_t> d;
};
TowerMap tower_map(const HomotopeModule& src, const HomotopeModule& tgt, Elt twist);
TowerMap tower_map(const HomotopeOFA& src, const HomotopeOFA& tgt, Elt twist);
/// The map preserves every operation.
Report check_tower_map(const HomotopeModule& src, const HomotopeModule& tgt, const TowerMap& f);
Report check_tower_map(const HomotopeOFA& src, const HomotopeOFA& tgt, const TowerMap& f);

/// Elements of homotopes tagged with their level, and fractions b/s.
struct HR {
  Elt level;
  TableOFA::R x;
};
struct HD {
  Elt level;
  TableOFA::D x;
};
struct FracR {
  TableOFA::R num;
  Elt den;
};
struct FracD {
  TableOFA::D num;
  Elt den;
};

/// All homotopes of one algebra over the multiplicative closure S of the
/// given generators.
class HomotopeTower {
 public:
  HomotopeTower(std::shared_ptr<const TableOFA> base, const std::vector<Elt>& gens);
  const TableOFA& base() const { return *base_; }
  const std::vector<Elt>& subset() const { return subset_; }
  bool contains(Elt s) const;
  /// Throws InvalidInput for s outside S.
  const HomotopeOFA& level(Elt s) const;
  TowerMap map(Elt s, Elt twist) const;

  /// The action of fractions; every call checks that the input level is
  /// the one the target level s requires and throws InvalidInput otherwise.
  HR mul_right(const HR& a, const FracR& b, Elt s) const;  // a^(ss') b/s' = (ab)^(s)
  HR mul_left(const FracR& b, const HR& a, Elt s) const;   // b/s' a^(ss') = (ba)^(s)
  HD act(const HD& u, const FracR& b, Elt s) const;        // u^(ss'^2) . b/s'
  HD act(const FracD& w, const HR& a, Elt s) const;        // (w . 1/s') . a^(ss')

 private:
  std::shared_ptr<const TableOFA> base_;
  std::vector<Elt> subset_;
  std::map<Elt, HomotopeOFA> levels_;
};

/// Tower maps for every pair in S preserve the operations and compose.
Report check_tower(const HomotopeTower& t);
/// Well-definedness of the action of fractions with denominator s' at
/// target level s, its compatibility with the homotope operations and
/// tower maps, and composition of fractions. The two additivity identities
/// are sampled when |Delta|^2 |R| exceeds cfg.tuple_cap.
Report check_mixed_action(const HomotopeTower& t, Elt s, Elt sp, const CheckConfig& cfg = {});
/// Delta^(s^2) -> Delta (u, v) -> u.s + v is well defined and composes with
/// u -> u^(s) to the tower map Delta^(s^2) -> Delta^(s).
Report check_alternative_presentation(const HomotopeTower& t, Elt s);

/// S^{-1}M over S^{-1}K.
struct LocalizedModule {
  std::shared_ptr<const CommRing> ring;  // S^{-1}K
  Localization loc;
  TableNilModule mod;
  std::vector<Elt> subset;
  std::vector<std::uint32_t> canon;                 // m -> m . 1/1
  std::vector<std::pair<Elt, std::uint32_t>> reps;  // class -> (s, m)
  std::vector<std::uint32_t> pair_class;            // (position of s) * |M| + m -> class
  /// Class of m . 1/s.
  std::uint32_t cls(Elt s, std::uint32_t m) const;
};
LocalizedModule localize_nilmodule(const TableNilModule& m, const std::vector<Elt>& gens);
/// Axioms over S^{-1}K, the displayed operation formulas on every
/// representative, the canonical map, its kernel, and
/// S^{-1}M / S^{-1}M0 = S^{-1}(M/M0).
Report check_localization(const TableNilModule& m, const LocalizedModule& l,
                          const CheckConfig& cfg = {});

}  // namespace oddform
