#pragma once

#include <optional>
#include <vector>

#include "spantrace/complex.hpp"
#include "spantrace/finspan.hpp"
#include "spantrace/sheaf.hpp"

namespace spantrace {

/// (X, L): a set over the base with a sheaf on it.
struct CCObject {
  Sheaf sheaf;

  const SetRef& space() const noexcept { return sheaf.carrier(); }
  const BaseRef& base() const noexcept { return sheaf.carrier()->base(); }
  Ring ring() const noexcept { return sheaf.ring(); }

  /// (S, unit complex).
  static CCObject unit(Ring ring, const BaseRef& base);

  friend bool operator==(const CCObject& a, const CCObject& b) { return a.sheaf == b.sheaf; }
};

/// Cohomological correspondence (c, u): a span X <= C => Y and one chain map
/// L_{left(g)} -> M_{right(g)} per apex element g.
class CCMorphism {
 public:
  /// Checks every component's endpoints against the stalks (by value).
  CCMorphism(CCObject source, CCObject target, Span corr, std::vector<ChainMap> maps);

  static CCMorphism identity(const CCObject& a);

  /// Skips the endpoint comparison and rebinds each component to the stalk
  /// handles of source and target. For callers that build components from
  /// those stalks.
  static CCMorphism assemble(CCObject source, CCObject target, Span corr, std::vector<ChainMap> maps);

  const CCObject& source() const noexcept { return source_; }
  const CCObject& target() const noexcept { return target_; }
  const Span& corr() const noexcept { return corr_; }
  const ChainMap& map(std::size_t i) const { return maps_.at(i); }
  const std::vector<ChainMap>& maps() const noexcept { return maps_; }
  Ring ring() const noexcept { return source_.ring(); }

  friend bool operator==(const CCMorphism& a, const CCMorphism& b);

 private:
  CCMorphism(CCObject source, CCObject target, Span corr, std::vector<ChainMap> maps, bool checked);

  CCObject source_;
  CCObject target_;
  Span corr_;
  std::vector<ChainMap> maps_;
};

/// Stalks valid and every component a chain map.
Verdict cc_validate(const CCMorphism& m);

struct CCComposite {
  CCMorphism morphism;
  FiberProduct apex;
};
/// first, then second. Component at (g, d) is second_d o first_g.
CCComposite cc_compose(const CCMorphism& first, const CCMorphism& second);

struct CCTensorObject {
  CCObject object;
  FiberProduct space;
};
CCTensorObject cc_tensor_object(const CCObject& a, const CCObject& b);

struct CCTensor {
  CCMorphism morphism;
  FiberProduct apex;
  FiberProduct from;
  FiberProduct to;
};
/// Component at (g, g') is map_tensor(u_g, u'_g').
CCTensor cc_tensor(const CCMorphism& a, const CCMorphism& b);

/// 1 (x) A -> A and back; components are identities (the stalks agree).
CCMorphism cc_left_unitor(const CCObject& a);
CCMorphism cc_left_unitor_inverse(const CCObject& a);
/// A (x) 1 -> A and back.
CCMorphism cc_right_unitor(const CCObject& a);
CCMorphism cc_right_unitor_inverse(const CCObject& a);
/// (A (x) B) (x) C -> A (x) (B (x) C) and back.
CCMorphism cc_associator(const CCObject& a, const CCObject& b, const CCObject& c);
CCMorphism cc_associator_inverse(const CCObject& a, const CCObject& b, const CCObject& c);
/// A (x) B -> B (x) A with Koszul swaps.
CCMorphism cc_symmetry(const CCObject& a, const CCObject& b);

/// 2-morphism (c, u) -> (d, v) given by a map of apexes C -> D.
struct CCCell {
  CCMorphism source;
  CCMorphism target;
  OverMap graph;
};

/// Leg equations plus v_d = sum over p(g) = d of u_g; reports the first
/// failing d with both matrices.
Verdict cc_cell_check(const CCCell& q);
CCCell cc_identity_cell(const CCMorphism& m);
/// p, then q.
CCCell cc_cell_vertical(const CCCell& p, const CCCell& q);
/// (first then b) -> (first' then b) from p : first -> first'.
CCCell cc_whisker_first(const CCCell& p, const CCMorphism& b);
/// (a then second) -> (a then second') from p : second -> second'.
CCCell cc_whisker_second(const CCMorphism& a, const CCCell& p);
/// ((a then b) then c) -> (a then (b then c)), and its inverse.
CCCell cc_assoc_cell(const CCMorphism& a, const CCMorphism& b, const CCMorphism& c);
CCCell cc_assoc_cell_inverse(const CCMorphism& a, const CCMorphism& b, const CCMorphism& c);
/// (id then a) -> a and (a then id) -> a, and inverses.
CCCell cc_left_unit_cell(const CCMorphism& a);
CCCell cc_right_unit_cell(const CCMorphism& a);
CCCell cc_left_unit_cell_inverse(const CCMorphism& a);
CCCell cc_right_unit_cell_inverse(const CCMorphism& a);

/// Invertible cell a -> b: leg-compatible bijection with equal components.
std::optional<CCCell> cc_iso_search(const CCMorphism& a, const CCMorphism& b);
bool cc_cell_invertible(const CCCell& q);

/// f_nat = ((id, f), inclusion of L_x into the fiber sum).
CCMorphism f_natural(const OverMap& f, const Sheaf& l);
/// f^nat = ((f, id), projection of the fiber sum onto L_x).
CCMorphism f_conatural(const OverMap& f, const Sheaf& l);
/// Unit id -> (f_nat then f^nat), graph the diagonal X -> X x_X' X.
CCCell adjunction_unit(const OverMap& f, const Sheaf& l);
/// Counit (f^nat then f_nat) -> id, graph f.
CCCell adjunction_counit(const OverMap& f, const Sheaf& l);
/// Both triangle identities of the adjunction, with every pasted cell checked.
Verdict adjunction_triangles(const OverMap& f, const Sheaf& l);

/// Commuting square of spans: f : X -> X', p : C -> C', g : Y -> Y',
/// c : X <= C => Y, lower : X' <= C' => Y'.
struct PushDiagram {
  OverMap f;
  OverMap p;
  OverMap g;
  Span c;
  Span lower;
};
Verdict diagram_check(const PushDiagram& d);

/// The unique lift over the lower span: block (x, y) of the component at g'
/// is the sum of u_g over p(g) = g' with left(g) = x, right(g) = y.
CCMorphism shriek_push(const PushDiagram& d, const CCMorphism& u);
/// The cell (u then g_nat) -> (f_nat then u') with graph g |-> (left(g), p(g)).
CCCell shriek_push_cell(const PushDiagram& d, const CCMorphism& u, const CCMorphism& pushed);

struct LiftSearch {
  std::size_t free_entries = 0;
  std::size_t candidates = 0;
  std::size_t passing = 0;
  bool push_passes = false;
  bool only_push = false;
};
/// Enumerates every family of matrices over the lower span (right shapes,
/// entries in Z/m) and counts those for which the push cell passes. Needs a
/// finite ring and at most max_free free entries.
std::optional<LiftSearch> shriek_push_exhaustive(const PushDiagram& d, const CCMorphism& u,
                                                 std::size_t max_free);

struct InternalHom {
  CCObject object;
  FiberProduct space;
};
/// (X x_S Y, sheaf_hom(L, M)).
InternalHom internal_hom(const CCObject& a, const CCObject& b);
/// (T (x) A -> B) to (T -> Hom(A, B)) and back; mutually inverse.
CCMorphism cc_curry(const CCMorphism& u, const CCObject& t, const CCObject& a);
CCMorphism cc_uncurry(const CCMorphism& w, const CCObject& t, const CCObject& a, const CCObject& b);

/// Chain map between value-equal complexes with identity components.
ChainMap identity_between(const ComplexRef& source, const ComplexRef& target);

}  // namespace spantrace
