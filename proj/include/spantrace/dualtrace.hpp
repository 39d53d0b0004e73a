#pragma once

#include <optional>

#include "spantrace/corrcat.hpp"

namespace spantrace {

/// Dual (X, D L) with evaluation over X x X <= X => S, coevaluation over
/// S <= X => X x X, and invertible cells from both triangle composites to
/// the identities.
struct DualityData {
  CCObject object;
  CCObject dual;
  CCMorphism ev;    // dual (x) object -> unit
  CCMorphism coev;  // unit -> object (x) dual
  CCCell first_triangle;   // A -> 1A -> (A A^v) A -> A (A^v A) -> A 1 -> A  ==>  id_A
  CCCell second_triangle;  // A^v -> A^v 1 -> A^v (A A^v) -> (A^v A) A^v -> 1 A^v -> A^v  ==>  id_{A^v}
};

/// Builds and certifies the duality data; throws if a certificate fails.
DualityData make_dual(const CCObject& a);
/// Re-checks both certificates and strict biduality.
Verdict duality_check(const DualityData& d);

/// The composite B^v -> B^v 1 -> B^v (A A^v) -> (B^v A) A^v -> (B^v B) A^v -> 1 A^v -> A^v.
CCMorphism dual_of_morphism(const CCMorphism& u, const DualityData& da, const DualityData& db);
/// Reversed span with map_dual components: the expected value of dual_of_morphism.
CCMorphism transpose_morphism(const CCMorphism& u);

/// F = C x_{X x_S Y} D: pairs (g, d) with left(g) = right(d), right(g) = left(d).
FiberProduct fixed_locus(const Span& c, const Span& d);

struct PairingResult {
  OmegaClass omega;
  FiberProduct locus;  // carrier of omega with its projections to C and D
};

/// coev, then (u then v) (x) id, then the symmetry, then ev; the resulting
/// class on the composite apex is carried to F by the tracked projections.
PairingResult pairing(const CCMorphism& u, const CCMorphism& v, const DualityData& dx);
/// alt_trace(v_d o u_g) at every (g, d) of F.
OmegaClass local_pairing(const CCMorphism& u, const CCMorphism& v);

/// Fixed points X^e = {g : left(g) = right(g)} with the inclusion into the apex.
struct FixedPoints {
  SetRef set;
  std::vector<std::size_t> inclusion;
};
FixedPoints fixed_points(const Span& e);
/// pairing(e, id) carried to X^e.
OmegaClass trace(const CCMorphism& e, const DualityData& dx);
/// trace of the identity: the characteristic class.
OmegaClass characteristic_class(const DualityData& dx);

struct SymmetryCertificate {
  PairingResult uv;
  PairingResult vu;
  Bijection swap;  // F_{u,v} -> F_{v,u}, (g, d) |-> (d, g)
  Verdict verdict;
};
SymmetryCertificate pairing_symmetry(const CCMorphism& u, const CCMorphism& v, const DualityData& dx,
                                     const DualityData& dy);

/// Commuting diagram: u over X <= C => Y, v over Y <= D => X, vertical maps
/// f : X -> X', g : Y -> Y', p : C -> C', q : D -> D' into the lower spans.
struct LVDiagram {
  OverMap f;
  OverMap g;
  OverMap p;
  OverMap q;
  Span lower_c;
  Span lower_d;
  CCMorphism u;
  CCMorphism v;

  PushDiagram c_square() const;
  PushDiagram d_square() const;
};
Verdict lv_diagram_check(const LVDiagram& d);

/// Down-square with a splitting: w : X' -> Y, gamma : u -> (f_nat then w),
/// delta : (w then g_nat) -> u'. The composites are kept for their projections.
struct Splitting {
  CCMorphism w;
  CCComposite f_then_w;
  CCComposite w_then_g;
  CCCell gamma;
  CCCell delta;
};
/// The splitting induced by the adjunction f_nat -| f^nat: w = f^nat then u.
Splitting adjunction_splitting(const LVDiagram& d, const CCMorphism& u_pushed);

/// Map of fixed loci F -> F' read off the splitting and the push cell of v,
/// following <u,v> = <v,u> -> <fv,w> = <w,fv> -> <u',v'>.
OverMap splitting_map(const LVDiagram& d, const Splitting& split, const CCMorphism& v_pushed,
                      const FiberProduct& upper, const FiberProduct& lower);

struct LVResult {
  OverMap s;
  OmegaClass lhs;  // s_* <u, v>
  OmegaClass rhs;  // <u', v'>
  PairingResult upper;
  PairingResult lower;
  Verdict verdict;
};
/// Checks s_* <u, v> = <u', v'> with u', v' the pushes; s comes from the
/// given splitting and is compared with (g, d) |-> (p g, q d).
LVResult pairing_functorial(const LVDiagram& d, const DualityData& dx, const DualityData& dx_lower,
                            const std::optional<Splitting>& split = std::nullopt);
LVResult pairing_functorial(const LVDiagram& d);

/// m : A (x) Hom(A, 1) -> Hom(A, A), its inverse as a section, and
/// consistency of m o coev with the curried identity.
Verdict split_epi_criterion(const CCObject& a);

struct PushedDual {
  DualityData pushed;
  Verdict verdict;
};
/// Duality data for (X', f_* L), checked against the block assembly of the
/// duality data of (X, L): dual sheaf f_* D L, ev and coev fiberwise sums.
PushedDual push_preserves_dual(const OverMap& f, const DualityData& dx);

}  // namespace spantrace
