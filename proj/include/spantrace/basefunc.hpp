#pragma once

#include "spantrace/corrcat.hpp"
#include "spantrace/dualtrace.hpp"

namespace spantrace {

/// Base change g : S -> T. S is given as a set over T (its anchors are g);
/// the pulled categories live over a new base whose points are the elements
/// of S, in order.
class BaseChange {
 public:
  /// g must land in base_set(T).
  explicit BaseChange(OverMap g);

  const OverMap& map() const noexcept { return g_; }
  const BaseRef& target_base() const noexcept { return g_.target()->base(); }
  const BaseRef& source_base() const noexcept { return base_; }

  /// Y_S = Y x_T S re-anchored to S. Element (y, s) is over.at(y, s).
  struct PulledSet {
    SetRef set;
    FiberProduct over;
    std::size_t at(std::size_t y, std::size_t s) const { return over.at(y, s); }
  };
  PulledSet pull_set(const SetRef& y) const;

 private:
  OverMap g_;
  BaseRef base_;
};

/// f_S : (x, s) |-> (f(x), s).
OverMap pull_map(const BaseChange& bc, const OverMap& f);
Span pull_span(const BaseChange& bc, const Span& c);
/// (Y_S, g_Y^* M): the stalk at (y, s) is M_y.
CCObject pull_object(const BaseChange& bc, const CCObject& a);
/// Span base-changed, component at (g, s) is u_g.
CCMorphism pull_morphism(const BaseChange& bc, const CCMorphism& m);
/// Value at (x, s) is the value at x.
OmegaClass pull_class(const BaseChange& bc, const OmegaClass& a);
PushDiagram pull_diagram(const BaseChange& bc, const PushDiagram& d);

/// Graph of a bijection of carriers with identity components; the stalks
/// must agree by value.
CCMorphism recoord_morphism(const CCObject& a, const CCObject& b, const std::vector<std::size_t>& image);

/// Tensor constraint pull(A (x) B) -> pull(A) (x) pull(B): ((x, y), s) |-> ((x, s), (y, s)).
CCMorphism tensor_constraint(const BaseChange& bc, const CCObject& a, const CCObject& b);
/// Unit constraint pull(1_T) -> 1_S: (t, s) |-> s.
CCMorphism unit_constraint(const BaseChange& bc, Ring ring);

/// pull(u then v) against pull(u) then pull(v), by invertible cell.
Verdict pull_preserves_compose(const BaseChange& bc, const CCMorphism& u, const CCMorphism& v);
/// pull(u (x) v) then constraint against constraint then pull(u) (x) pull(v).
Verdict pull_preserves_tensor(const BaseChange& bc, const CCMorphism& u, const CCMorphism& v);
/// pull(shriek_push(d, u)) == shriek_push(pull(d), pull(u)), strictly.
Verdict pull_push_square(const BaseChange& bc, const PushDiagram& d, const CCMorphism& u);

struct BaseChangeCertificate {
  Verdict dual;     // pull(A^v) == (pull A)^v
  Verdict ev;       // through the constraints
  Verdict coev;
  Verdict pairing;  // pull <u, v> against <pull u, pull v>, valuewise
  Verdict trace;    // pull tr(v o u) against tr(pull(v o u))
  OmegaClass pulled_pairing;
  OmegaClass pairing_of_pulled;
  Verdict verdict;
};

/// u : A -> B, v : B -> A over T, dx = make_dual(A).
BaseChangeCertificate functor_preserves(const BaseChange& bc, const DualityData& dx, const CCMorphism& u,
                                        const CCMorphism& v);

}  // namespace spantrace
