#include "spantrace/sheaf.hpp"

namespace spantrace {

namespace {

void require_carrier(const SetRef& expected, const SetRef& actual, const char* op) {
  if (!same_set(expected, actual)) throw Error(std::string(op) + ": carrier mismatch");
}

}  // namespace

Sheaf::Sheaf(Ring ring, SetRef carrier, std::vector<ComplexRef> stalks)
    : ring_(ring), carrier_(std::move(carrier)), stalks_(std::move(stalks)) {
  if (stalks_.size() != carrier_->size()) throw Error("sheaf: one stalk per carrier element required");
  for (std::size_t i = 0; i < stalks_.size(); ++i) {
    if (!stalks_[i]) throw Error("sheaf: missing stalk at '" + carrier_->label(i) + "'");
    if (stalks_[i]->ring() != ring_ && !stalks_[i]->is_zero())
      throw Error("sheaf: stalk at '" + carrier_->label(i) + "' has the wrong ring");
  }
}

Sheaf Sheaf::constant(Ring ring, SetRef carrier, const ComplexRef& stalk) {
  std::vector<ComplexRef> stalks(carrier->size(), stalk);
  return Sheaf(ring, std::move(carrier), std::move(stalks));
}

Sheaf Sheaf::unit(Ring ring, const BaseRef& base) {
  return constant(ring, base_set(base), share(Complex::unit(ring)));
}

bool operator==(const Sheaf& a, const Sheaf& b) {
  if (a.ring_ != b.ring_ || !same_set(a.carrier_, b.carrier_)) return false;
  for (std::size_t i = 0; i < a.stalks_.size(); ++i)
    if (a.stalks_[i] != b.stalks_[i] && !(*a.stalks_[i] == *b.stalks_[i])) return false;
  return true;
}

Verdict sheaf_validate(const Sheaf& l) {
  for (std::size_t i = 0; i < l.stalks().size(); ++i) {
    Verdict v = cx_validate(*l.stalk(i));
    if (!v) return Verdict::fail("stalk '" + l.carrier()->label(i) + "': " + v.detail);
  }
  return Verdict::pass();
}

Sheaf pull(const OverMap& f, const Sheaf& m) {
  require_carrier(f.target(), m.carrier(), "pull");
  std::vector<ComplexRef> stalks;
  stalks.reserve(f.source()->size());
  for (std::size_t x = 0; x < f.source()->size(); ++x) stalks.push_back(m.stalk(f(x)));
  return Sheaf(m.ring(), f.source(), std::move(stalks));
}

Sheaf upper_shriek(const OverMap& f, const Sheaf& m) { return pull(f, m); }

Sheaf push(const OverMap& f, const Sheaf& l) {
  require_carrier(f.source(), l.carrier(), "push");
  std::vector<ComplexRef> stalks;
  for (std::size_t y = 0; y < f.target()->size(); ++y) {
    const auto fib = f.fiber(y);
    if (fib.size() == 1) {
      stalks.push_back(l.stalk(fib.front()));
      continue;
    }
    std::vector<ComplexRef> parts;
    for (std::size_t x : fib) parts.push_back(l.stalk(x));
    stalks.push_back(parts.empty() ? share(Complex(l.ring())) : share(cx_sum(parts)));
  }
  return Sheaf(l.ring(), f.target(), std::move(stalks));
}

Sheaf box(const Sheaf& l, const Sheaf& m, const FiberProduct& over) {
  if (l.ring() != m.ring()) throw Error("box: ring mismatch");
  require_carrier(over.first.target(), l.carrier(), "box");
  require_carrier(over.second.target(), m.carrier(), "box");
  std::vector<ComplexRef> stalks;
  for (std::size_t k = 0; k < over.apex->size(); ++k)
    stalks.push_back(tensor_ref(*l.stalk(over.first(k)), *m.stalk(over.second(k))));
  return Sheaf(l.ring(), over.apex, std::move(stalks));
}

Sheaf box(const Sheaf& l, const Sheaf& m) {
  if (!same_base(l.carrier()->base(), m.carrier()->base())) throw Error("box: base mismatch");
  return box(l, m, product_over_base(l.carrier(), m.carrier()));
}

Sheaf verdier(const Sheaf& l) {
  std::vector<ComplexRef> stalks;
  for (auto& s : l.stalks()) stalks.push_back(share(cx_dual(*s)));
  return Sheaf(l.ring(), l.carrier(), std::move(stalks));
}

Sheaf sheaf_hom(const Sheaf& l, const Sheaf& m) {
  if (l.ring() != m.ring()) throw Error("sheaf_hom: ring mismatch");
  if (!same_base(l.carrier()->base(), m.carrier()->base())) throw Error("sheaf_hom: base mismatch");
  return box(verdier(l), m, product_over_base(l.carrier(), m.carrier()));
}

ChainMap sum_tensor_distributor(const std::vector<ComplexRef>& parts, const ComplexRef& m) {
  if (parts.empty()) throw Error("sum_tensor_distributor: no parts");
  const auto sum = share(cx_sum(parts));
  const auto source = tensor_ref(*sum, *m);
  std::vector<ComplexRef> products;
  for (auto& p : parts) products.push_back(tensor_ref(*p, *m));
  const auto target = share(cx_sum(products));
  ChainMap out = ChainMap::zero(source, target);
  const auto id_m = ChainMap::identity(m);
  for (std::size_t i = 0; i < parts.size(); ++i) {
    ChainMap piece = map_tensor(sum_projection(parts, i, sum), id_m);
    piece = ChainMap(source, piece.target_ref(), piece.components());
    out = map_add(out, map_compose(sum_inclusion(products, i, target), piece));
  }
  return out;
}

bool operator==(const OmegaClass& a, const OmegaClass& b) {
  return a.ring == b.ring && same_set(a.carrier, b.carrier) && a.values == b.values;
}

OmegaClass omega_push(const OverMap& q, const OmegaClass& a) {
  require_carrier(q.source(), a.carrier, "omega_push");
  OmegaClass out{a.ring, q.target(), std::vector<Scalar>(q.target()->size(), 0)};
  for (std::size_t x = 0; x < a.values.size(); ++x) out.values[q(x)] = a.ring.add(out.values[q(x)], a.values[x]);
  return out;
}

OmegaClass omega_transport(const OmegaClass& a, const SetRef& target, const std::vector<std::size_t>& image) {
  if (image.size() != a.values.size() || target->size() != a.values.size())
    throw Error("omega_transport: not a bijection");
  OmegaClass out{a.ring, target, std::vector<Scalar>(target->size(), 0)};
  for (std::size_t i = 0; i < image.size(); ++i) out.values.at(image[i]) = a.values[i];
  return out;
}

}  // namespace spantrace
