#include "spantrace/complex.hpp"

#include <functional>
#include <set>
#include <string>
#include <unordered_map>

namespace spantrace {

namespace {

std::string deg_str(Degree n) { return std::to_string(n); }

void require_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (m.rows() != rows || m.cols() != cols)
    throw Error(what + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
                ", got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

/// Degrees n of a (x) b with nonzero rank, together with summand layout.
std::set<Degree> tensor_degrees(const Complex& a, const Complex& b) {
  std::set<Degree> out;
  for (auto [p, ra] : a.ranks())
    for (auto [q, rb] : b.ranks()) out.insert(p + q);
  return out;
}

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t content_hash(const Complex& c) {
  std::size_t h = std::hash<std::int64_t>{}(c.ring().modulus());
  for (auto [n, r] : c.ranks()) h = mix(mix(h, static_cast<std::size_t>(n)), r);
  for (auto& [n, m] : c.stored_diffs())
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (auto& [j, v] : m.row(i)) h = mix(mix(mix(h, i), j), static_cast<std::size_t>(v));
  return h;
}

struct TensorEntry {
  Complex a, b;
  ComplexRef product;
};

}  // namespace

Complex::Complex(Ring ring, std::map<Degree, std::size_t> ranks, std::map<Degree, Matrix> diffs)
    : ring_(ring) {
  for (auto [n, r] : ranks)
    if (r > 0) ranks_[n] = r;
  for (auto& [n, m] : diffs) {
    if (m.ring() != ring_ && !(m.rows() == 0 && m.cols() == 0))
      throw Error("complex: differential in degree " + deg_str(n) + " has the wrong ring");
    require_shape(m, rank(n + 1), rank(n), "complex: differential in degree " + deg_str(n));
    if (!m.empty() && !m.is_zero()) diffs_.emplace(n, m);
  }
}

Complex Complex::unit(Ring ring) { return free(ring, 0, 1); }

Complex Complex::free(Ring ring, Degree degree, std::size_t rank) {
  return Complex(ring, {{degree, rank}}, {});
}

std::size_t Complex::rank(Degree n) const {
  auto it = ranks_.find(n);
  return it == ranks_.end() ? 0 : it->second;
}

Matrix Complex::diff(Degree n) const {
  auto it = diffs_.find(n);
  if (it != diffs_.end()) return it->second;
  return Matrix(ring_, rank(n + 1), rank(n));
}

std::vector<Degree> Complex::degrees() const {
  std::vector<Degree> out;
  for (auto [n, r] : ranks_) out.push_back(n);
  return out;
}

std::size_t Complex::total_rank() const {
  std::size_t t = 0;
  for (auto [n, r] : ranks_) t += r;
  return t;
}

Scalar Complex::euler_characteristic() const {
  Scalar chi = 0;
  for (auto [n, r] : ranks_) chi = ring_.add(chi, sign_pow(n) * static_cast<Scalar>(r));
  return chi;
}

Verdict cx_validate(const Complex& c) {
  for (auto& [n, d] : c.stored_diffs()) {
    if (d.rows() != c.rank(n + 1) || d.cols() != c.rank(n))
      return Verdict::fail("shape mismatch at degree " + deg_str(n));
  }
  for (Degree n : c.degrees()) {
    if (c.rank(n + 1) == 0 || c.rank(n + 2) == 0) continue;
    if (!mat_mul(c.diff(n + 1), c.diff(n)).is_zero())
      return Verdict::fail("d o d != 0 at degree " + deg_str(n));
  }
  return Verdict::pass();
}

std::size_t tensor_offset(const Complex& a, const Complex& b, Degree n, Degree p) {
  std::size_t off = 0;
  for (auto [pp, ra] : a.ranks()) {
    if (pp >= p) break;
    off += ra * b.rank(n - pp);
  }
  return off;
}

Complex cx_tensor(const Complex& a, const Complex& b) {
  if (a.ring() != b.ring()) throw Error("cx_tensor: ring mismatch");
  const Ring ring = a.ring();
  std::map<Degree, std::size_t> ranks;
  for (auto [p, ra] : a.ranks())
    for (auto [q, rb] : b.ranks()) ranks[p + q] += ra * rb;

  std::map<Degree, Matrix> diffs;
  for (Degree n : tensor_degrees(a, b)) {
    const std::size_t rows = ranks.count(n + 1) ? ranks[n + 1] : 0;
    if (rows == 0) continue;
    Matrix::Builder d(ring, rows, ranks[n]);
    for (auto [p, ra] : a.ranks()) {
      const Degree q = n - p;
      const std::size_t rb = b.rank(q);
      if (rb == 0) continue;
      const std::size_t col = tensor_offset(a, b, n, p);
      if (auto ia = a.stored_diffs().find(p); ia != a.stored_diffs().end()) {
        // d_a (x) id
        const Matrix& da = ia->second;
        const std::size_t row = tensor_offset(a, b, n + 1, p + 1);
        for (std::size_t k = 0; k < da.rows(); ++k)
          for (auto& [i, v] : da.row(k))
            for (std::size_t j = 0; j < rb; ++j) d.add(row + k * rb + j, col + i * rb + j, v);
      }
      if (auto ib = b.stored_diffs().find(q); ib != b.stored_diffs().end()) {
        // (-1)^p id (x) d_b
        const Matrix& db = ib->second;
        const std::size_t rb1 = b.rank(q + 1);
        const std::size_t row = tensor_offset(a, b, n + 1, p);
        const Scalar sign = sign_pow(p);
        for (std::size_t i = 0; i < ra; ++i)
          for (std::size_t l = 0; l < db.rows(); ++l)
            for (auto& [j, v] : db.row(l)) d.add(row + i * rb1 + l, col + i * rb + j, sign * v);
      }
    }
    diffs.emplace(n, d.build());
  }
  return Complex(ring, std::move(ranks), std::move(diffs));
}

ComplexRef tensor_ref(const Complex& a, const Complex& b) {
  thread_local std::unordered_multimap<std::size_t, TensorEntry> cache;
  const std::size_t key = mix(content_hash(a), content_hash(b));
  auto [lo, hi] = cache.equal_range(key);
  for (auto it = lo; it != hi; ++it)
    if (it->second.a == a && it->second.b == b) return it->second.product;
  if (cache.size() > 4096) cache.clear();
  ComplexRef out = share(cx_tensor(a, b));
  cache.emplace(key, TensorEntry{a, b, out});
  return out;
}

Complex cx_dual(const Complex& a) {
  std::map<Degree, std::size_t> ranks;
  for (auto [n, r] : a.ranks()) ranks[-n] = r;
  std::map<Degree, Matrix> diffs;
  for (auto& [n, d] : a.stored_diffs()) diffs.emplace(-n - 1, mat_transpose(d));
  return Complex(a.ring(), std::move(ranks), std::move(diffs));
}

Complex cx_sum(const std::vector<ComplexRef>& parts) {
  if (parts.empty()) return Complex();
  const Ring ring = parts.front()->ring();
  std::map<Degree, std::size_t> ranks;
  for (auto& c : parts) {
    if (c->ring() != ring) throw Error("cx_sum: ring mismatch");
    for (auto [n, r] : c->ranks()) ranks[n] += r;
  }
  std::map<Degree, Matrix> diffs;
  for (auto [n, r] : ranks) {
    const std::size_t rows = ranks.count(n + 1) ? ranks[n + 1] : 0;
    if (rows == 0) continue;
    Matrix::Builder d(ring, rows, r);
    std::size_t ro = 0, co = 0;
    for (auto& c : parts) {
      d.add_block(ro, co, c->diff(n));
      ro += c->rank(n + 1);
      co += c->rank(n);
    }
    diffs.emplace(n, d.build());
  }
  return Complex(ring, std::move(ranks), std::move(diffs));
}

Scalar pairing_sign(Degree k) {
  const long t = static_cast<long>(k) * (static_cast<long>(k) - 1) / 2;
  return sign_pow(t);
}

// ---------------------------------------------------------------------------

ChainMap::ChainMap(ComplexRef source, ComplexRef target, std::map<Degree, Matrix> components)
    : source_(std::move(source)), target_(std::move(target)) {
  if (!source_ || !target_) throw Error("chain map: null endpoint");
  if (source_->ring() != target_->ring() && !source_->is_zero() && !target_->is_zero())
    throw Error("chain map: ring mismatch");
  for (auto& [n, m] : components) {
    require_shape(m, target_->rank(n), source_->rank(n), "chain map: component " + deg_str(n));
    if (!m.empty() && !m.is_zero()) components_.emplace(n, m);
  }
}

ChainMap ChainMap::identity(ComplexRef c) { return scalar(std::move(c), 1); }

ChainMap ChainMap::zero(ComplexRef source, ComplexRef target) {
  return ChainMap(std::move(source), std::move(target));
}

ChainMap ChainMap::scalar(ComplexRef c, Scalar k) {
  std::map<Degree, Matrix> comps;
  for (auto [n, r] : c->ranks()) comps.emplace(n, mat_scale(Matrix::identity(c->ring(), r), k));
  auto src = c;
  return ChainMap(std::move(src), std::move(c), std::move(comps));
}

Matrix ChainMap::component(Degree n) const {
  auto it = components_.find(n);
  if (it != components_.end()) return it->second;
  return Matrix(ring(), target_->rank(n), source_->rank(n));
}

bool operator==(const ChainMap& a, const ChainMap& b) {
  return (a.source_ == b.source_ || *a.source_ == *b.source_) &&
         (a.target_ == b.target_ || *a.target_ == *b.target_) && a.components_ == b.components_;
}

Verdict chain_map_check(const ChainMap& f) {
  std::set<Degree> degs;
  for (auto [n, r] : f.source().ranks()) degs.insert(n);
  for (auto [n, r] : f.target().ranks()) degs.insert(n - 1);
  for (Degree n : degs) {
    const Matrix lhs = mat_mul(f.target().diff(n), f.component(n));
    const Matrix rhs = mat_mul(f.component(n + 1), f.source().diff(n));
    if (lhs != rhs) return Verdict::fail("not a chain map at degree " + deg_str(n));
  }
  return Verdict::pass();
}

ChainMap map_compose(const ChainMap& g, const ChainMap& f) {
  if (!(f.target_ref() == g.source_ref() || f.target() == g.source()))
    throw Error("map_compose: middle complexes differ");
  std::map<Degree, Matrix> comps;
  for (auto& [n, fn] : f.components()) {
    auto it = g.components().find(n);
    if (it == g.components().end()) continue;
    comps.emplace(n, mat_mul(it->second, fn));
  }
  return ChainMap(f.source_ref(), g.target_ref(), std::move(comps));
}

ChainMap map_add(const ChainMap& a, const ChainMap& b) {
  if (!(a.source() == b.source() && a.target() == b.target()))
    throw Error("map_add: endpoints differ");
  std::map<Degree, Matrix> comps = a.components();
  for (auto& [n, m] : b.components()) {
    auto it = comps.find(n);
    if (it == comps.end())
      comps.emplace(n, m);
    else
      it->second = mat_add(it->second, m);
  }
  return ChainMap(a.source_ref(), a.target_ref(), std::move(comps));
}

ChainMap map_scale(const ChainMap& a, Scalar k) {
  std::map<Degree, Matrix> comps;
  for (auto& [n, m] : a.components()) comps.emplace(n, mat_scale(m, k));
  return ChainMap(a.source_ref(), a.target_ref(), std::move(comps));
}

ChainMap map_tensor(const ChainMap& f, const ChainMap& g) {
  if (f.ring() != g.ring()) throw Error("map_tensor: ring mismatch");
  const Ring ring = f.ring();
  auto src = tensor_ref(f.source(), g.source());
  auto tgt = tensor_ref(f.target(), g.target());
  std::map<Degree, Matrix::Builder> parts;
  for (auto& [p, fp] : f.components()) {
    for (auto& [q, gq] : g.components()) {
      const Degree n = p + q;
      auto it = parts.find(n);
      if (it == parts.end()) it = parts.emplace(n, Matrix::Builder(ring, tgt->rank(n), src->rank(n))).first;
      const std::size_t r0 = tensor_offset(f.target(), g.target(), n, p);
      const std::size_t c0 = tensor_offset(f.source(), g.source(), n, p);
      for (std::size_t i = 0; i < fp.rows(); ++i)
        for (auto& [j, fij] : fp.row(i))
          for (std::size_t k = 0; k < gq.rows(); ++k)
            for (auto& [l, gkl] : gq.row(k))
              it->second.add(r0 + i * gq.rows() + k, c0 + j * gq.cols() + l, ring.mul(fij, gkl));
    }
  }
  std::map<Degree, Matrix> comps;
  for (auto& [n, b] : parts) comps.emplace(n, b.build());
  return ChainMap(std::move(src), std::move(tgt), std::move(comps));
}

ChainMap map_dual(const ChainMap& f) {
  std::map<Degree, Matrix> comps;
  for (auto& [n, m] : f.components()) comps.emplace(-n, mat_transpose(m));
  return ChainMap(share(cx_dual(f.target())), share(cx_dual(f.source())), std::move(comps));
}

Scalar alt_trace(const ChainMap& e) {
  if (!e.is_endomorphism()) throw Error("alt_trace: endomorphism required");
  const Ring ring = e.ring();
  Scalar t = 0;
  for (auto& [n, m] : e.components()) t = ring.add(t, ring.mul(sign_pow(n), mat_trace(m)));
  return t;
}

ChainMap koszul_swap(const ComplexRef& a, const ComplexRef& b) {
  const Ring ring = a->ring();
  auto src = tensor_ref(*a, *b);
  auto tgt = tensor_ref(*b, *a);
  std::map<Degree, Matrix> comps;
  for (auto [n, r] : src->ranks()) {
    Matrix::Builder m(ring, r, r);
    m.reserve(r);
    for (auto [p, ra] : a->ranks()) {
      const Degree q = n - p;
      const std::size_t rb = b->rank(q);
      if (rb == 0) continue;
      const std::size_t so = tensor_offset(*a, *b, n, p);
      const std::size_t to = tensor_offset(*b, *a, n, q);
      const Scalar s = sign_pow(static_cast<long>(p) * q);
      for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < rb; ++j) m.add(to + j * ra + i, so + i * rb + j, s);
    }
    comps.emplace(n, m.build());
  }
  return ChainMap(std::move(src), std::move(tgt), std::move(comps));
}

ChainMap tensor_associator(const ComplexRef& a, const ComplexRef& b, const ComplexRef& c) {
  const Ring ring = a->ring();
  const ComplexRef ab = tensor_ref(*a, *b);
  const ComplexRef bc = tensor_ref(*b, *c);
  auto src = tensor_ref(*ab, *c);
  auto tgt = tensor_ref(*a, *bc);
  std::map<Degree, Matrix> comps;
  for (auto [n, r] : src->ranks()) {
    Matrix::Builder m(ring, r, r);
    m.reserve(r);
    for (auto [p, ra] : a->ranks())
      for (auto [q, rb] : b->ranks()) {
        const Degree rr = n - p - q;
        const std::size_t rc = c->rank(rr);
        if (rc == 0) continue;
        const std::size_t src_base = tensor_offset(*ab, *c, n, p + q);
        const std::size_t ab_base = tensor_offset(*a, *b, p + q, p);
        const std::size_t tgt_base = tensor_offset(*a, *bc, n, p);
        const std::size_t bc_base = tensor_offset(*b, *c, q + rr, q);
        const std::size_t bc_rank = bc->rank(q + rr);
        for (std::size_t i = 0; i < ra; ++i)
          for (std::size_t j = 0; j < rb; ++j)
            for (std::size_t k = 0; k < rc; ++k) {
              const std::size_t s = src_base + (ab_base + i * rb + j) * rc + k;
              const std::size_t t = tgt_base + i * bc_rank + bc_base + j * rc + k;
              m.add(t, s, 1);
            }
      }
    comps.emplace(n, m.build());
  }
  return ChainMap(std::move(src), std::move(tgt), std::move(comps));
}

ChainMap permutation_inverse(const ChainMap& f) {
  std::map<Degree, Matrix> comps;
  for (auto& [n, m] : f.components()) comps.emplace(n, mat_transpose(m));
  return ChainMap(f.target_ref(), f.source_ref(), std::move(comps));
}

ChainMap evaluation(const ComplexRef& c) {
  const Ring ring = c->ring();
  const Complex dual = cx_dual(*c);
  auto src = tensor_ref(dual, *c);
  auto tgt = share(Complex::unit(ring));
  Matrix::Builder m(ring, 1, src->rank(0));
  for (auto [k, r] : c->ranks()) {
    const std::size_t off = tensor_offset(dual, *c, 0, -k);
    for (std::size_t i = 0; i < r; ++i) m.add(0, off + i * r + i, pairing_sign(k));
  }
  return ChainMap(std::move(src), std::move(tgt), {{0, m.build()}});
}

ChainMap coevaluation(const ComplexRef& c) {
  const Ring ring = c->ring();
  const Complex dual = cx_dual(*c);
  auto src = share(Complex::unit(ring));
  auto tgt = tensor_ref(*c, dual);
  Matrix::Builder m(ring, tgt->rank(0), 1);
  for (auto [k, r] : c->ranks()) {
    const std::size_t off = tensor_offset(*c, dual, 0, k);
    for (std::size_t i = 0; i < r; ++i) m.add(off + i * r + i, 0, pairing_sign(k));
  }
  return ChainMap(std::move(src), std::move(tgt), {{0, m.build()}});
}

namespace {

std::map<Degree, Matrix> inclusion_blocks(const std::vector<ComplexRef>& parts, std::size_t index,
                                          const Complex& sum) {
  std::map<Degree, Matrix> comps;
  const Complex& part = *parts.at(index);
  for (auto [n, r] : part.ranks()) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < index; ++i) off += parts[i]->rank(n);
    Matrix::Builder m(part.ring(), sum.rank(n), r);
    for (std::size_t i = 0; i < r; ++i) m.add(off + i, i, 1);
    comps.emplace(n, m.build());
  }
  return comps;
}

}  // namespace

ChainMap sum_inclusion(const std::vector<ComplexRef>& parts, std::size_t index, const ComplexRef& sum) {
  return ChainMap(parts.at(index), sum, inclusion_blocks(parts, index, *sum));
}

ChainMap sum_projection(const std::vector<ComplexRef>& parts, std::size_t index, const ComplexRef& sum) {
  auto comps = inclusion_blocks(parts, index, *sum);
  for (auto& [n, m] : comps) m = mat_transpose(m);
  return ChainMap(sum, parts.at(index), std::move(comps));
}

ChainMap curry(const ChainMap& u, const ComplexRef& l, const ComplexRef& m) {
  if (!(u.source() == cx_tensor(*l, *m))) throw Error("curry: source is not l (x) m");
  auto m_dual = share(cx_dual(*m));
  auto lm = tensor_ref(*l, *m);
  // l = l (x) unit -> l (x) (m (x) m^v)
  ChainMap step = map_tensor(ChainMap::identity(l), coevaluation(m));
  step = ChainMap(l, step.target_ref(), step.components());
  // -> (l (x) m) (x) m^v
  step = map_compose(permutation_inverse(tensor_associator(l, m, m_dual)), step);
  // -> m^v (x) (l (x) m)
  step = map_compose(koszul_swap(lm, m_dual), step);
  // -> m^v (x) n
  return map_compose(map_tensor(ChainMap::identity(m_dual), u), step);
}

ChainMap uncurry(const ChainMap& w, const ComplexRef& l, const ComplexRef& m, const ComplexRef& n) {
  auto m_dual = share(cx_dual(*m));
  if (!(w.source() == *l) || !(w.target() == cx_tensor(*m_dual, *n)))
    throw Error("uncurry: endpoints are not l -> m^v (x) n");
  // l (x) m -> (m^v (x) n) (x) m
  ChainMap step = map_tensor(w, ChainMap::identity(m));
  // -> m^v (x) (n (x) m)
  step = map_compose(tensor_associator(m_dual, n, m), step);
  // -> m^v (x) (m (x) n)
  step = map_compose(map_tensor(ChainMap::identity(m_dual), koszul_swap(n, m)), step);
  // -> (m^v (x) m) (x) n
  step = map_compose(permutation_inverse(tensor_associator(m_dual, m, n)), step);
  // -> unit (x) n = n
  step = map_compose(map_tensor(evaluation(m), ChainMap::identity(n)), step);
  return ChainMap(step.source_ref(), n, step.components());
}

ChainMap homotopy_perturb(const ChainMap& e, const Homotopy& h) {
  const Complex& src = e.source();
  const Complex& tgt = e.target();
  const Ring ring = e.ring();
  auto hcomp = [&](Degree n) {
    auto it = h.components.find(n);
    if (it != h.components.end()) {
      require_shape(it->second, tgt.rank(n - 1), src.rank(n), "homotopy component " + deg_str(n));
      return it->second;
    }
    return Matrix(ring, tgt.rank(n - 1), src.rank(n));
  };
  for (auto& [n, m] : h.components) hcomp(n);
  std::map<Degree, Matrix> comps;
  for (auto [n, r] : src.ranks()) {
    if (tgt.rank(n) == 0) continue;
    Matrix m = e.component(n);
    m = mat_add(m, mat_mul(tgt.diff(n - 1), hcomp(n)));
    m = mat_add(m, mat_mul(hcomp(n + 1), src.diff(n)));
    comps.emplace(n, std::move(m));
  }
  return ChainMap(e.source_ref(), e.target_ref(), std::move(comps));
}

}  // namespace spantrace
