#include "spantrace/matrix.hpp"

#include <algorithm>
#include <ostream>

#include "spantrace/error.hpp"

namespace spantrace {

namespace {

void require_same_ring(const Matrix& a, const Matrix& b, const char* op) {
  if (a.ring() != b.ring())
    throw Error(std::string(op) + ": ring mismatch (" + a.ring().name() + " vs " +
                b.ring().name() + ")");
}

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  require_same_ring(a, b, op);
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(std::string(op) + ": shape mismatch");
}

}  // namespace

Matrix::Builder::Builder(Ring ring, std::size_t rows, std::size_t cols) : ring_(ring), rows_(rows), cols_(cols) {}

void Matrix::Builder::add(std::size_t r, std::size_t c, Scalar v) {
  if (r >= rows_ || c >= cols_) throw Error("matrix builder: index out of range");
  if (v != 0) triplets_.push_back(Triplet{r, c, v});
}

void Matrix::Builder::add_block(std::size_t r0, std::size_t c0, const Matrix& m, Scalar k) {
  if (m.ring() != ring_) throw Error("matrix builder: ring mismatch");
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) throw Error("matrix builder: block out of range");
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (auto& e : m.row(i)) triplets_.push_back(Triplet{r0 + i, c0 + e.col, k == 1 ? e.value : ring_.mul(k, e.value)});
}

Matrix Matrix::Builder::build() {
  std::sort(triplets_.begin(), triplets_.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  Matrix out(ring_, rows_, cols_);
  out.entries_.reserve(triplets_.size());
  std::size_t r = 0;
  for (std::size_t i = 0; i < triplets_.size();) {
    const std::size_t row = triplets_[i].row, col = triplets_[i].col;
    Scalar v = ring_.normalize(triplets_[i].value);
    for (++i; i < triplets_.size() && triplets_[i].row == row && triplets_[i].col == col; ++i)
      v = ring_.add(v, ring_.normalize(triplets_[i].value));
    if (v == 0) continue;
    while (r < row) out.start_[++r] = out.entries_.size();
    out.entries_.push_back(Entry{col, v});
  }
  while (r < rows_) out.start_[++r] = out.entries_.size();
  triplets_.clear();
  return out;
}

Matrix::Matrix(Ring ring, std::size_t rows, std::size_t cols)
    : ring_(ring), rows_(rows), cols_(cols), start_(rows + 1, 0) {}

Matrix Matrix::identity(Ring ring, std::size_t n) {
  Builder b(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) b.add(i, i, 1);
  return b.build();
}

Matrix Matrix::from_rows(Ring ring, const std::vector<std::vector<Scalar>>& rows) {
  const std::size_t r = rows.size();
  const std::size_t c = r == 0 ? 0 : rows.front().size();
  Builder b(ring, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    if (rows[i].size() != c) throw Error("ragged matrix rows");
    for (std::size_t j = 0; j < c; ++j) b.add(i, j, rows[i][j]);
  }
  return b.build();
}

Matrix Matrix::from_rows(Ring ring, std::initializer_list<std::initializer_list<Scalar>> rows) {
  std::vector<std::vector<Scalar>> v;
  for (auto& row : rows) v.emplace_back(row);
  return from_rows(ring, v);
}

Scalar Matrix::operator()(std::size_t r, std::size_t c) const {
  const auto rw = row(r);
  auto it = std::lower_bound(rw.begin(), rw.end(), c, [](const Entry& e, std::size_t k) { return e.col < k; });
  return it != rw.end() && it->col == c ? it->value : 0;
}

void Matrix::set(std::size_t r, std::size_t c, Scalar v) {
  if (r >= rows_ || c >= cols_) throw Error("matrix: index out of range");
  v = ring_.normalize(v);
  const auto first = entries_.begin() + static_cast<std::ptrdiff_t>(start_[r]);
  const auto last = entries_.begin() + static_cast<std::ptrdiff_t>(start_[r + 1]);
  auto it = std::lower_bound(first, last, c, [](const Entry& e, std::size_t k) { return e.col < k; });
  const bool present = it != last && it->col == c;
  if (v == 0) {
    if (!present) return;
    entries_.erase(it);
    for (std::size_t k = r + 1; k <= rows_; ++k) --start_[k];
  } else if (present) {
    it->value = v;
  } else {
    entries_.insert(it, Entry{c, v});
    for (std::size_t k = r + 1; k <= rows_; ++k) ++start_[k];
  }
}

void Matrix::accumulate(std::size_t r, std::size_t c, Scalar v) { set(r, c, ring_.add((*this)(r, c), v)); }

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const {
  if (r0 + rows > rows_ || c0 + cols > cols_) throw Error("block: window out of range");
  Builder b(ring_, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (auto& e : row(r0 + i))
      if (e.col >= c0 && e.col < c0 + cols) b.add(i, e.col - c0, e.value);
  return b.build();
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& m) {
  require_same_ring(*this, m, "set_block");
  if (r0 + m.rows() > rows_ || c0 + m.cols() > cols_) throw Error("set_block: window out of range");
  Builder b(ring_, rows_, cols_);
  b.reserve(entries_.size() + m.nonzeros());
  for (std::size_t i = 0; i < rows_; ++i) {
    const bool in_rows = i >= r0 && i < r0 + m.rows();
    for (auto& e : row(i))
      if (!in_rows || e.col < c0 || e.col >= c0 + m.cols()) b.add(i, e.col, e.value);
  }
  b.add_block(r0, c0, m);
  *this = b.build();
}

std::vector<std::vector<Scalar>> Matrix::to_rows() const {
  std::vector<std::vector<Scalar>> out(rows_, std::vector<Scalar>(cols_, 0));
  for (std::size_t i = 0; i < rows_; ++i)
    for (auto& e : row(i)) out[i][e.col] = e.value;
  return out;
}

Matrix mat_mul(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "mat_mul");
  if (a.cols() != b.rows())
    throw Error("mat_mul: shape mismatch " + std::to_string(a.rows()) + "x" +
                std::to_string(a.cols()) + " * " + std::to_string(b.rows()) + "x" +
                std::to_string(b.cols()));
  const Ring ring = a.ring();
  Matrix::Builder out(ring, a.rows(), b.cols());
  std::vector<Scalar> acc(b.cols(), 0);
  std::vector<char> seen(b.cols(), 0);
  std::vector<std::size_t> touched;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (auto& [k, aik] : a.row(i))
      for (auto& [j, bkj] : b.row(k)) {
        if (!seen[j]) {
          seen[j] = 1;
          touched.push_back(j);
        }
        acc[j] = ring.add(acc[j], ring.mul(aik, bkj));
      }
    for (auto j : touched) {
      out.add(i, j, acc[j]);
      acc[j] = 0;
      seen[j] = 0;
    }
    touched.clear();
  }
  return out.build();
}

Matrix mat_add(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "mat_add");
  Matrix::Builder out(a.ring(), a.rows(), a.cols());
  out.add_block(0, 0, a);
  out.add_block(0, 0, b);
  return out.build();
}

Matrix mat_sub(const Matrix& a, const Matrix& b) { return mat_add(a, mat_scale(b, -1)); }

Matrix mat_scale(const Matrix& a, Scalar k) {
  Matrix::Builder out(a.ring(), a.rows(), a.cols());
  out.add_block(0, 0, a, a.ring().normalize(k));
  return out.build();
}

Matrix mat_transpose(const Matrix& a) {
  Matrix::Builder out(a.ring(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto& [j, v] : a.row(i)) out.add(j, i, v);
  return out.build();
}

Scalar mat_trace(const Matrix& a) {
  if (!a.square()) throw Error("mat_trace: matrix is not square");
  Scalar t = 0;
  for (std::size_t i = 0; i < a.rows(); ++i) t = a.ring().add(t, a(i, i));
  return t;
}

Matrix mat_kron(const Matrix& a, const Matrix& b) {
  require_same_ring(a, b, "mat_kron");
  const Ring ring = a.ring();
  Matrix::Builder out(ring, a.rows() * b.rows(), a.cols() * b.cols());
  out.reserve(a.nonzeros() * b.nonzeros());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (auto& [j, aij] : a.row(i))
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (auto& [l, bkl] : b.row(k)) out.add(i * b.rows() + k, j * b.cols() + l, ring.mul(aij, bkl));
  return out.build();
}

std::optional<Matrix> mat_inverse(const Matrix& a) {
  if (!a.square()) throw Error("mat_inverse: matrix is not square");
  const Ring ring = a.ring();
  const std::size_t n = a.rows();
  auto work = a.to_rows();
  auto inv = Matrix::identity(ring, n).to_rows();
  auto row_axpy = [&](std::vector<std::vector<Scalar>>& m, std::size_t dst, std::size_t src, Scalar k) {
    for (std::size_t j = 0; j < n; ++j) m[dst][j] = ring.add(m[dst][j], ring.mul(k, m[src][j]));
  };
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = n;
    Scalar pinv = 0;
    for (std::size_t r = col; r < n; ++r)
      if (ring.invert(work[r][col], pinv)) {
        pivot = r;
        break;
      }
    if (pivot == n) return std::nullopt;
    std::swap(work[col], work[pivot]);
    std::swap(inv[col], inv[pivot]);
    for (std::size_t j = 0; j < n; ++j) {
      work[col][j] = ring.mul(work[col][j], pinv);
      inv[col][j] = ring.mul(inv[col][j], pinv);
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || work[r][col] == 0) continue;
      const Scalar k = ring.neg(work[r][col]);
      row_axpy(work, r, col, k);
      row_axpy(inv, r, col, k);
    }
  }
  return Matrix::from_rows(ring, inv);
}

std::ostream& operator<<(std::ostream& os, const Matrix& m) {
  os << '[';
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << (i ? ",[" : "[");
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << ']';
  }
  return os << ']';
}

}  // namespace spantrace
