#pragma once

#include <cstddef>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "spantrace/ring.hpp"

namespace spantrace {

/// Matrix over a Ring in compressed-row form: per row, the nonzero entries
/// ascending by column. Entries are always normalized and zeros are never
/// stored, so equality is structural.
///
/// set/accumulate shift the storage and are meant for small matrices; bulk
/// construction goes through Matrix::Builder.
class Matrix {
 public:
  struct Entry {
    std::size_t col;
    Scalar value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  /// Collects (row, col, value) triplets in any order; duplicates add up.
  class Builder {
   public:
    Builder(Ring ring, std::size_t rows, std::size_t cols);
    void add(std::size_t r, std::size_t c, Scalar v);
    /// Adds k * m with its top-left corner at (r0, c0).
    void add_block(std::size_t r0, std::size_t c0, const Matrix& m, Scalar k = 1);
    void reserve(std::size_t n) { triplets_.reserve(n); }
    Matrix build();

   private:
    struct Triplet {
      std::size_t row, col;
      Scalar value;
    };
    Ring ring_;
    std::size_t rows_, cols_;
    std::vector<Triplet> triplets_;
  };

  Matrix() = default;
  Matrix(Ring ring, std::size_t rows, std::size_t cols);

  static Matrix identity(Ring ring, std::size_t n);
  static Matrix from_rows(Ring ring, const std::vector<std::vector<Scalar>>& rows);
  static Matrix from_rows(Ring ring, std::initializer_list<std::initializer_list<Scalar>> rows);

  Ring ring() const noexcept { return ring_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }
  bool square() const noexcept { return rows_ == cols_; }

  Scalar operator()(std::size_t r, std::size_t c) const;
  void set(std::size_t r, std::size_t c, Scalar v);
  void accumulate(std::size_t r, std::size_t c, Scalar v);

  /// Nonzero entries of row r, ascending by column.
  std::span<const Entry> row(std::size_t r) const {
    return {entries_.data() + start_[r], entries_.data() + start_[r + 1]};
  }
  std::size_t nonzeros() const noexcept { return entries_.size(); }
  bool is_zero() const noexcept { return entries_.empty(); }

  /// Copies the rows x cols window starting at (r0, c0).
  Matrix block(std::size_t r0, std::size_t c0, std::size_t rows, std::size_t cols) const;
  /// Overwrites the window starting at (r0, c0) with m.
  void set_block(std::size_t r0, std::size_t c0, const Matrix& m);

  std::vector<std::vector<Scalar>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  Ring ring_;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> start_{0};  // rows_ + 1 offsets into entries_
  std::vector<Entry> entries_;
};

Matrix mat_mul(const Matrix& a, const Matrix& b);
Matrix mat_add(const Matrix& a, const Matrix& b);
Matrix mat_sub(const Matrix& a, const Matrix& b);
Matrix mat_scale(const Matrix& a, Scalar k);
Matrix mat_transpose(const Matrix& a);
Scalar mat_trace(const Matrix& a);
/// Kronecker product; block (i, j) of the result is a(i, j) * b.
Matrix mat_kron(const Matrix& a, const Matrix& b);
/// Inverse over the ring by Gauss-Jordan with unit pivots. Returns nullopt when
/// no unit pivot is available (always exact over a field Z/p; over Z it covers
/// the signed-permutation and unitriangular matrices used here).
std::optional<Matrix> mat_inverse(const Matrix& a);

std::ostream& operator<<(std::ostream& os, const Matrix& m);

}  // namespace spantrace
