#pragma once

#include <vector>

#include "lmdp/rat.hpp"

namespace lmdp {

using ColVec = std::vector<Rat>;  // column vector, dense

// Dense matrix with exact rational entries, row-major.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols) {}
  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  Rat& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Rat& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  ColVec mul(const ColVec& v) const;            // this * v
  std::vector<Rat> mul_row(const std::vector<Rat>& row) const;  // row * this
  Matrix mul(const Matrix& o) const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

ColVec ones(int n);
Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b);

// Exact linear span of vectors in Q^dim with incremental insertion.
// The internal basis is kept in reduced row-echelon form, so membership tests
// and the reported basis do not depend on insertion order; the independent
// vectors are additionally retained verbatim, in insertion order.
class Span {
 public:
  explicit Span(int dim) : dim_(dim) {}

  int dim() const { return dim_; }
  int rank() const { return static_cast<int>(rref_.size()); }
  bool contains(const ColVec& v) const;
  // Inserts v if independent of the current span; returns whether it was added.
  bool insert(const ColVec& v);
  const std::vector<ColVec>& originals() const { return originals_; }
  // RREF basis rows: each has a leading 1 at its pivot, pivots strictly
  // increasing, pivot columns zero in every other row.
  std::vector<ColVec> basis_rows() const;

 private:
  // Reduces v in place against the echelon rows; returns the column of the
  // first nonzero entry, or dim_ if v reduced to zero.
  int reduce(ColVec& v) const;

  int dim_;
  std::vector<std::pair<int, ColVec>> rref_;  // (pivot column, row), sorted by pivot
  std::vector<ColVec> originals_;
};

}  // namespace lmdp
