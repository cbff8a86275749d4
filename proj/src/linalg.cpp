#include "lmdp/linalg.hpp"

#include <stdexcept>

namespace lmdp {

Matrix Matrix::identity(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

ColVec Matrix::mul(const ColVec& v) const {
  if (static_cast<int>(v.size()) != cols_) throw std::invalid_argument("matrix/vector size mismatch");
  ColVec out(rows_);
  for (int r = 0; r < rows_; ++r) {
    Rat acc;
    for (int c = 0; c < cols_; ++c) {
      const Rat& x = at(r, c);
      if (!x.is_zero() && !v[c].is_zero()) acc += x * v[c];
    }
    out[r] = acc;
  }
  return out;
}

std::vector<Rat> Matrix::mul_row(const std::vector<Rat>& row) const {
  if (static_cast<int>(row.size()) != rows_) throw std::invalid_argument("row/matrix size mismatch");
  std::vector<Rat> out(cols_);
  for (int r = 0; r < rows_; ++r) {
    if (row[r].is_zero()) continue;
    for (int c = 0; c < cols_; ++c) {
      const Rat& x = at(r, c);
      if (!x.is_zero()) out[c] += row[r] * x;
    }
  }
  return out;
}

Matrix Matrix::mul(const Matrix& o) const {
  if (cols_ != o.rows_) throw std::invalid_argument("matrix/matrix size mismatch");
  Matrix out(rows_, o.cols_);
  for (int r = 0; r < rows_; ++r)
    for (int k = 0; k < cols_; ++k) {
      const Rat& x = at(r, k);
      if (x.is_zero()) continue;
      for (int c = 0; c < o.cols_; ++c) {
        const Rat& y = o.at(k, c);
        if (!y.is_zero()) out.at(r, c) += x * y;
      }
    }
  return out;
}

ColVec ones(int n) { return ColVec(n, Rat(1)); }

Rat dot(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("dot size mismatch");
  Rat acc;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!a[i].is_zero() && !b[i].is_zero()) acc += a[i] * b[i];
  return acc;
}

int Span::reduce(ColVec& v) const {
  for (const auto& [pivot, row] : rref_) {
    if (!v[pivot].is_zero()) {
      Rat f = v[pivot];  // row has leading 1 at pivot
      for (int c = pivot; c < dim_; ++c)
        if (!row[c].is_zero()) v[c] -= f * row[c];
    }
  }
  for (int c = 0; c < dim_; ++c)
    if (!v[c].is_zero()) return c;
  return dim_;
}

bool Span::contains(const ColVec& v) const {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("span dimension mismatch");
  ColVec w = v;
  return reduce(w) == dim_;
}

bool Span::insert(const ColVec& v) {
  if (static_cast<int>(v.size()) != dim_) throw std::invalid_argument("span dimension mismatch");
  ColVec w = v;
  int pivot = reduce(w);
  if (pivot == dim_) return false;
  Rat lead = w[pivot];
  for (int c = pivot; c < dim_; ++c)
    if (!w[c].is_zero()) w[c] /= lead;
  // Keep the basis fully reduced: clear the new pivot column from older rows.
  for (auto& [p, row] : rref_) {
    if (!row[pivot].is_zero()) {
      Rat f = row[pivot];
      for (int c = pivot; c < dim_; ++c)
        if (!w[c].is_zero()) row[c] -= f * w[c];
    }
  }
  auto pos = rref_.begin();
  while (pos != rref_.end() && pos->first < pivot) ++pos;
  rref_.insert(pos, {pivot, std::move(w)});
  originals_.push_back(v);
  return true;
}

std::vector<ColVec> Span::basis_rows() const {
  std::vector<ColVec> out;
  out.reserve(rref_.size());
  for (const auto& [p, row] : rref_) out.push_back(row);
  return out;
}

}  // namespace lmdp
