#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "orbicert/error.hpp"
#include "orbicert/prime_field.hpp"
#include "orbicert/rational.hpp"

namespace orbicert {

/// Dense row-major matrix over a single field. The fill value doubles as the
/// field's zero, which lets prime-field matrices know their modulus even when
/// they have no entries.
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T zero = T{})
      : rows_(rows), cols_(cols), zero_(zero), data_(rows * cols, zero) {}

  static Matrix identity(std::size_t n, const T& zero = T{}) {
    Matrix m(n, n, zero);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = one_like(zero);
    return m;
  }

  static Matrix from_rows(const std::vector<std::vector<T>>& rows,
                          const T& zero = T{}) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.front().size();
    Matrix m(r, c, zero);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw PreconditionError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  const T& zero() const { return zero_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::vector<T> row(std::size_t r) const {
    return {data_.begin() + r * cols_, data_.begin() + (r + 1) * cols_};
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  Matrix operator*(const Matrix& o) const {
    if (cols_ != o.rows_) throw PreconditionError("matrix shape mismatch");
    Matrix p(rows_, o.cols_, zero_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t l = 0; l < cols_; ++l) {
        const T& a = (*this)(i, l);
        if (is_zero(a)) continue;
        for (std::size_t j = 0; j < o.cols_; ++j) p(i, j) += a * o(l, j);
      }
    return p;
  }

  bool operator==(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && data_ == o.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  T zero_{};
  std::vector<T> data_;
};

using RationalMatrix = Matrix<Rational>;
using FpMatrix = Matrix<Fp>;

/// Rank together with the pivots chosen by full-pivoting elimination. The
/// submatrix on (pivot_rows, pivot_cols) is nonsingular.
struct RankProfile {
  std::size_t rank = 0;
  std::vector<std::size_t> pivot_rows;
  std::vector<std::size_t> pivot_cols;
};

namespace detail {

// Bareiss elimination over a field; exact division by the previous pivot.
template <class T>
T bareiss_det(Matrix<T> m) {
  const std::size_t n = m.rows();
  T one = one_like(m.zero());
  if (n == 0) return one;
  bool negate = false;
  T prev = one;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && is_zero(m(p, k))) ++p;
    if (p == n) return m.zero();
    if (p != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(m(p, j), m(k, j));
      negate = !negate;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        T v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        m(i, j) = v / prev;
      }
    }
    prev = m(k, k);
  }
  T d = m(n - 1, n - 1);
  return negate ? T(-d) : d;
}

}  // namespace detail

Rational det(const RationalMatrix& m);
Fp det(const FpMatrix& m);

/// Full pivoting: the pivot is the first nonzero entry, in row-major order,
/// of the remaining submatrix (smallest row, then smallest column).
template <class T>
RankProfile rank_profile(const Matrix<T>& input) {
  Matrix<T> m = input;
  const std::size_t rows = m.rows(), cols = m.cols();
  std::vector<std::size_t> row_of(rows), col_of(cols);
  for (std::size_t i = 0; i < rows; ++i) row_of[i] = i;
  for (std::size_t j = 0; j < cols; ++j) col_of[j] = j;

  RankProfile out;
  for (std::size_t r = 0; r < std::min(rows, cols); ++r) {
    // Search in terms of original indices so ties resolve deterministically.
    std::optional<std::pair<std::size_t, std::size_t>> best;
    for (std::size_t i = r; i < rows; ++i)
      for (std::size_t j = r; j < cols; ++j) {
        if (is_zero(m(i, j))) continue;
        std::pair<std::size_t, std::size_t> key{row_of[i], col_of[j]};
        if (!best || key < std::pair{row_of[best->first], col_of[best->second]})
          best = std::pair{i, j};
      }
    if (!best) break;
    auto [pi, pj] = *best;
    if (pi != r) {
      for (std::size_t j = 0; j < cols; ++j) std::swap(m(pi, j), m(r, j));
      std::swap(row_of[pi], row_of[r]);
    }
    if (pj != r) {
      for (std::size_t i = 0; i < rows; ++i) std::swap(m(i, pj), m(i, r));
      std::swap(col_of[pj], col_of[r]);
    }
    out.pivot_rows.push_back(row_of[r]);
    out.pivot_cols.push_back(col_of[r]);
    T inv = inverse(m(r, r));
    for (std::size_t i = r + 1; i < rows; ++i) {
      if (is_zero(m(i, r))) continue;
      T f = m(i, r) * inv;
      for (std::size_t j = r; j < cols; ++j) m(i, j) -= f * m(r, j);
    }
    ++out.rank;
  }
  return out;
}

template <class T>
std::size_t rank(const Matrix<T>& m) {
  return rank_profile(m).rank;
}

/// Submatrix on the given index sets, taken in ascending order.
template <class T>
Matrix<T> submatrix(const Matrix<T>& m, std::span<const std::size_t> rows,
                    std::span<const std::size_t> cols) {
  auto sorted = [](std::span<const std::size_t> idx, std::size_t bound) {
    std::vector<std::size_t> v(idx.begin(), idx.end());
    std::sort(v.begin(), v.end());
    if (std::adjacent_find(v.begin(), v.end()) != v.end())
      throw PreconditionError("repeated index in index set");
    if (!v.empty() && v.back() >= bound)
      throw PreconditionError("index out of range");
    return v;
  };
  auto r = sorted(rows, m.rows());
  auto c = sorted(cols, m.cols());
  Matrix<T> s(r.size(), c.size(), m.zero());
  for (std::size_t i = 0; i < r.size(); ++i)
    for (std::size_t j = 0; j < c.size(); ++j) s(i, j) = m(r[i], c[j]);
  return s;
}

/// Determinant of the submatrix on (rows, cols), ascending order, no sign.
template <class T>
T minor(const Matrix<T>& m, std::span<const std::size_t> rows,
        std::span<const std::size_t> cols) {
  if (rows.size() != cols.size())
    throw PreconditionError("minor: |rows| != |cols|");
  return det(submatrix(m, rows, cols));
}

/// Inverse of a square rational matrix, or nullopt when singular.
std::optional<RationalMatrix> inverse(const RationalMatrix& m);

/// Rows spanning { x : m x = 0 }, one per free column of the reduced row
/// echelon form, with a 1 in that free column.
RationalMatrix kernel_basis(const RationalMatrix& m);

FpMatrix reduce_mod_p(const RationalMatrix& m, std::uint64_t p);

}  // namespace orbicert
