#pragma once

#include <vector>

#include "gaudin/matrix.hpp"

namespace gaudin {

/// Reduced row echelon form. Exact scalars pivot on the first nonzero entry;
/// floating scalars use partial pivoting and treat entries below
/// `tol * max|entry|` as zero.
template <class T>
struct RowEchelon {
  Matrix<T> reduced;
  std::vector<std::size_t> pivots;
  std::size_t rank() const { return pivots.size(); }
};

template <class T>
RowEchelon<T> row_echelon(Matrix<T> a, double tol = 1e-12) {
  const double cutoff = is_exact_v<T> ? 0.0 : tol * std::max(a.max_abs(), 1e-300);
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < a.cols() && row < a.rows(); ++col) {
    std::size_t best = a.rows();
    double best_mag = cutoff;
    for (std::size_t i = row; i < a.rows(); ++i) {
      if constexpr (is_exact_v<T>) {
        if (!is_zero(a(i, col))) {
          best = i;
          break;
        }
      } else {
        const double m = magnitude(a(i, col));
        if (m > best_mag) {
          best_mag = m;
          best = i;
        }
      }
    }
    if (best == a.rows()) {
      if constexpr (!is_exact_v<T>)
        for (std::size_t i = row; i < a.rows(); ++i) a(i, col) = T(0);
      continue;
    }
    if (best != row)
      for (std::size_t j = 0; j < a.cols(); ++j) std::swap(a(row, j), a(best, j));
    const T inv = T(1) / a(row, col);
    for (std::size_t j = col; j < a.cols(); ++j) a(row, j) *= inv;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      if (i == row || is_zero(a(i, col))) continue;
      const T f = a(i, col);
      for (std::size_t j = col; j < a.cols(); ++j) a(i, j) -= f * a(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return {std::move(a), std::move(pivots)};
}

template <class T>
std::size_t rank(const Matrix<T>& a, double tol = 1e-12) {
  return row_echelon(a, tol).rank();
}

/// Columns form a basis of {x : a x = 0}.
template <class T>
Matrix<T> nullspace(const Matrix<T>& a, double tol = 1e-12) {
  const auto ech = row_echelon(a, tol);
  std::vector<char> is_pivot(a.cols(), 0);
  for (std::size_t p : ech.pivots) is_pivot[p] = 1;
  std::vector<std::vector<T>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<T> v(a.cols(), T(0));
    v[free] = T(1);
    for (std::size_t r = 0; r < ech.pivots.size(); ++r) v[ech.pivots[r]] = -ech.reduced(r, free);
    basis.push_back(std::move(v));
  }
  return Matrix<T>::from_columns(a.cols(), basis);
}

/// Solves a x = b for every column of b. `a` must have full column rank and
/// the system must be consistent; throws DimensionMismatch otherwise.
template <class T>
Matrix<T> solve(const Matrix<T>& a, const Matrix<T>& b, double tol = 1e-12) {
  if (a.rows() != b.rows()) throw DimensionMismatch("solve: row counts differ");
  Matrix<T> aug(a.rows(), a.cols() + b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < a.cols(); ++j) aug(i, j) = a(i, j);
    for (std::size_t j = 0; j < b.cols(); ++j) aug(i, a.cols() + j) = b(i, j);
  }
  const auto ech = row_echelon(std::move(aug), tol);
  for (std::size_t r = 0; r < ech.pivots.size(); ++r)
    if (ech.pivots[r] != r || r >= a.cols()) throw DimensionMismatch("solve: system is inconsistent or rank deficient");
  if (ech.rank() < a.cols()) throw DimensionMismatch("solve: rank deficient");
  Matrix<T> x(a.cols(), b.cols());
  for (std::size_t i = 0; i < a.cols(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) x(i, j) = ech.reduced(i, a.cols() + j);
  return x;
}

template <class T>
T determinant(Matrix<T> a) {
  if (a.rows() != a.cols()) throw DimensionMismatch("determinant of a non-square matrix");
  const std::size_t n = a.rows();
  T det = T(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t best = n;
    double best_mag = 0.0;
    for (std::size_t i = col; i < n; ++i) {
      const double m = magnitude(a(i, col));
      if constexpr (is_exact_v<T>) {
        if (!is_zero(a(i, col))) {
          best = i;
          break;
        }
      } else if (m > best_mag) {
        best_mag = m;
        best = i;
      }
    }
    if (best == n) return T(0);
    if (best != col) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(col, j), a(best, j));
      det = -det;
    }
    det *= a(col, col);
    const T inv = T(1) / a(col, col);
    for (std::size_t i = col + 1; i < n; ++i) {
      if (is_zero(a(i, col))) continue;
      const T f = a(i, col) * inv;
      for (std::size_t j = col; j < n; ++j) a(i, j) -= f * a(col, j);
    }
  }
  return det;
}

}  // namespace gaudin
