#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "gaudin/errors.hpp"
#include "gaudin/scalar.hpp"

namespace gaudin {

/// Row-major dense matrix.
template <class T>
class Matrix {
 public:
  using scalar_type = T;

  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }
  /// Builds a matrix whose columns are the given vectors (all of length `rows`).
  static Matrix from_columns(std::size_t rows, const std::vector<std::vector<T>>& cols) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j)
      for (std::size_t i = 0; i < rows; ++i) m(i, j) = cols[j][i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::vector<T> column(std::size_t j) const {
    std::vector<T> v(rows_);
    for (std::size_t i = 0; i < rows_; ++i) v[i] = (*this)(i, j);
    return v;
  }

  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  bool is_zero() const {
    return std::all_of(data_.begin(), data_.end(), [](const T& x) { return gaudin::is_zero(x); });
  }
  double max_abs() const {
    double m = 0.0;
    for (const T& x : data_) m = std::max(m, magnitude(x));
    return m;
  }

  friend Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw DimensionMismatch("matrix product");
    Matrix c(a.rows_, b.cols_);
    for (std::size_t i = 0; i < a.rows_; ++i)
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const T& aik = a(i, k);
        if (gaudin::is_zero(aik)) continue;
        for (std::size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
      }
    return c;
  }
  friend Matrix operator+(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix sum");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] += b.data_[k];
    return a;
  }
  friend Matrix operator-(Matrix a, const Matrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw DimensionMismatch("matrix difference");
    for (std::size_t k = 0; k < a.data_.size(); ++k) a.data_[k] -= b.data_[k];
    return a;
  }
  friend Matrix operator*(const T& c, Matrix a) {
    for (T& x : a.data_) x *= c;
    return a;
  }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

  std::vector<T> apply(std::span<const T> v) const {
    if (v.size() != cols_) throw DimensionMismatch("matrix-vector product");
    std::vector<T> out(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
    return out;
  }

  template <class U>
  Matrix<U> cast() const {
    Matrix<U> m(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) m(i, j) = scalar_cast<U>((*this)(i, j));
    return m;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

/// Sparse matrix stored by rows; every row holds (column, value) pairs sorted by
/// column with no explicit zeros.
template <class T>
class SparseMatrix {
 public:
  using scalar_type = T;
  using Entry = std::pair<std::size_t, T>;

  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols) : cols_(cols), rows_(rows) {}

  static SparseMatrix identity(std::size_t n) {
    SparseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.rows_[i].emplace_back(i, T(1));
    return m;
  }
  static SparseMatrix from_dense(const Matrix<T>& d) {
    SparseMatrix m(d.rows(), d.cols());
    for (std::size_t i = 0; i < d.rows(); ++i)
      for (std::size_t j = 0; j < d.cols(); ++j)
        if (!gaudin::is_zero(d(i, j))) m.rows_[i].emplace_back(j, d(i, j));
    return m;
  }

  std::size_t rows() const { return rows_.size(); }
  std::size_t cols() const { return cols_; }
  const std::vector<Entry>& row(std::size_t i) const { return rows_[i]; }

  /// Adds `value` to entry (i, j).
  void add(std::size_t i, std::size_t j, const T& value) {
    if (gaudin::is_zero(value)) return;
    auto& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
    if (it != r.end() && it->first == j) {
      it->second += value;
      if (gaudin::is_zero(it->second)) r.erase(it);
    } else {
      r.insert(it, Entry{j, value});
    }
  }

  T at(std::size_t i, std::size_t j) const {
    const auto& r = rows_[i];
    auto it = std::lower_bound(r.begin(), r.end(), j, [](const Entry& e, std::size_t c) { return e.first < c; });
    return (it != r.end() && it->first == j) ? it->second : T(0);
  }

  std::size_t nonzeros() const {
    std::size_t n = 0;
    for (const auto& r : rows_) n += r.size();
    return n;
  }
  bool is_zero() const {
    return std::all_of(rows_.begin(), rows_.end(), [](const auto& r) { return r.empty(); });
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& r : rows_)
      for (const auto& e : r) m = std::max(m, magnitude(e.second));
    return m;
  }

  Matrix<T> to_dense() const {
    Matrix<T> d(rows(), cols_);
    for (std::size_t i = 0; i < rows(); ++i)
      for (const auto& [j, v] : rows_[i]) d(i, j) = v;
    return d;
  }

  SparseMatrix transpose() const {
    SparseMatrix t(cols_, rows());
    for (std::size_t i = 0; i < rows(); ++i)
      for (const auto& [j, v] : rows_[i]) t.rows_[j].emplace_back(i, v);
    return t;
  }

  friend SparseMatrix operator*(const SparseMatrix& a, const SparseMatrix& b) {
    if (a.cols_ != b.rows()) throw DimensionMismatch("sparse matrix product");
    SparseMatrix c(a.rows(), b.cols_);
    std::vector<T> acc(b.cols_, T(0));
    std::vector<char> touched(b.cols_, 0);
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      cols.clear();
      for (const auto& [k, aik] : a.rows_[i]) {
        for (const auto& [j, bkj] : b.rows_[k]) {
          if (!touched[j]) {
            touched[j] = 1;
            cols.push_back(j);
            acc[j] = aik * bkj;
          } else {
            acc[j] += aik * bkj;
          }
        }
      }
      std::sort(cols.begin(), cols.end());
      auto& out = c.rows_[i];
      for (std::size_t j : cols) {
        if (!gaudin::is_zero(acc[j])) out.emplace_back(j, acc[j]);
        acc[j] = T(0);
        touched[j] = 0;
      }
    }
    return c;
  }

  friend SparseMatrix operator+(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, false); }
  friend SparseMatrix operator-(const SparseMatrix& a, const SparseMatrix& b) { return combine(a, b, true); }
  friend SparseMatrix operator*(const T& c, const SparseMatrix& a) {
    SparseMatrix m(a.rows(), a.cols_);
    if (gaudin::is_zero(c)) return m;
    for (std::size_t i = 0; i < a.rows(); ++i) {
      m.rows_[i].reserve(a.rows_[i].size());
      for (const auto& [j, v] : a.rows_[i]) m.rows_[i].emplace_back(j, c * v);
    }
    return m;
  }
  SparseMatrix& operator+=(const SparseMatrix& o) { return *this = *this + o; }
  SparseMatrix& operator-=(const SparseMatrix& o) { return *this = *this - o; }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.cols_ == b.cols_ && a.rows_ == b.rows_;
  }

  template <class Vec>
  Vec apply(const Vec& v) const {
    using U = typename Vec::value_type;
    if (v.size() != cols_) throw DimensionMismatch("sparse matrix-vector product");
    Vec out(rows(), U(0));
    for (std::size_t i = 0; i < rows(); ++i)
      for (const auto& [j, x] : rows_[i]) out[i] += scalar_cast<U>(x) * v[j];
    return out;
  }

  /// Sub-block with the given row and column index lists.
  Matrix<T> block(const std::vector<std::size_t>& row_idx, const std::vector<std::size_t>& col_idx) const {
    std::vector<std::ptrdiff_t> col_pos(cols_, -1);
    for (std::size_t k = 0; k < col_idx.size(); ++k) col_pos[col_idx[k]] = static_cast<std::ptrdiff_t>(k);
    Matrix<T> m(row_idx.size(), col_idx.size());
    for (std::size_t r = 0; r < row_idx.size(); ++r)
      for (const auto& [j, v] : rows_[row_idx[r]])
        if (col_pos[j] >= 0) m(r, static_cast<std::size_t>(col_pos[j])) = v;
    return m;
  }

  template <class U>
  SparseMatrix<U> cast() const {
    SparseMatrix<U> m(rows(), cols_);
    for (std::size_t i = 0; i < rows(); ++i)
      for (const auto& [j, v] : rows_[i]) m.add(i, j, scalar_cast<U>(v));
    return m;
  }

  /// Kronecker product a (x) b; the index of a is the slower one.
  friend SparseMatrix kron(const SparseMatrix& a, const SparseMatrix& b) {
    SparseMatrix k(a.rows() * b.rows(), a.cols_ * b.cols_);
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t p = 0; p < b.rows(); ++p) {
        auto& out = k.rows_[i * b.rows() + p];
        for (const auto& [j, av] : a.rows_[i])
          for (const auto& [q, bv] : b.rows_[p]) out.emplace_back(j * b.cols_ + q, av * bv);
      }
    return k;
  }

 private:
  static SparseMatrix combine(const SparseMatrix& a, const SparseMatrix& b, bool subtract) {
    if (a.rows() != b.rows() || a.cols_ != b.cols_) throw DimensionMismatch("sparse matrix sum");
    SparseMatrix c(a.rows(), a.cols_);
    for (std::size_t i = 0; i < a.rows(); ++i) {
      const auto& ra = a.rows_[i];
      const auto& rb = b.rows_[i];
      auto& out = c.rows_[i];
      out.reserve(ra.size() + rb.size());
      std::size_t x = 0, y = 0;
      while (x < ra.size() || y < rb.size()) {
        if (y == rb.size() || (x < ra.size() && ra[x].first < rb[y].first)) {
          out.push_back(ra[x++]);
        } else if (x == ra.size() || rb[y].first < ra[x].first) {
          out.emplace_back(rb[y].first, subtract ? T(-rb[y].second) : rb[y].second);
          ++y;
        } else {
          T v = subtract ? T(ra[x].second - rb[y].second) : T(ra[x].second + rb[y].second);
          if (!gaudin::is_zero(v)) out.emplace_back(ra[x].first, std::move(v));
          ++x;
          ++y;
        }
      }
    }
    return c;
  }

  std::size_t cols_ = 0;
  std::vector<std::vector<Entry>> rows_;
};

/// Commutator ab - ba.
template <class M>
M commutator(const M& a, const M& b) {
  return a * b - b * a;
}

}  // namespace gaudin
