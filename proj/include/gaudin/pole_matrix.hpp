#pragma once

#include <memory>
#include <vector>

#include "gaudin/matrix.hpp"
#include "gaudin/rational_function.hpp"

namespace gaudin {

/// Matrix-valued rational function A(u) / Q(u)^p, where A is a matrix polynomial
/// with sparse coefficients and Q = prod_s (u - z_s) is shared by all values
/// built from the same sites. The representation is not reduced.
template <class T>
class PoleMatrix {
 public:
  using scalar_type = T;

  PoleMatrix() = default;
  PoleMatrix(std::shared_ptr<const Polynomial<T>> base, std::size_t dim, std::vector<SparseMatrix<T>> numerator,
             int power)
      : base_(std::move(base)), dim_(dim), num_(std::move(numerator)), power_(power) {
    trim();
  }

  static PoleMatrix identity(std::shared_ptr<const Polynomial<T>> base, std::size_t dim) {
    return PoleMatrix(std::move(base), dim, {SparseMatrix<T>::identity(dim)}, 0);
  }
  /// scalar rational function f/Q^p times the identity
  static PoleMatrix scalar(std::shared_ptr<const Polynomial<T>> base, std::size_t dim, const Polynomial<T>& f, int power) {
    std::vector<SparseMatrix<T>> num;
    for (const T& c : f.coeffs()) num.push_back(c * SparseMatrix<T>::identity(dim));
    return PoleMatrix(std::move(base), dim, std::move(num), power);
  }

  std::size_t dim() const { return dim_; }
  int power() const { return power_; }
  const std::vector<SparseMatrix<T>>& numerator() const { return num_; }
  const Polynomial<T>& base() const { return *base_; }
  std::shared_ptr<const Polynomial<T>> base_ptr() const { return base_; }
  bool is_zero() const { return num_.empty(); }

  template <class U>
  SparseMatrix<U> evaluate(const U& u) const {
    SparseMatrix<U> acc(dim_, dim_);
    U pw = U(1);
    for (const auto& a : num_) {
      acc += pw * a.template cast<U>();
      pw = pw * u;
    }
    const U q = base_->template evaluate<U>(u);
    if (gaudin::is_zero(q) && power_ > 0) throw PoleEvaluation("matrix function evaluated at a site");
    U qp = U(1);
    for (int k = 0; k < power_; ++k) qp = qp * q;
    return (U(1) / qp) * acc;
  }

  /// Coefficients of u^{-j}, j = 0..j_max.
  std::vector<SparseMatrix<T>> series_at_infinity(int j_max) const {
    std::vector<SparseMatrix<T>> out(static_cast<std::size_t>(j_max) + 1, SparseMatrix<T>(dim_, dim_));
    if (is_zero()) return out;
    const int deg = static_cast<int>(num_.size()) - 1;
    const auto c = gaudin::series_at_infinity(RationalFunction<T>(Polynomial<T>::one(), base_->pow(power_)), j_max + deg);
    for (int j = 0; j <= j_max; ++j)
      for (int k = 0; k <= deg; ++k) {
        const T& ck = c[static_cast<std::size_t>(j + k)];
        if (!gaudin::is_zero(ck)) out[static_cast<std::size_t>(j)] += ck * num_[static_cast<std::size_t>(k)];
      }
    return out;
  }

  PoleMatrix operator-() const {
    std::vector<SparseMatrix<T>> n;
    n.reserve(num_.size());
    for (const auto& a : num_) n.push_back(T(-1) * a);
    return PoleMatrix(base_, dim_, std::move(n), power_);
  }

  friend PoleMatrix operator+(const PoleMatrix& a, const PoleMatrix& b) {
    const int p = std::max(a.power_, b.power_);
    auto na = a.lifted(p - a.power_);
    const auto nb = b.lifted(p - b.power_);
    if (na.size() < nb.size()) na.resize(nb.size(), SparseMatrix<T>(a.dim_, a.dim_));
    for (std::size_t k = 0; k < nb.size(); ++k) na[k] += nb[k];
    return PoleMatrix(a.base_ ? a.base_ : b.base_, a.dim_, std::move(na), p);
  }
  friend PoleMatrix operator-(const PoleMatrix& a, const PoleMatrix& b) { return a + (-b); }

  friend PoleMatrix operator*(const PoleMatrix& a, const PoleMatrix& b) {
    if (a.dim_ != b.dim_) throw DimensionMismatch("matrix function product");
    if (a.is_zero() || b.is_zero()) return PoleMatrix(a.base_, a.dim_, {}, 0);
    std::vector<SparseMatrix<T>> n(a.num_.size() + b.num_.size() - 1, SparseMatrix<T>(a.dim_, a.dim_));
    for (std::size_t i = 0; i < a.num_.size(); ++i) {
      if (a.num_[i].is_zero()) continue;
      for (std::size_t j = 0; j < b.num_.size(); ++j)
        if (!b.num_[j].is_zero()) n[i + j] += a.num_[i] * b.num_[j];
    }
    return PoleMatrix(a.base_, a.dim_, std::move(n), a.power_ + b.power_);
  }
  friend PoleMatrix operator*(const T& c, const PoleMatrix& a) {
    std::vector<SparseMatrix<T>> n;
    n.reserve(a.num_.size());
    for (const auto& m : a.num_) n.push_back(c * m);
    return PoleMatrix(a.base_, a.dim_, std::move(n), a.power_);
  }

  /// (A' Q - p A Q') / Q^{p+1}
  friend PoleMatrix derivative(const PoleMatrix& f) {
    std::vector<SparseMatrix<T>> da;
    for (std::size_t k = 1; k < f.num_.size(); ++k) da.push_back(T(static_cast<long>(k)) * f.num_[k]);
    if (f.power_ == 0) return PoleMatrix(f.base_, f.dim_, std::move(da), 0);
    const auto& q = *f.base_;
    auto t1 = multiply(da, q, f.dim_);
    const auto t2 = multiply(f.num_, T(-f.power_) * derivative(q), f.dim_);
    if (t1.size() < t2.size()) t1.resize(t2.size(), SparseMatrix<T>(f.dim_, f.dim_));
    for (std::size_t k = 0; k < t2.size(); ++k) t1[k] += t2[k];
    return PoleMatrix(f.base_, f.dim_, std::move(t1), f.power_ + 1);
  }

  /// Applies `op` to every numerator coefficient (e.g. a change of basis);
  /// the result lives on a space of dimension `new_dim`.
  template <class Op>
  PoleMatrix map_numerator(Op&& op, std::size_t new_dim) const {
    std::vector<SparseMatrix<T>> n;
    n.reserve(num_.size());
    for (const auto& a : num_) n.push_back(op(a));
    return PoleMatrix(base_, new_dim, std::move(n), power_);
  }

 private:
  static std::vector<SparseMatrix<T>> multiply(const std::vector<SparseMatrix<T>>& a, const Polynomial<T>& p,
                                               std::size_t dim) {
    if (a.empty() || p.is_zero()) return {};
    std::vector<SparseMatrix<T>> out(a.size() + static_cast<std::size_t>(p.degree()), SparseMatrix<T>(dim, dim));
    for (std::size_t k = 0; k < a.size(); ++k)
      for (int m = 0; m <= p.degree(); ++m)
        if (!gaudin::is_zero(p[m])) out[k + static_cast<std::size_t>(m)] += p[m] * a[k];
    return out;
  }

  std::vector<SparseMatrix<T>> lifted(int extra) const {
    if (extra == 0 || num_.empty()) return num_;
    return multiply(num_, base_->pow(extra), dim_);
  }

  void trim() {
    while (!num_.empty() && num_.back().is_zero()) num_.pop_back();
  }

  std::shared_ptr<const Polynomial<T>> base_;
  std::size_t dim_ = 0;
  std::vector<SparseMatrix<T>> num_;
  int power_ = 0;
};

}  // namespace gaudin
