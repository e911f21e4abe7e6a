#pragma once

#include <algorithm>
#include <vector>

#include "gaudin/scalar.hpp"

namespace gaudin {

/// Truncated Taylor expansion f(u0 + h) = sum_k c_k h^k, valid up to h^order.
/// Differentiation lowers the order by one, so composing pencils of total
/// order m needs jets of order m to recover the value at u0.
template <class T>
class Jet {
 public:
  using scalar_type = T;

  Jet() = default;
  explicit Jet(std::vector<T> coeffs) : c_(std::move(coeffs)) {}
  static Jet constant(const T& v, int order) {
    std::vector<T> c(static_cast<std::size_t>(order) + 1, T(0));
    c[0] = v;
    return Jet(std::move(c));
  }
  /// Jet of m / (u - root) at u0.
  static Jet simple_pole(const T& u0, const T& root, const T& m, int order) {
    std::vector<T> c(static_cast<std::size_t>(order) + 1);
    const T inv = T(1) / (u0 - root);
    T pw = m * inv;
    for (int k = 0; k <= order; ++k) {
      c[static_cast<std::size_t>(k)] = pw;
      pw = -pw * inv;
    }
    return Jet(std::move(c));
  }

  int order() const { return static_cast<int>(c_.size()) - 1; }
  const T& value() const { return c_.at(0); }
  const std::vector<T>& coeffs() const { return c_; }

  friend Jet operator+(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<T> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = a.c_[k] + b.c_[k];
    return Jet(std::move(c));
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<T> c(n);
    for (std::size_t k = 0; k < n; ++k) c[k] = a.c_[k] - b.c_[k];
    return Jet(std::move(c));
  }
  Jet operator-() const {
    std::vector<T> c(c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = -c_[k];
    return Jet(std::move(c));
  }
  friend Jet operator*(const Jet& a, const Jet& b) {
    const std::size_t n = std::min(a.c_.size(), b.c_.size());
    std::vector<T> c(n, T(0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; i + j < n; ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Jet(std::move(c));
  }
  friend Jet operator*(const T& s, const Jet& a) {
    std::vector<T> c(a.c_.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = s * a.c_[k];
    return Jet(std::move(c));
  }

 private:
  std::vector<T> c_;
};

template <class T>
Jet<T> derivative(const Jet<T>& j) {
  const auto& c = j.coeffs();
  if (c.size() <= 1) return Jet<T>(std::vector<T>{});
  std::vector<T> d(c.size() - 1);
  for (std::size_t k = 1; k < c.size(); ++k) d[k - 1] = T(static_cast<long>(k)) * c[k];
  return Jet<T>(std::move(d));
}

}  // namespace gaudin
