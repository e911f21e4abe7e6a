#pragma once

#include <algorithm>
#include <initializer_list>
#include <utility>
#include <vector>

#include "gaudin/errors.hpp"
#include "gaudin/scalar.hpp"

namespace gaudin {

/// Dense univariate polynomial in u, coefficients in ascending powers.
/// Trailing exact zeros are trimmed, so the zero polynomial has no coefficients.
template <class T>
class Polynomial {
 public:
  using scalar_type = T;

  Polynomial() = default;
  explicit Polynomial(std::vector<T> coeffs) : coeffs_(std::move(coeffs)) { trim(); }
  Polynomial(std::initializer_list<T> coeffs) : coeffs_(coeffs) { trim(); }

  static Polynomial constant(const T& c) { return Polynomial(std::vector<T>{c}); }
  static Polynomial one() { return constant(T(1)); }
  static Polynomial monomial(int k, const T& c = T(1)) {
    std::vector<T> v(static_cast<std::size_t>(k) + 1, T(0));
    v.back() = c;
    return Polynomial(std::move(v));
  }
  /// u - a
  static Polynomial linear_factor(const T& a) { return Polynomial({T(-a), T(1)}); }
  static Polynomial from_roots(const std::vector<T>& roots) {
    Polynomial p = one();
    for (const T& r : roots) p = p * linear_factor(r);
    return p;
  }

  /// -1 for the zero polynomial.
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const std::vector<T>& coeffs() const { return coeffs_; }

  T operator[](int k) const {
    if (k < 0 || k > degree()) return T(0);
    return coeffs_[static_cast<std::size_t>(k)];
  }
  const T& leading() const { return coeffs_.back(); }

  template <class U>
  U evaluate(const U& x) const {
    U acc = U(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + scalar_cast<U>(*it);
    return acc;
  }
  T operator()(const T& x) const { return evaluate<T>(x); }

  Polynomial operator-() const {
    std::vector<T> v(coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = -coeffs_[k];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<T> v(std::max(a.coeffs_.size(), b.coeffs_.size()), T(0));
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) v[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) v[k] += b.coeffs_[k];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<T> v(a.coeffs_.size() + b.coeffs_.size() - 1, T(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      if (gaudin::is_zero(a.coeffs_[i])) continue;
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) v[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const T& c, const Polynomial& p) {
    std::vector<T> v(p.coeffs_.size());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = c * p.coeffs_[k];
    return Polynomial(std::move(v));
  }
  friend Polynomial operator*(const Polynomial& p, const T& c) { return c * p; }
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }

  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }

  Polynomial pow(int e) const {
    Polynomial r = one();
    for (int k = 0; k < e; ++k) r = r * *this;
    return r;
  }

  /// Quotient and remainder; the divisor must be nonzero.
  std::pair<Polynomial, Polynomial> divmod(const Polynomial& d) const {
    if (d.is_zero()) throw DivisionByZero("polynomial division by zero");
    std::vector<T> rem = coeffs_;
    if (degree() < d.degree()) return {Polynomial{}, *this};
    std::vector<T> quot(static_cast<std::size_t>(degree() - d.degree()) + 1, T(0));
    const T lead_inv = T(1) / d.leading();
    for (int k = degree() - d.degree(); k >= 0; --k) {
      const T q = rem[static_cast<std::size_t>(k + d.degree())] * lead_inv;
      quot[static_cast<std::size_t>(k)] = q;
      if (gaudin::is_zero(q)) continue;
      for (int j = 0; j <= d.degree(); ++j) rem[static_cast<std::size_t>(k + j)] -= q * d.coeffs_[static_cast<std::size_t>(j)];
      rem[static_cast<std::size_t>(k + d.degree())] = T(0);
    }
    return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
  }

  Polynomial monic() const {
    if (is_zero()) return *this;
    return (T(1) / leading()) * *this;
  }

 private:
  void trim() {
    while (!coeffs_.empty() && gaudin::is_zero(coeffs_.back())) coeffs_.pop_back();
  }

  std::vector<T> coeffs_;
};

template <class T>
Polynomial<T> derivative(const Polynomial<T>& p) {
  if (p.degree() <= 0) return {};
  std::vector<T> v(static_cast<std::size_t>(p.degree()));
  for (int k = 1; k <= p.degree(); ++k) v[static_cast<std::size_t>(k - 1)] = T(k) * p[k];
  return Polynomial<T>(std::move(v));
}

template <class T>
Polynomial<T> derivative(const Polynomial<T>& p, int order) {
  Polynomial<T> r = p;
  for (int k = 0; k < order; ++k) r = derivative(r);
  return r;
}

/// Monic gcd by the Euclidean algorithm; meaningful in exact arithmetic only.
template <class T>
Polynomial<T> gcd(Polynomial<T> a, Polynomial<T> b) {
  static_assert(is_exact_v<T>, "Euclidean gcd needs exact arithmetic");
  while (!b.is_zero()) {
    auto r = a.divmod(b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

template <class To, class From>
Polynomial<To> polynomial_cast(const Polynomial<From>& p) {
  std::vector<To> v;
  v.reserve(p.coeffs().size());
  for (const From& c : p.coeffs()) v.push_back(scalar_cast<To>(c));
  return Polynomial<To>(std::move(v));
}

/// max |coefficient|, 0 for the zero polynomial.
template <class T>
double max_abs_coeff(const Polynomial<T>& p) {
  double m = 0.0;
  for (const T& c : p.coeffs()) m = std::max(m, magnitude(c));
  return m;
}

}  // namespace gaudin
