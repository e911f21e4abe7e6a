#pragma once

#include <vector>

#include "gaudin/polynomial.hpp"

namespace gaudin {

/// num(u)/den(u). Exact instances are kept reduced with a monic denominator;
/// floating instances only have their denominator scaled to be monic.
template <class T>
class RationalFunction {
 public:
  using scalar_type = T;

  RationalFunction() : num_(), den_(Polynomial<T>::one()) {}
  RationalFunction(Polynomial<T> num) : num_(std::move(num)), den_(Polynomial<T>::one()) {}  // NOLINT
  RationalFunction(Polynomial<T> num, Polynomial<T> den) : num_(std::move(num)), den_(std::move(den)) {
    if (den_.is_zero()) throw DivisionByZero("rational function with zero denominator");
    normalize();
  }
  static RationalFunction constant(const T& c) { return RationalFunction(Polynomial<T>::constant(c)); }

  /// f'/f
  static RationalFunction log_derivative(const Polynomial<T>& f) { return RationalFunction(derivative(f), f); }

  const Polynomial<T>& num() const { return num_; }
  const Polynomial<T>& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }

  template <class U>
  U evaluate(const U& x) const {
    const U d = den_.template evaluate<U>(x);
    if (gaudin::is_zero(d)) throw PoleEvaluation("evaluation at a pole");
    return num_.template evaluate<U>(x) / d;
  }
  T operator()(const T& x) const { return evaluate<T>(x); }

  RationalFunction operator-() const { return RationalFunction(-num_, den_, Normalized{}); }
  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.den_ == b.den_) return RationalFunction(a.num_ + b.num_, a.den_);
    return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
  }
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) { return a + (-b); }
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return {};
    return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
  }
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw DivisionByZero("division by the zero rational function");
    return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
  }
  friend RationalFunction operator*(const T& c, const RationalFunction& r) {
    return RationalFunction(c * r.num_, r.den_, Normalized{});
  }
  RationalFunction& operator+=(const RationalFunction& o) { return *this = *this + o; }
  RationalFunction& operator-=(const RationalFunction& o) { return *this = *this - o; }
  RationalFunction& operator*=(const RationalFunction& o) { return *this = *this * o; }

  /// Structural equality. For exact instances this is mathematical equality.
  friend bool operator==(const RationalFunction& a, const RationalFunction& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

 private:
  struct Normalized {};
  RationalFunction(Polynomial<T> num, Polynomial<T> den, Normalized)
      : num_(std::move(num)), den_(std::move(den)) {
    if (num_.is_zero()) den_ = Polynomial<T>::one();
  }

  void normalize() {
    if (num_.is_zero()) {
      den_ = Polynomial<T>::one();
      return;
    }
    if constexpr (is_exact_v<T>) {
      Polynomial<T> g = gcd(num_, den_);
      if (g.degree() > 0) {
        num_ = num_.divmod(g).first;
        den_ = den_.divmod(g).first;
      }
    }
    const T lead = den_.leading();
    if (lead != T(1)) {
      const T inv = T(1) / lead;
      num_ = inv * num_;
      den_ = inv * den_;
    }
  }

  Polynomial<T> num_;
  Polynomial<T> den_;
};

template <class T>
RationalFunction<T> derivative(const RationalFunction<T>& r) {
  if (r.is_zero()) return {};
  return RationalFunction<T>(derivative(r.num()) * r.den() - r.num() * derivative(r.den()), r.den() * r.den());
}

/// Laurent coefficients at u = infinity: entry j of the result is the coefficient
/// of u^{-j}, for j = 0..j_max (entry 0 is the constant term).
/// Throws ImproperRational when deg num > deg den.
template <class T>
std::vector<T> series_at_infinity(const RationalFunction<T>& r, int j_max) {
  std::vector<T> out(static_cast<std::size_t>(j_max) + 1, T(0));
  if (r.is_zero()) return out;
  const int dn = r.num().degree();
  const int dd = r.den().degree();
  if (dn > dd) throw ImproperRational("numerator degree exceeds denominator degree");
  // With x = 1/u: r = x^{dd-dn} * rev(num)(x) / rev(den)(x).
  const int shift = dd - dn;
  std::vector<T> a(static_cast<std::size_t>(j_max) + 1, T(0));
  std::vector<T> b(static_cast<std::size_t>(dd) + 1, T(0));
  for (int k = 0; k <= dn && k <= j_max; ++k) a[static_cast<std::size_t>(k)] = r.num()[dn - k];
  for (int k = 0; k <= dd; ++k) b[static_cast<std::size_t>(k)] = r.den()[dd - k];
  const T b0_inv = T(1) / b[0];
  std::vector<T> q(static_cast<std::size_t>(j_max) + 1, T(0));
  for (int k = 0; k <= j_max; ++k) {
    T acc = a[static_cast<std::size_t>(k)];
    for (int m = 1; m <= k && m <= dd; ++m) acc -= b[static_cast<std::size_t>(m)] * q[static_cast<std::size_t>(k - m)];
    q[static_cast<std::size_t>(k)] = acc * b0_inv;
  }
  for (int j = shift; j <= j_max; ++j) out[static_cast<std::size_t>(j)] = q[static_cast<std::size_t>(j - shift)];
  return out;
}

template <class To, class From>
RationalFunction<To> rational_function_cast(const RationalFunction<From>& r) {
  return RationalFunction<To>(polynomial_cast<To>(r.num()), polynomial_cast<To>(r.den()));
}

}  // namespace gaudin
