#pragma once

#include <optional>
#include <vector>

#include "gaudin/errors.hpp"
#include "gaudin/rational_function.hpp"

namespace gaudin {

/// A differential operator sum_k C_k(u) d^k/du^k with every coefficient written
/// to the left of the derivative power.
///
/// `C` is any differential ring element: it needs +, -, *, multiplication by
/// its `scalar_type`, and a free `derivative(C)` found by ADL.
template <class C>
class OperatorPencil {
 public:
  using coefficient_type = C;
  using scalar_type = typename C::scalar_type;

  OperatorPencil() = default;
  explicit OperatorPencil(std::vector<C> coeffs) : coeffs_(std::move(coeffs)) {}

  /// d/du - a
  static OperatorPencil first_order(const C& a, const C& identity) { return OperatorPencil({-a, identity}); }

  int order() const { return static_cast<int>(coeffs_.size()) - 1; }
  const C& coefficient(int k) const { return coeffs_.at(static_cast<std::size_t>(k)); }
  const std::vector<C>& coeffs() const { return coeffs_; }

  /// The term sum of a and b. Both pencils must be nonempty.
  friend OperatorPencil operator+(const OperatorPencil& a, const OperatorPencil& b) {
    const OperatorPencil& longer = a.order() >= b.order() ? a : b;
    const OperatorPencil& shorter = a.order() >= b.order() ? b : a;
    std::vector<C> c = longer.coeffs_;
    for (std::size_t k = 0; k < shorter.coeffs_.size(); ++k) c[k] = c[k] + shorter.coeffs_[k];
    return OperatorPencil(std::move(c));
  }
  OperatorPencil operator-() const {
    std::vector<C> c;
    c.reserve(coeffs_.size());
    for (const C& x : coeffs_) c.push_back(-x);
    return OperatorPencil(std::move(c));
  }
  friend OperatorPencil operator-(const OperatorPencil& a, const OperatorPencil& b) { return a + (-b); }

 private:
  std::vector<C> coeffs_;
};

namespace detail {

inline long binomial(int n, int k) {
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace detail

/// A o B, normal ordered with d o f = f d + f'.
template <class C>
OperatorPencil<C> compose(const OperatorPencil<C>& a, const OperatorPencil<C>& b) {
  using S = typename C::scalar_type;
  if (a.coeffs().empty() || b.coeffs().empty()) throw DimensionMismatch("composition with an empty pencil");
  const int oa = a.order();
  const int ob = b.order();
  std::vector<std::optional<C>> out(static_cast<std::size_t>(oa + ob) + 1);
  // derivatives of B's coefficients, computed once per order
  std::vector<std::vector<C>> b_derivs(static_cast<std::size_t>(ob) + 1);
  for (int k = 0; k <= ob; ++k) {
    auto& chain = b_derivs[static_cast<std::size_t>(k)];
    chain.push_back(b.coefficient(k));
    for (int r = 1; r <= oa; ++r) chain.push_back(derivative(chain.back()));
  }
  for (int i = 0; i <= oa; ++i) {
    for (int k = 0; k <= ob; ++k) {
      for (int r = 0; r <= i; ++r) {
        C term = a.coefficient(i) * b_derivs[static_cast<std::size_t>(k)][static_cast<std::size_t>(r)];
        const long c = detail::binomial(i, r);
        if (c != 1) term = S(c) * term;
        auto& slot = out[static_cast<std::size_t>(i - r + k)];
        if (slot) {
          *slot = *slot + term;
        } else {
          slot = std::move(term);
        }
      }
    }
  }
  std::vector<C> coeffs;
  coeffs.reserve(out.size());
  for (auto& s : out) coeffs.push_back(std::move(*s));
  return OperatorPencil<C>(std::move(coeffs));
}

/// Applies a scalar pencil to a function f: sum_k C_k f^{(k)}.
template <class C, class F>
F apply(const OperatorPencil<C>& p, const F& f) {
  F acc = p.coefficient(0) * f;
  F d = f;
  for (int k = 1; k <= p.order(); ++k) {
    d = derivative(d);
    acc = acc + p.coefficient(k) * d;
  }
  return acc;
}

}  // namespace gaudin
