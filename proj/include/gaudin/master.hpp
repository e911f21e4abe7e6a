#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaudin/jet.hpp"
#include "gaudin/linalg.hpp"
#include "gaudin/pencil.hpp"
#include "gaudin/rational_function.hpp"
#include "gaudin/repr.hpp"

namespace gaudin {

struct GaudinProblem {
  int N = 0;
  std::vector<Partition> lambdas;
  std::vector<int> l;
  std::vector<Complex> z;                        // always filled
  std::optional<std::vector<Rational>> z_exact;  // filled when every site is rational
  Partition lambda_inf;
  int l_total = 0;

  /// Validates partition lengths, l, the weight at infinity and distinct sites.
  static GaudinProblem create(int N, std::vector<Partition> lambdas, std::vector<int> l, std::vector<Rational> z);
  static GaudinProblem create(int N, std::vector<Partition> lambdas, std::vector<int> l, std::vector<Complex> z);

  bool exact() const { return z_exact.has_value(); }
  std::size_t n() const { return lambdas.size(); }
  /// (lambda^(s), alpha_i), s 0-based, i = 1..N
  int pairing(std::size_t s, int i) const;
  /// max(1, max_s |z_s|)
  double scale() const;
  /// Sites in the requested scalar type. Rational requires exact mode.
  template <class T>
  std::vector<T> sites() const;
};

template <>
std::vector<Rational> GaudinProblem::sites<Rational>() const;
template <>
std::vector<Complex> GaudinProblem::sites<Complex>() const;
template <>
std::vector<ComplexLD> GaudinProblem::sites<ComplexLD>() const;

/// Coordinates t^{(i)}_j grouped by color; groups[i-1] has l_i entries.
template <class T>
struct PointConfig {
  std::vector<std::vector<T>> groups;

  std::vector<T> flat() const {
    std::vector<T> out;
    for (const auto& g : groups) out.insert(out.end(), g.begin(), g.end());
    return out;
  }
  static PointConfig unflatten(const std::vector<T>& x, const std::vector<int>& l) {
    PointConfig p;
    std::size_t pos = 0;
    for (int li : l) {
      p.groups.emplace_back(x.begin() + static_cast<std::ptrdiff_t>(pos), x.begin() + static_cast<std::ptrdiff_t>(pos + li));
      pos += static_cast<std::size_t>(li);
    }
    return p;
  }
  template <class U>
  PointConfig<U> cast() const {
    PointConfig<U> p;
    for (const auto& g : groups) {
      p.groups.emplace_back();
      for (const auto& x : g) p.groups.back().push_back(scalar_cast<U>(x));
    }
    return p;
  }
};

/// Flattened variable layout: color and the coupling constants of log Phi.
struct VariableLayout {
  std::vector<int> color;                 // color[a] in 1..N
  std::vector<std::vector<int>> pair;     // exponent of (x_a - x_b) in Phi: 2, -1 or 0
  std::vector<std::vector<int>> site;     // site[a][s] = (lambda^(s), alpha_color)
};

VariableLayout variable_layout(const GaudinProblem& p);

template <class T>
struct LogPhiGradient {
  Complex log_phi;     // sum of exponent * log(difference), principal branches
  std::vector<T> psi;  // flattened Psi_ij
};

struct CriticalOrbit {
  PointConfig<Complex> rep;
  double residual = 0.0;
  Complex hessian;
  bool degenerate = false;
  std::optional<int> milnor;  // 1 when nondegenerate
};

struct SolverConfig {
  std::uint64_t seed = 1;
  std::size_t starts = 0;  // 0: 2000 times the expected count
  double tol_residual = 1e-10;
  double tol_dedup = 1e-8;
  double tol_degenerate = 1e-8;
  double pole_margin = 1e-7;
  int max_iterations = 200;
  std::string precision = "double";  // or "long-double"
  unsigned threads = 1;
};

namespace detail {

template <class T>
void require_in_u(const VariableLayout& lay, const std::vector<T>& x, const std::vector<T>& z) {
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b)
      if (lay.pair[a][b] != 0 && x[a] == x[b]) throw PointNotInU("coordinates " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " collide");
    for (std::size_t s = 0; s < z.size(); ++s)
      if (lay.site[a][s] != 0 && x[a] == z[s]) throw PointNotInU("coordinate " + std::to_string(a + 1) + " hits site " + std::to_string(s + 1));
  }
}

template <class T>
Complex to_c(const T& v) {
  return to_complex(v);
}

}  // namespace detail

/// Psi_a = sum_b c_ab / (x_a - x_b) - sum_s m_as / (x_a - z_s).
template <class T>
std::vector<T> psi_flat(const VariableLayout& lay, const std::vector<T>& x, const std::vector<T>& z) {
  std::vector<T> out(x.size(), T(0));
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = 0; b < x.size(); ++b)
      if (b != a && lay.pair[a][b] != 0) out[a] += T(lay.pair[a][b]) / (x[a] - x[b]);
    for (std::size_t s = 0; s < z.size(); ++s)
      if (lay.site[a][s] != 0) out[a] -= T(lay.site[a][s]) / (x[a] - z[s]);
  }
  return out;
}

/// Second partials of log Phi.
template <class T>
Matrix<T> hessian_flat(const VariableLayout& lay, const std::vector<T>& x, const std::vector<T>& z) {
  const std::size_t m = x.size();
  Matrix<T> h(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    T diag = T(0);
    for (std::size_t b = 0; b < m; ++b) {
      if (b == a || lay.pair[a][b] == 0) continue;
      const T d = x[a] - x[b];
      const T v = T(lay.pair[a][b]) / (d * d);
      h(a, b) = v;
      diag -= v;
    }
    for (std::size_t s = 0; s < z.size(); ++s)
      if (lay.site[a][s] != 0) {
        const T d = x[a] - z[s];
        diag += T(lay.site[a][s]) / (d * d);
      }
    h(a, a) = diag;
  }
  return h;
}

template <class T>
LogPhiGradient<T> log_phi_and_gradient(const GaudinProblem& p, const PointConfig<T>& t) {
  const auto lay = variable_layout(p);
  const auto x = t.flat();
  const auto z = p.sites<T>();
  if (x.size() != static_cast<std::size_t>(p.l_total)) throw DimensionMismatch("point has the wrong number of coordinates");
  detail::require_in_u(lay, x, z);
  LogPhiGradient<T> out;
  out.log_phi = Complex(0.0, 0.0);
  for (std::size_t a = 0; a < x.size(); ++a) {
    for (std::size_t b = a + 1; b < x.size(); ++b)
      if (lay.pair[a][b] != 0) out.log_phi += double(lay.pair[a][b]) * std::log(detail::to_c(T(x[a] - x[b])));
    for (std::size_t s = 0; s < z.size(); ++s)
      if (lay.site[a][s] != 0) out.log_phi -= double(lay.site[a][s]) * std::log(detail::to_c(T(x[a] - z[s])));
  }
  out.psi = psi_flat(lay, x, z);
  return out;
}

template <class T>
struct HessianResult {
  Matrix<T> matrix;
  T determinant;
};

template <class T>
HessianResult<T> hessian_log_phi(const GaudinProblem& p, const PointConfig<T>& t) {
  const auto lay = variable_layout(p);
  const auto x = t.flat();
  const auto z = p.sites<T>();
  detail::require_in_u(lay, x, z);
  auto h = hessian_flat(lay, x, z);
  const T det = x.empty() ? T(1) : determinant(h);
  return {std::move(h), det};
}

/// Degeneracy test |det H| < tol * prod_a ||row_a|| (scale free by Hadamard).
bool hessian_degenerate(const Matrix<Complex>& h, Complex det, double tol);

/// Within each group, coordinates rounded to multiples of tol and sorted by
/// (real, imaginary).
PointConfig<Complex> canonicalize_orbit(const PointConfig<Complex>& t, double tol);

/// Within each group, orders the coordinates as canonicalize_orbit would,
/// keeping the unrounded values.
PointConfig<Complex> canonical_order(const PointConfig<Complex>& t, double tol);

/// Multistart damped Newton for Psi = 0. `target` enables the early stop and
/// the default start count.
std::vector<CriticalOrbit> find_critical_orbits(const GaudinProblem& p, const SolverConfig& cfg,
                                                std::optional<std::size_t> target = std::nullopt);

/// Boundary data y_i(u, t) and T_i(u), i = 1..N (index 0 unused).
template <class T>
struct BoundaryPolynomials {
  std::vector<Polynomial<T>> T_;
  std::vector<Polynomial<T>> y;
};

template <class T>
BoundaryPolynomials<T> boundary_polynomials(const GaudinProblem& p, const PointConfig<T>& t) {
  const auto z = p.sites<T>();
  BoundaryPolynomials<T> out;
  out.T_.assign(static_cast<std::size_t>(p.N) + 1, Polynomial<T>::one());
  out.y.assign(static_cast<std::size_t>(p.N) + 1, Polynomial<T>::one());
  for (int i = 1; i <= p.N; ++i) {
    for (std::size_t s = 0; s < z.size(); ++s)
      out.T_[static_cast<std::size_t>(i)] = out.T_[static_cast<std::size_t>(i)] * Polynomial<T>::linear_factor(z[s]).pow(p.pairing(s, i));
    if (static_cast<std::size_t>(i) <= t.groups.size())
      out.y[static_cast<std::size_t>(i)] = Polynomial<T>::from_roots(t.groups[static_cast<std::size_t>(i - 1)]);
  }
  return out;
}

/// Poles of the factor argument log'(y_{i-1} T_i...T_N / y_i), i = 1..N+1,
/// as (location, multiplicity) pairs.
template <class T>
std::vector<std::pair<T, int>> factor_poles(const GaudinProblem& p, const PointConfig<T>& t, int i) {
  const auto z = p.sites<T>();
  std::vector<std::pair<T, int>> out;
  if (i >= 2)
    for (const T& x : t.groups[static_cast<std::size_t>(i - 2)]) out.emplace_back(x, 1);
  for (std::size_t s = 0; s < z.size(); ++s) {
    int m = 0;
    for (int k = i; k <= p.N; ++k) m += p.pairing(s, k);
    if (m != 0) out.emplace_back(z[s], m);
  }
  if (i <= p.N)
    for (const T& x : t.groups[static_cast<std::size_t>(i - 1)]) out.emplace_back(x, -1);
  return out;
}

/// D_Phi = (d - log'(y_0 T_1...T_N / y_1)) ... (d - log'(y_N / y_{N+1})) with
/// y_0 = y_{N+1} = 1; coefficient N+1-i is G_i(u, t).
template <class T>
OperatorPencil<RationalFunction<T>> master_operator_at(const GaudinProblem& p, const PointConfig<T>& t) {
  detail::require_in_u(variable_layout(p), t.flat(), p.sites<T>());
  const auto one = RationalFunction<T>::constant(T(1));
  std::optional<OperatorPencil<RationalFunction<T>>> acc;
  for (int i = 1; i <= p.N + 1; ++i) {
    RationalFunction<T> a;
    for (const auto& [x, m] : factor_poles(p, t, i))
      a = a + RationalFunction<T>(Polynomial<T>::constant(T(m)), Polynomial<T>::linear_factor(x));
    auto f = OperatorPencil<RationalFunction<T>>::first_order(a, one);
    acc = acc ? compose(*acc, f) : f;
  }
  return *acc;
}

/// G_1(u0, t), ..., G_{N+1}(u0, t) through Taylor jets at u0.
template <class T>
std::vector<T> master_coefficients_at(const GaudinProblem& p, const PointConfig<T>& t, const T& u0) {
  const int order = p.N + 1;
  const auto one = Jet<T>::constant(T(1), order);
  std::optional<OperatorPencil<Jet<T>>> acc;
  for (int i = 1; i <= p.N + 1; ++i) {
    auto a = Jet<T>::constant(T(0), order);
    for (const auto& [x, m] : factor_poles(p, t, i)) {
      if (x == u0) throw PoleEvaluation("sample point hits a pole of D_Phi");
      a = a + Jet<T>::simple_pole(u0, x, T(m), order);
    }
    auto f = OperatorPencil<Jet<T>>::first_order(a, one);
    acc = acc ? compose(*acc, f) : f;
  }
  std::vector<T> out;
  for (int i = 1; i <= p.N + 1; ++i) out.push_back(acc->coefficient(p.N + 1 - i).value());
  return out;
}

/// f(p) / H_p, the residue at a nondegenerate critical point.
template <class T>
T residue_nondegenerate(const T& f_value, const T& hessian, double tol = 0.0) {
  if (is_zero(hessian) || magnitude(hessian) <= tol) throw DegenerateCriticalPoint("Hessian vanishes at the critical point");
  return f_value / hessian;
}

}  // namespace gaudin
