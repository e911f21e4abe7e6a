#include "gaudin/wronski.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "gaudin/numeric.hpp"

namespace gaudin {

ExponentData exponent_data(const GaudinProblem& p, std::optional<int> d_cap) {
  const int N = p.N;
  int need = p.lambda_inf[0];
  for (const auto& lam : p.lambdas) need = std::max(need, lam[0]);
  const int minimal = N + 1 + need;
  if (d_cap && *d_cap < minimal)
    throw AmbientTooSmall("d = " + std::to_string(*d_cap) + " is below the minimum " + std::to_string(minimal));
  ExponentData e;
  e.d_cap = d_cap.value_or(minimal);
  for (int i = 1; i <= N + 1; ++i) {
    e.d.push_back(p.lambda_inf[static_cast<std::size_t>(i - 1)] + N + 1 - i);
    e.P.insert(e.d.back());
  }
  std::vector<int> dual;
  for (int k = 1; k <= N + 1; ++k) dual.push_back(e.d_cap - N - 1 - p.lambda_inf[static_cast<std::size_t>(N + 1 - k)]);
  e.dual = Partition(std::move(dual));
  return e;
}

template <class T>
Polynomial<T> wronskian(const std::vector<Polynomial<T>>& g) {
  const std::size_t n = g.size();
  if (n == 0) return Polynomial<T>::one();
  std::vector<std::vector<Polynomial<T>>> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i].push_back(g[i]);
    for (std::size_t k = 1; k < n; ++k) m[i].push_back(derivative(m[i].back()));
  }
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  Polynomial<T> det;
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        if (perm[a] > perm[b]) ++inversions;
    Polynomial<T> term = Polynomial<T>::one();
    for (std::size_t i = 0; i < n && !term.is_zero(); ++i) term = term * m[i][perm[i]];
    det = inversions % 2 ? det - term : det + term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return det;
}

namespace {

int falling(int m, int r) {
  int f = 1;
  for (int k = 0; k < r; ++k) f *= m - k;
  return f;
}

// Columns of `kernel` are coefficient vectors (ascending) of a basis of the
// solution space. Returns the shape-normalized tuple.
PolynomialTuple<Rational> normalize_exact(const Matrix<Rational>& kernel, const ExponentData& E) {
  const std::size_t k = E.d.size();
  Matrix<Rational> S(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t c = 0; c < k; ++c) S(i, c) = kernel(static_cast<std::size_t>(E.d[i]), c);
  Matrix<Rational> X;
  try {
    X = solve(S, Matrix<Rational>::identity(k));
  } catch (const DimensionMismatch&) {
    throw ShapeNormalizationFailure("the kernel has no basis with the required leading exponents");
  }
  PolynomialTuple<Rational> out;
  for (std::size_t i = 0; i < k; ++i) {
    std::vector<Rational> c(kernel.rows(), Rational(0));
    for (std::size_t r = 0; r < kernel.rows(); ++r)
      for (std::size_t j = 0; j < k; ++j) c[r] += kernel(r, j) * X(j, i);
    Polynomial<Rational> h(std::move(c));
    if (h.degree() != E.d[i])
      throw ShapeNormalizationFailure("h_" + std::to_string(i + 1) + " has degree " + std::to_string(h.degree()) +
                                      " instead of " + std::to_string(E.d[i]));
    out.h.push_back(std::move(h));
  }
  return out;
}

PolynomialTuple<Complex> normalize_numeric(const Matrix<Complex>& kernel, const ExponentData& E) {
  const auto k = static_cast<Eigen::Index>(E.d.size());
  const auto rows = static_cast<Eigen::Index>(kernel.rows());
  Eigen::MatrixXcd K(rows, k);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < k; ++c) K(r, c) = kernel(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
  Eigen::MatrixXcd S(k, k);
  for (Eigen::Index i = 0; i < k; ++i) S.row(i) = K.row(E.d[static_cast<std::size_t>(i)]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(S);
  const auto& sv = svd.singularValues();
  if (sv(k - 1) <= 1e-10 * sv(0))
    throw ShapeNormalizationFailure("the kernel has no basis with the required leading exponents");
  const Eigen::MatrixXcd H = K * S.fullPivLu().inverse();

  PolynomialTuple<Complex> out;
  for (Eigen::Index i = 0; i < k; ++i) {
    const int di = E.d[static_cast<std::size_t>(i)];
    double big = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) big = std::max(big, std::abs(H(r, i)));
    std::vector<Complex> c(static_cast<std::size_t>(di) + 1);
    for (Eigen::Index r = 0; r < rows; ++r) {
      if (r > di) {
        if (std::abs(H(r, i)) > 1e-8 * big)
          throw ShapeNormalizationFailure("h_" + std::to_string(i + 1) + " has a coefficient above u^" + std::to_string(di));
        continue;
      }
      c[static_cast<std::size_t>(r)] = H(r, i);
    }
    for (int dk : E.d)
      if (dk <= di) c[static_cast<std::size_t>(dk)] = dk == di ? Complex(1) : Complex(0);
    out.h.emplace_back(std::move(c));
  }
  return out;
}

template <class T>
void compare_with_y(const Polynomial<T>& h, const Polynomial<T>& y, double tol) {
  const double diff = max_abs_coeff(h - y);
  if (diff > tol * std::max(1.0, max_abs_coeff(y)))
    throw ShapeNormalizationFailure("h_{N+1} differs from y_N");
}

std::vector<Complex> all_poles(const GaudinProblem& p, const PointConfig<Complex>& t) {
  std::vector<Complex> out = p.sites<Complex>();
  for (const auto& g : t.groups) out.insert(out.end(), g.begin(), g.end());
  return out;
}

double enclosing_radius(const std::vector<Complex>& poles) {
  double r = 1.0;
  for (const auto& x : poles) r = std::max(r, std::abs(x));
  return 1.5 * r + 1.0;
}

std::vector<Complex> circle(double radius, std::size_t count, double phase) {
  std::vector<Complex> pts;
  for (std::size_t k = 0; k < count; ++k) {
    const double a = 2.0 * std::numbers::pi * (static_cast<double>(k) + phase) / static_cast<double>(count);
    pts.push_back(std::polar(radius, a));
  }
  return pts;
}

// Pencil coefficients C_0..C_{N+1} at u, C_{N+1} = 1.
std::vector<Complex> pencil_at(const GaudinProblem& p, const PointConfig<Complex>& t, const Complex& u) {
  const auto G = master_coefficients_at(p, t, u);
  std::vector<Complex> c(static_cast<std::size_t>(p.N) + 2);
  c[static_cast<std::size_t>(p.N) + 1] = Complex(1);
  for (int i = 1; i <= p.N + 1; ++i) c[static_cast<std::size_t>(p.N + 1 - i)] = G[static_cast<std::size_t>(i - 1)];
  return c;
}

}  // namespace

PolynomialTuple<Rational> solve_h_tuple(const OperatorPencil<RationalFunction<Rational>>& D, const ExponentData& E,
                                        const std::optional<Polynomial<Rational>>& y_N) {
  const int order = D.order();
  // clear denominators
  Polynomial<Rational> L = Polynomial<Rational>::one();
  for (const auto& c : D.coeffs()) L = L * c.den().divmod(gcd(L, c.den())).first;
  std::vector<Polynomial<Rational>> P;
  for (const auto& c : D.coeffs()) P.push_back(c.num() * L.divmod(c.den()).first);

  const int d1 = E.d.front();
  std::vector<Polynomial<Rational>> images;
  int top = 0;
  for (int m = 0; m <= d1; ++m) {
    Polynomial<Rational> img;
    for (int r = 0; r <= std::min(order, m); ++r)
      img += P[static_cast<std::size_t>(r)] * Polynomial<Rational>::monomial(m - r, Rational(falling(m, r)));
    top = std::max(top, img.degree());
    images.push_back(std::move(img));
  }
  Matrix<Rational> A(static_cast<std::size_t>(top) + 1, static_cast<std::size_t>(d1) + 1);
  for (int m = 0; m <= d1; ++m)
    for (int r = 0; r <= images[static_cast<std::size_t>(m)].degree(); ++r)
      A(static_cast<std::size_t>(r), static_cast<std::size_t>(m)) = images[static_cast<std::size_t>(m)][r];
  const auto K = nullspace(A);
  if (K.cols() != E.d.size())
    throw KernelDimensionMismatch("polynomial kernel has dimension " + std::to_string(K.cols()) + ", expected " +
                                  std::to_string(E.d.size()));
  auto out = normalize_exact(K, E);
  if (y_N) compare_with_y(out.h.back(), *y_N, 0.0);
  return out;
}

PolynomialTuple<Rational> solve_h_tuple(const GaudinProblem& p, const PointConfig<Rational>& t, const ExponentData& E) {
  const auto b = boundary_polynomials(p, t);
  return solve_h_tuple(master_operator_at(p, t), E, b.y[static_cast<std::size_t>(p.N)]);
}

PolynomialTuple<Complex> solve_h_tuple(const GaudinProblem& p, const PointConfig<Complex>& t, const ExponentData& E,
                                       double rel_tol) {
  detail::require_in_u(variable_layout(p), t.flat(), p.sites<Complex>());
  const int d1 = E.d.front();
  const double R = enclosing_radius(all_poles(p, t));
  const auto pts = circle(R, static_cast<std::size_t>(3 * (d1 + 1) + 8), 0.5);
  const int order = p.N + 1;

  // unknowns a_m = c_m R^m keep the columns comparable
  Matrix<Complex> A(pts.size(), static_cast<std::size_t>(d1) + 1);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Complex u = pts[k];
    const auto C = pencil_at(p, t, u);
    double big = 0.0;
    for (int m = 0; m <= d1; ++m) {
      Complex v{};
      for (int r = 0; r <= std::min(order, m); ++r)
        v += C[static_cast<std::size_t>(r)] * double(falling(m, r)) * std::pow(u, m - r);
      v /= std::pow(R, m);
      A(k, static_cast<std::size_t>(m)) = v;
      big = std::max(big, std::abs(v));
    }
    if (big > 0)
      for (int m = 0; m <= d1; ++m) A(k, static_cast<std::size_t>(m)) /= big;
  }
  auto K = numeric::numerical_nullspace(A, rel_tol);
  if (K.cols() != E.d.size())
    throw KernelDimensionMismatch("polynomial kernel has dimension " + std::to_string(K.cols()) + ", expected " +
                                  std::to_string(E.d.size()));
  for (std::size_t m = 0; m < K.rows(); ++m)
    for (std::size_t c = 0; c < K.cols(); ++c) K(m, c) /= std::pow(R, static_cast<int>(m));
  auto out = normalize_numeric(K, E);
  compare_with_y(out.h.back(), boundary_polynomials(p, t).y[static_cast<std::size_t>(p.N)], 1e-8);
  return out;
}

double ode_residual(const GaudinProblem& p, const PointConfig<Complex>& t, const PolynomialTuple<Complex>& h) {
  const double R = enclosing_radius(all_poles(p, t));
  const auto pts = circle(R, 24, 0.25);
  double worst = 0.0;
  for (const auto& u : pts) {
    const auto C = pencil_at(p, t, u);
    for (const auto& hi : h.h) {
      Complex sum{};
      double mass = 0.0;
      Polynomial<Complex> dk = hi;
      for (std::size_t r = 0; r < C.size(); ++r) {
        const Complex term = C[r] * dk.evaluate<Complex>(u);
        sum += term;
        mass += std::abs(term);
        dk = derivative(dk);
      }
      if (mass > 0) worst = std::max(worst, std::abs(sum) / mass);
    }
  }
  return worst;
}

template <class T>
std::vector<WronskianCheck> verify_wronskian_identities(const PolynomialTuple<T>& h, const GaudinProblem& p,
                                                        const PointConfig<T>& t, const ExponentData& E) {
  const int N = p.N;
  const auto b = boundary_polynomials(p, t);
  std::vector<WronskianCheck> out;
  for (int j = 1; j <= N; ++j) {
    std::vector<Polynomial<T>> args;
    for (int i = N + 1; i >= N + 1 - j; --i) args.push_back(h.h[static_cast<std::size_t>(i - 1)]);
    const auto lhs = wronskian(args);

    long constant = 1;
    for (int i = N + 1 - j; i <= N + 1; ++i)
      for (int i2 = i + 1; i2 <= N + 1; ++i2)
        constant *= E.d[static_cast<std::size_t>(i - 1)] - E.d[static_cast<std::size_t>(i2 - 1)];
    Polynomial<T> rhs = b.y[static_cast<std::size_t>(N - j)];
    for (int m = 0; m < j; ++m) rhs = rhs * b.T_[static_cast<std::size_t>(N - m)].pow(j - m);
    rhs = T(constant) * rhs;

    WronskianCheck c;
    c.j = j;
    c.constant = constant;
    c.degree_lhs = lhs.degree();
    c.degree_rhs = rhs.degree();
    c.residual = max_abs_coeff(lhs - rhs) / std::max(max_abs_coeff(rhs), 1e-300);
    out.push_back(c);
  }
  return out;
}

template <class T>
std::vector<T> taylor_shift(const Polynomial<T>& p, const T& z) {
  const Polynomial<T> shift({z, T(1)});
  Polynomial<T> acc;
  for (auto it = p.coeffs().rbegin(); it != p.coeffs().rend(); ++it) acc = acc * shift + Polynomial<T>::constant(*it);
  return acc.coeffs();
}

namespace {

std::size_t rank_of(const Matrix<Rational>& m, double) { return rank(m); }

std::size_t rank_of(const Matrix<Complex>& m, double tol) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  std::size_t r = 0;
  for (double s : numeric::singular_values(m))
    if (s > tol) ++r;
  return r;
}

template <class T>
double root_scale(const PolynomialTuple<T>& h) {
  double rho = 1.0;
  for (const auto& p : h.h) {
    const double lead = magnitude(p.leading());
    for (int k = 0; k < p.degree(); ++k)
      if (!is_zero(p[k])) rho = std::max(rho, std::pow(magnitude(p[k]) / lead, 1.0 / (p.degree() - k)));
  }
  return rho;
}

}  // namespace

template <class T>
IncidenceResult schubert_incidence(const PolynomialTuple<T>& h, const ExponentData& E, const Site<T>& site,
                                   const Partition& lambda, double rank_tol) {
  const std::size_t n = h.h.size();
  const int N = static_cast<int>(n) - 1;
  std::vector<int> lam = lambda.parts();
  lam.resize(n, 0);
  int width = E.d_cap;
  for (std::size_t j = 0; j < n; ++j) width = std::max(width, lam[j] + N + 2);

  // rows: coefficient vectors in the local coordinate at the site
  Matrix<T> M(n, static_cast<std::size_t>(width));
  for (std::size_t i = 0; i < n; ++i) {
    const auto c = site.z ? taylor_shift(h.h[i], *site.z) : h.h[i].coeffs();
    for (std::size_t k = 0; k < c.size() && k < M.cols(); ++k) M(i, k) = c[k];
  }
  if constexpr (!is_exact_v<T>) {
    double rho = root_scale(h);
    if (site.z) rho = std::max(rho, magnitude(*site.z));
    for (std::size_t i = 0; i < n; ++i) {
      double big = 0.0;
      for (std::size_t k = 0; k < M.cols(); ++k) {
        M(i, k) *= std::pow(rho, static_cast<int>(k) - width);
        big = std::max(big, magnitude(M(i, k)));
      }
      if (big > 0)
        for (std::size_t k = 0; k < M.cols(); ++k) M(i, k) /= big;
    }
  }

  // dim of q in the subspace of order >= e
  auto dim_at = [&](int e) -> int {
    std::size_t lo = 0, hi = 0;
    if (site.z) {
      lo = 0;
      hi = static_cast<std::size_t>(std::clamp(e, 0, width));
    } else {
      lo = static_cast<std::size_t>(std::clamp(E.d_cap - e, 0, width));
      hi = M.cols();
    }
    Matrix<T> sub(n, hi - lo);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = lo; k < hi; ++k) sub(i, k - lo) = M(i, k);
    return static_cast<int>(n) - static_cast<int>(rank_of(sub, rank_tol));
  };

  IncidenceResult out;
  out.pass = true;
  for (int j = 1; j <= N + 1; ++j) {
    IncidenceRow row;
    row.j = j;
    row.exponent = lam[static_cast<std::size_t>(j - 1)] + N + 1 - j;
    row.dim_at = dim_at(row.exponent);
    row.dim_above = dim_at(row.exponent + 1);
    row.expected_at = j;
    row.expected_above = j - 1;
    out.pass = out.pass && row.dim_at == row.expected_at && row.dim_above == row.expected_above;
    out.rows.push_back(row);
  }
  return out;
}

#define GAUDIN_INSTANTIATE(T)                                                                                       \
  template Polynomial<T> wronskian<T>(const std::vector<Polynomial<T>>&);                                           \
  template std::vector<WronskianCheck> verify_wronskian_identities<T>(const PolynomialTuple<T>&, const GaudinProblem&, \
                                                                      const PointConfig<T>&, const ExponentData&);   \
  template std::vector<T> taylor_shift<T>(const Polynomial<T>&, const T&);                                          \
  template IncidenceResult schubert_incidence<T>(const PolynomialTuple<T>&, const ExponentData&, const Site<T>&,   \
                                                 const Partition&, double);

GAUDIN_INSTANTIATE(Rational)
GAUDIN_INSTANTIATE(Complex)

#undef GAUDIN_INSTANTIATE

}  // namespace gaudin
