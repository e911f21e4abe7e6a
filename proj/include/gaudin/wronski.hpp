#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gaudin/master.hpp"

namespace gaudin {

struct ExponentData {
  std::vector<int> d;  // d_1 > ... > d_{N+1}
  std::set<int> P;
  Partition dual;      // N+1 parts
  int d_cap = 0;
};

/// Auto mode picks the smallest d with d - N - 1 >= lambda_inf_1 and every
/// lambda^(s)_1. Throws AmbientTooSmall for a smaller explicit value.
ExponentData exponent_data(const GaudinProblem& p, std::optional<int> d_cap = std::nullopt);

template <class T>
struct PolynomialTuple {
  std::vector<Polynomial<T>> h;  // h[0] = h_1, ..., h[N] = h_{N+1}
};

/// det [g_i^{(j)}], rows indexed by the polynomials.
template <class T>
Polynomial<T> wronskian(const std::vector<Polynomial<T>>& g);

/// Kernel of the pencil on polynomials of degree <= d_1, normalized to the
/// shape u^{d_i} + (terms u^k with k not in P). Exact arithmetic only.
/// Throws KernelDimensionMismatch or ShapeNormalizationFailure; `y_N` is
/// compared with h_{N+1} when given.
PolynomialTuple<Rational> solve_h_tuple(const OperatorPencil<RationalFunction<Rational>>& D, const ExponentData& E,
                                        const std::optional<Polynomial<Rational>>& y_N = std::nullopt);

/// Numeric kernel of D_Phi at the point t, sampled through Taylor jets on a
/// circle enclosing every pole. Kernel cutoff is rel_tol * largest singular value.
PolynomialTuple<Complex> solve_h_tuple(const GaudinProblem& p, const PointConfig<Complex>& t, const ExponentData& E,
                                       double rel_tol = 1e-10);

/// Exact version built from master_operator_at.
PolynomialTuple<Rational> solve_h_tuple(const GaudinProblem& p, const PointConfig<Rational>& t, const ExponentData& E);

/// max over h_i and sample points of |D h_i(u)| / sum_k |G_k(u) h_i^{(k)}(u)|.
double ode_residual(const GaudinProblem& p, const PointConfig<Complex>& t, const PolynomialTuple<Complex>& h);

struct WronskianCheck {
  int j = 0;
  double residual = 0.0;  // max coefficient difference over max coefficient of the right side
  int degree_lhs = -1;
  int degree_rhs = -1;
  long constant = 0;      // prod (d_i - d_i')
};

/// Wr(h_{N+1}, ..., h_{N+1-j}) against y_{N-j} T_N^j ... T_{N-j+1} prod (d_i - d_i'), j = 1..N.
template <class T>
std::vector<WronskianCheck> verify_wronskian_identities(const PolynomialTuple<T>& h, const GaudinProblem& p,
                                                        const PointConfig<T>& t, const ExponentData& E);

/// A site: finite point or infinity.
template <class T>
struct Site {
  std::optional<T> z;  // empty means infinity
};

struct IncidenceRow {
  int j = 0;
  int exponent = 0;  // lambda_j + N + 1 - j
  int dim_at = 0;    // dim of q in the subspace of order >= exponent
  int dim_above = 0; // dim of q in the subspace of order >= exponent + 1
  int expected_at = 0;
  int expected_above = 0;
};

struct IncidenceResult {
  bool pass = false;
  std::vector<IncidenceRow> rows;
};

/// Checks that q = span(h) has orders {lambda_j + N + 1 - j} at the site. At a
/// finite z the order of f is its vanishing order; at infinity it is
/// d_cap - 1 - deg f, and lambda should be the dual partition.
template <class T>
IncidenceResult schubert_incidence(const PolynomialTuple<T>& h, const ExponentData& E, const Site<T>& site,
                                   const Partition& lambda, double rank_tol = 1e-8);

/// Coefficients of p(u + z) in ascending powers.
template <class T>
std::vector<T> taylor_shift(const Polynomial<T>& p, const T& z);

}  // namespace gaudin
