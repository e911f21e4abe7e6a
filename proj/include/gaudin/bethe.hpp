#pragma once

#include <memory>
#include <utility>
#include <vector>

#include "gaudin/pencil.hpp"
#include "gaudin/pole_matrix.hpp"
#include "gaudin/repr.hpp"

namespace gaudin {

/// Distinct evaluation points z_1..z_n and the shared denominator prod_s (u - z_s).
template <class T>
struct Sites {
  std::vector<T> z;
  std::shared_ptr<const Polynomial<T>> base;
};

/// Throws RepeatedSites when two sites coincide.
template <class T>
Sites<T> make_sites(const std::vector<T>& z);

/// e_ij(u) = sum_s e_ij^{(s)} / (u - z_s) on the tensor of evaluation modules.
/// Indices are 0-based.
template <class T>
PoleMatrix<T> current_matrix(const TensorModule& m, int i, int j, const Sites<T>& sites);

/// Row determinant of the matrix with entry (i, j) = delta_ij d/du - e_ji(u),
/// expanded over all permutations with products taken in row order.
/// Coefficient k of the result multiplies d^k/du^k, so B_i is coefficient N+1-i.
template <class T>
OperatorPencil<PoleMatrix<T>> universal_operator(const TensorModule& m, const Sites<T>& sites);

template <class T>
using RationalMatrix = std::vector<std::vector<RationalFunction<T>>>;

/// B_i(u) and their expansion coefficients B_ij on an invariant subspace.
template <class T>
struct BetheOperatorFamily {
  int N = 0;
  Matrix<T> subspace;                          // columns in the module basis
  std::vector<RationalMatrix<T>> B_u;          // B_u[i-1] = B_i(u) in subspace coordinates
  std::vector<std::vector<Matrix<T>>> B_coeffs;  // B_coeffs[i-1][j] = B_ij, j = 0..j_max

  const RationalMatrix<T>& B(int i) const { return B_u.at(static_cast<std::size_t>(i - 1)); }
  const Matrix<T>& coefficient(int i, int j) const {
    return B_coeffs.at(static_cast<std::size_t>(i - 1)).at(static_cast<std::size_t>(j));
  }
  std::size_t dim() const { return subspace.cols(); }
  /// B_i(u0) in subspace coordinates.
  template <class U>
  Matrix<U> evaluate(int i, const U& u0) const;
};

/// Expresses every B_i(u) in the basis given by the columns of `subspace`.
/// Throws NotInvariant if the subspace is not preserved.
template <class T>
BetheOperatorFamily<T> restrict_family(const OperatorPencil<PoleMatrix<T>>& pencil, const Matrix<T>& subspace,
                                       int j_max);

/// Same, for the span of a set of basis vectors (a weight space), which needs
/// no linear solve.
template <class T>
BetheOperatorFamily<T> restrict_to_basis_vectors(const OperatorPencil<PoleMatrix<T>>& pencil,
                                                 const std::vector<std::size_t>& indices, int j_max);

/// Default expansion cutoff n * max_s |lambda_s| + N + 1.
int default_j_max(const std::vector<Partition>& lambdas, int N);

struct AlgebraSelfCheck {
  double commutativity = 0.0;      // max |[B_i(u0), B_j(v0)]|
  double gl_commutation = 0.0;     // max |[B_i(u0), e_kl]|
  double symmetry = 0.0;           // max |Gram B_i - B_i^T Gram|, over all numerator coefficients
  double b1_identity = 0.0;        // B_1(u) + sum_s |lambda_s| / (u - z_s), as a matrix function
  double lower_coefficients = 0.0; // max |B_ij| for j < i
  std::size_t sample_pairs = 0;
  bool exact = false;

  double max_residual() const;
};

/// Checks commutativity, commutation with gl(N+1), Shapovalov symmetry, the
/// B_1 identity, and the vanishing of B_ij for j < i on the full module.
template <class T>
AlgebraSelfCheck algebra_selfcheck(const OperatorPencil<PoleMatrix<T>>& pencil, const TensorModule& m,
                                   const Sites<T>& sites, const std::vector<std::pair<T, T>>& samples);

/// Deterministic sample pairs avoiding the sites.
template <class T>
std::vector<std::pair<T, T>> default_sample_pairs(const Sites<T>& sites, std::size_t count);

}  // namespace gaudin
