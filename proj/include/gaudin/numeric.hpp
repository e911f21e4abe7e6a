#pragma once

#include <vector>

#include "gaudin/matrix.hpp"

namespace gaudin::numeric {

/// Singular values in descending order.
std::vector<double> singular_values(const Matrix<Complex>& a);

/// Number of singular values above `rel_tol * largest`.
std::size_t numerical_rank(const Matrix<Complex>& a, double rel_tol);

/// Orthonormal basis (as columns) of the right null space, using singular
/// values below `rel_tol * largest` as the kernel cutoff.
Matrix<Complex> numerical_nullspace(const Matrix<Complex>& a, double rel_tol);

/// Least-squares solution of a x = b with a complete orthogonal decomposition.
std::vector<Complex> least_squares(const Matrix<Complex>& a, const std::vector<Complex>& b);

double norm2(const std::vector<Complex>& v);

}  // namespace gaudin::numeric
