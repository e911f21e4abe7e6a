#include "gaudin/numeric.hpp"

#include <Eigen/Dense>

#include <cmath>

namespace gaudin::numeric {
namespace {

Eigen::MatrixXcd to_eigen(const Matrix<Complex>& a) {
  Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
  return m;
}

}  // namespace

std::vector<double> singular_values(const Matrix<Complex>& a) {
  if (a.rows() == 0 || a.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
  const auto& s = svd.singularValues();
  return {s.data(), s.data() + s.size()};
}

std::size_t numerical_rank(const Matrix<Complex>& a, double rel_tol) {
  const auto s = singular_values(a);
  if (s.empty() || s.front() == 0.0) return 0;
  std::size_t r = 0;
  for (double x : s)
    if (x > rel_tol * s.front()) ++r;
  return r;
}

Matrix<Complex> numerical_nullspace(const Matrix<Complex>& a, double rel_tol) {
  const auto n = static_cast<Eigen::Index>(a.cols());
  if (a.rows() == 0) return Matrix<Complex>::identity(a.cols());
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a), Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double largest = s.size() > 0 ? s(0) : 0.0;
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    if (s(k) > rel_tol * largest && largest > 0.0) ++r;
  const auto& v = svd.matrixV();
  Matrix<Complex> out(a.cols(), static_cast<std::size_t>(n - r));
  for (Eigen::Index j = r; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(static_cast<std::size_t>(i), static_cast<std::size_t>(j - r)) = v(i, j);
  return out;
}

std::vector<Complex> least_squares(const Matrix<Complex>& a, const std::vector<Complex>& b) {
  Eigen::VectorXcd rhs(static_cast<Eigen::Index>(b.size()));
  for (std::size_t i = 0; i < b.size(); ++i) rhs(static_cast<Eigen::Index>(i)) = b[i];
  Eigen::VectorXcd x = to_eigen(a).completeOrthogonalDecomposition().solve(rhs);
  return {x.data(), x.data() + x.size()};
}

double norm2(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const Complex& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace gaudin::numeric
