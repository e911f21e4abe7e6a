#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gaudin/matrix.hpp"
#include "gaudin/scalar.hpp"

namespace gaudin {

/// Integral weight in the epsilon basis (orthonormal for the scalar product).
struct Weight {
  std::vector<int> coords;

  int dot(const Weight& o) const;
  friend Weight operator+(const Weight& a, const Weight& b);
  friend Weight operator-(const Weight& a, const Weight& b);
  friend Weight operator*(int k, const Weight& a);
  friend bool operator==(const Weight&, const Weight&) = default;
  friend auto operator<=>(const Weight&, const Weight&) = default;

  /// alpha_i = eps_i - eps_{i+1}, i = 1..rank-1.
  static Weight simple_root(int i, int rank);
  static Weight unit(int i, int rank);
};

/// Weakly decreasing sequence of nonnegative integers.
class Partition {
 public:
  Partition() = default;
  /// Throws NotAPartition unless `parts` is weakly decreasing and nonnegative.
  explicit Partition(std::vector<int> parts);

  const std::vector<int>& parts() const { return parts_; }
  int operator[](std::size_t i) const { return parts_[i]; }
  std::size_t length() const { return parts_.size(); }
  int size() const;
  Weight weight() const { return Weight{parts_}; }
  std::string str() const;

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<int> parts_;
};

/// Weight-graded finite-dimensional gl(rank)-module with exact generator
/// matrices. Generator indices are 0-based: e(i, j) is e_{i+1, j+1}.
class GlModule {
 public:
  GlModule() = default;
  GlModule(int rank, std::vector<Weight> basis_weights, std::vector<SparseMatrix<Rational>> generators,
           std::optional<std::size_t> hw_index);

  int rank() const { return rank_; }
  std::size_t dim() const { return weights_.size(); }
  const std::vector<Weight>& basis_weights() const { return weights_; }
  const SparseMatrix<Rational>& e(int i, int j) const {
    return gens_[static_cast<std::size_t>(i * rank_ + j)];
  }
  std::optional<std::size_t> hw_index() const { return hw_; }

  /// Basis indices whose weight equals `mu`, ascending.
  std::vector<std::size_t> weight_indices(const Weight& mu) const;

 private:
  int rank_ = 0;
  std::vector<Weight> weights_;
  std::vector<SparseMatrix<Rational>> gens_;
  std::optional<std::size_t> hw_;
};

/// Symmetric bilinear form given by its Gram matrix on the module basis.
struct SymmetricForm {
  SparseMatrix<Rational> gram;
};

/// An irreducible module together with its Shapovalov form.
struct IrreducibleModule {
  Partition highest_weight;
  GlModule module;
  SymmetricForm form;
};

/// lambda_inf = sum_s Lambda_s - sum_j l_j alpha_j. Throws NotAPartition when
/// some Lambda_s has a nonzero last part or when the result is not a partition.
Partition derive_infinity_weight(const std::vector<Partition>& lambdas, const std::vector<int>& l);

/// Irreducible gl(N+1)-module of highest weight `lambda`. Weight spaces are
/// spanned by lowering words applied to the highest weight vector and reduced
/// modulo the radical of the Shapovalov form.
IrreducibleModule build_irreducible(const Partition& lambda, int N);

/// Weyl dimension formula.
long weyl_dimension(const Partition& lambda);

/// Generators act by the Leibniz rule; the first factor is the slowest index.
GlModule tensor_module(const std::vector<GlModule>& factors);

/// Kronecker product of the factor Gram matrices.
SymmetricForm tensor_shapovalov(const std::vector<SymmetricForm>& forms);

struct WeightSubspaces {
  std::vector<std::size_t> weight_indices;  // basis elements spanning M[mu]
  Matrix<Rational> weight_basis;            // dim M x dim M[mu], unit columns
  Matrix<Rational> singular_coords;         // dim M[mu] x dim Sing, in weight-space coordinates
  Matrix<Rational> singular_basis;          // dim M x dim Sing
};

WeightSubspaces weight_and_singular_subspace(const GlModule& m, const Weight& mu);

/// Number of index quadruples violating [e_ij, e_sk] = d_js e_ik - d_ik e_sj.
std::size_t commutation_violations(const GlModule& m);

/// Number of pairs (i, j) violating Gram M(e_ij) = M(e_ji)^T Gram.
std::size_t contravariance_violations(const GlModule& m, const SymmetricForm& s);

/// The tensor product of irreducibles together with its tensor Shapovalov form.
struct TensorModule {
  std::vector<IrreducibleModule> factors;
  GlModule module;
  SymmetricForm form;

  /// Basis index of the tensor of factor basis indices.
  std::size_t index_of(const std::vector<std::size_t>& factor_indices) const;
  /// Tensor of the highest weight vectors.
  std::size_t highest_index() const;
};

TensorModule build_tensor(const std::vector<Partition>& lambdas, int N);

}  // namespace gaudin
