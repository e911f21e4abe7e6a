#include "gaudin/bethe.hpp"

#include <algorithm>
#include <numeric>

#include "gaudin/linalg.hpp"

namespace gaudin {

template <class T>
Sites<T> make_sites(const std::vector<T>& z) {
  for (std::size_t a = 0; a < z.size(); ++a)
    for (std::size_t b = a + 1; b < z.size(); ++b)
      if (z[a] == z[b]) throw RepeatedSites("sites " + std::to_string(a + 1) + " and " + std::to_string(b + 1) + " coincide");
  return Sites<T>{z, std::make_shared<const Polynomial<T>>(Polynomial<T>::from_roots(z))};
}

namespace {

SparseMatrix<Rational> slot_operator(const TensorModule& m, std::size_t slot, int i, int j) {
  SparseMatrix<Rational> term = SparseMatrix<Rational>::identity(1);
  for (std::size_t s = 0; s < m.factors.size(); ++s) {
    const auto& f = m.factors[s].module;
    term = kron(term, s == slot ? f.e(i, j) : SparseMatrix<Rational>::identity(f.dim()));
  }
  return term;
}

/// prod_{t != s} (u - z_t)
template <class T>
Polynomial<T> cofactor(const std::vector<T>& z, std::size_t s) {
  Polynomial<T> p = Polynomial<T>::one();
  for (std::size_t t = 0; t < z.size(); ++t)
    if (t != s) p = p * Polynomial<T>::linear_factor(z[t]);
  return p;
}

}  // namespace

template <class T>
PoleMatrix<T> current_matrix(const TensorModule& m, int i, int j, const Sites<T>& sites) {
  if (sites.z.size() != m.factors.size()) throw DimensionMismatch("one site per tensor factor is required");
  const std::size_t dim = m.module.dim();
  std::vector<SparseMatrix<T>> num(std::max<std::size_t>(sites.z.size(), 1), SparseMatrix<T>(dim, dim));
  for (std::size_t s = 0; s < sites.z.size(); ++s) {
    const auto slot = slot_operator(m, s, i, j).template cast<T>();
    if (slot.is_zero()) continue;
    const auto c = cofactor(sites.z, s);
    for (int k = 0; k <= c.degree(); ++k) num[static_cast<std::size_t>(k)] += c[k] * slot;
  }
  return PoleMatrix<T>(sites.base, dim, std::move(num), 1);
}

template <class T>
OperatorPencil<PoleMatrix<T>> universal_operator(const TensorModule& m, const Sites<T>& sites) {
  const int rank = m.module.rank();
  const std::size_t dim = m.module.dim();
  const auto identity = PoleMatrix<T>::identity(sites.base, dim);

  std::vector<PoleMatrix<T>> currents;
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) currents.push_back(current_matrix(m, i, j, sites));
  // entry (i, j) = delta_ij d - e_ji(u)
  auto entry = [&](int i, int j) {
    const auto& e = currents[static_cast<std::size_t>(j * rank + i)];
    if (i == j) return OperatorPencil<PoleMatrix<T>>::first_order(e, identity);
    return OperatorPencil<PoleMatrix<T>>({-e});
  };

  std::vector<int> perm(static_cast<std::size_t>(rank));
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<OperatorPencil<PoleMatrix<T>>> total;
  do {
    int inversions = 0;
    for (int a = 0; a < rank; ++a)
      for (int b = a + 1; b < rank; ++b)
        if (perm[static_cast<std::size_t>(a)] > perm[static_cast<std::size_t>(b)]) ++inversions;
    auto term = entry(0, perm[0]);
    for (int r = 1; r < rank; ++r) term = compose(term, entry(r, perm[static_cast<std::size_t>(r)]));
    if (inversions % 2) term = -term;
    total = total ? *total + term : term;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return *total;
}

int default_j_max(const std::vector<Partition>& lambdas, int N) {
  int biggest = 0;
  for (const auto& l : lambdas) biggest = std::max(biggest, l.size());
  return static_cast<int>(lambdas.size()) * biggest + N + 1;
}

template <class T>
template <class U>
Matrix<U> BetheOperatorFamily<T>::evaluate(int i, const U& u0) const {
  const auto& b = B(i);
  Matrix<U> out(b.size(), b.empty() ? 0 : b.front().size());
  for (std::size_t r = 0; r < out.rows(); ++r)
    for (std::size_t c = 0; c < out.cols(); ++c) out(r, c) = b[r][c].template evaluate<U>(u0);
  return out;
}

namespace {

/// Assembles the family from restricted numerator coefficients:
/// restricted[i-1][k] is the u^k coefficient of Q^p B_i(u).
template <class T>
BetheOperatorFamily<T> assemble_family(int N, Matrix<T> subspace, const Polynomial<T>& base,
                                       const std::vector<std::vector<Matrix<T>>>& restricted,
                                       const std::vector<int>& powers, int j_max) {
  BetheOperatorFamily<T> fam;
  fam.N = N;
  const std::size_t k = subspace.cols();
  fam.subspace = std::move(subspace);
  for (std::size_t i = 0; i < restricted.size(); ++i) {
    const auto den = base.pow(powers[i]);
    RationalMatrix<T> b(k, std::vector<RationalFunction<T>>(k));
    std::vector<Matrix<T>> coeffs(static_cast<std::size_t>(j_max) + 1, Matrix<T>(k, k));
    for (std::size_t r = 0; r < k; ++r)
      for (std::size_t c = 0; c < k; ++c) {
        std::vector<T> num;
        for (const auto& m : restricted[i]) num.push_back(m(r, c));
        b[r][c] = RationalFunction<T>(Polynomial<T>(std::move(num)), den);
        if (j_max >= 0) {
          const auto s = series_at_infinity(b[r][c], j_max);
          for (int j = 0; j <= j_max; ++j) coeffs[static_cast<std::size_t>(j)](r, c) = s[static_cast<std::size_t>(j)];
        }
      }
    fam.B_u.push_back(std::move(b));
    fam.B_coeffs.push_back(std::move(coeffs));
  }
  return fam;
}

}  // namespace

template <class T>
BetheOperatorFamily<T> restrict_family(const OperatorPencil<PoleMatrix<T>>& pencil, const Matrix<T>& subspace,
                                       int j_max) {
  const int N = pencil.order() - 1;
  std::vector<std::vector<Matrix<T>>> restricted;
  std::vector<int> powers;
  for (int i = 1; i <= N + 1; ++i) {
    const auto& coeff = pencil.coefficient(N + 1 - i);
    std::vector<Matrix<T>> parts;
    for (const auto& a : coeff.numerator()) {
      const auto image = a.to_dense() * subspace;
      try {
        parts.push_back(solve(subspace, image));
      } catch (const DimensionMismatch&) {
        throw NotInvariant("B_" + std::to_string(i) + "(u) does not preserve the subspace");
      }
    }
    restricted.push_back(std::move(parts));
    powers.push_back(coeff.power());
  }
  return assemble_family(N, subspace, pencil.coefficient(0).base(), restricted, powers, j_max);
}

template <class T>
BetheOperatorFamily<T> restrict_to_basis_vectors(const OperatorPencil<PoleMatrix<T>>& pencil,
                                                 const std::vector<std::size_t>& indices, int j_max) {
  const int N = pencil.order() - 1;
  const std::size_t dim = pencil.coefficient(0).dim();
  std::vector<char> inside(dim, 0);
  for (std::size_t i : indices) inside[i] = 1;
  std::vector<std::vector<Matrix<T>>> restricted;
  std::vector<int> powers;
  for (int i = 1; i <= N + 1; ++i) {
    const auto& coeff = pencil.coefficient(N + 1 - i);
    std::vector<Matrix<T>> parts;
    for (const auto& a : coeff.numerator()) {
      for (std::size_t r = 0; r < dim; ++r) {
        if (inside[r]) continue;
        for (const auto& [c, v] : a.row(r)) {
          (void)v;
          if (inside[c]) throw NotInvariant("B_" + std::to_string(i) + "(u) leaves the span of the given basis vectors");
        }
      }
      parts.push_back(a.block(indices, indices));
    }
    restricted.push_back(std::move(parts));
    powers.push_back(coeff.power());
  }
  Matrix<T> sub(dim, indices.size());
  for (std::size_t c = 0; c < indices.size(); ++c) sub(indices[c], c) = T(1);
  return assemble_family(N, std::move(sub), pencil.coefficient(0).base(), restricted, powers, j_max);
}

double AlgebraSelfCheck::max_residual() const {
  return std::max({commutativity, gl_commutation, symmetry, b1_identity, lower_coefficients});
}

template <class T>
AlgebraSelfCheck algebra_selfcheck(const OperatorPencil<PoleMatrix<T>>& pencil, const TensorModule& m,
                                   const Sites<T>& sites, const std::vector<std::pair<T, T>>& samples) {
  AlgebraSelfCheck out;
  out.exact = is_exact_v<T>;
  out.sample_pairs = samples.size();
  const int N = pencil.order() - 1;
  const std::size_t dim = m.module.dim();
  auto coeff = [&](int i) -> const PoleMatrix<T>& { return pencil.coefficient(N + 1 - i); };

  std::vector<SparseMatrix<T>> gens;
  for (int k = 0; k <= N; ++k)
    for (int l = 0; l <= N; ++l) gens.push_back(m.module.e(k, l).template cast<T>());

  for (const auto& [u0, v0] : samples) {
    std::vector<SparseMatrix<T>> bu, bv;
    for (int i = 1; i <= N + 1; ++i) {
      bu.push_back(coeff(i).evaluate(u0));
      bv.push_back(coeff(i).evaluate(v0));
    }
    for (const auto& a : bu) {
      for (const auto& b : bv) out.commutativity = std::max(out.commutativity, commutator(a, b).max_abs());
      for (const auto& g : gens) out.gl_commutation = std::max(out.gl_commutation, commutator(a, g).max_abs());
    }
  }

  const auto gram = m.form.gram.template cast<T>();
  for (int i = 1; i <= N + 1; ++i)
    for (const auto& a : coeff(i).numerator())
      out.symmetry = std::max(out.symmetry, (gram * a - a.transpose() * gram).max_abs());

  Polynomial<T> expected_num;
  for (std::size_t s = 0; s < m.factors.size(); ++s)
    expected_num = expected_num - T(m.factors[s].highest_weight.size()) * cofactor(sites.z, s);
  const auto diff = coeff(1) - PoleMatrix<T>::scalar(sites.base, dim, expected_num, 1);
  for (const auto& a : diff.numerator()) out.b1_identity = std::max(out.b1_identity, a.max_abs());

  for (int i = 2; i <= N + 1; ++i) {
    const auto series = coeff(i).series_at_infinity(i - 1);
    for (const auto& s : series) out.lower_coefficients = std::max(out.lower_coefficients, s.max_abs());
  }
  {
    const auto series = coeff(1).series_at_infinity(0);
    out.lower_coefficients = std::max(out.lower_coefficients, series[0].max_abs());
  }
  return out;
}

namespace {

template <class T>
T sample_value(long num, long den, double imag);

template <>
Rational sample_value<Rational>(long num, long den, double) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

template <>
Complex sample_value<Complex>(long num, long den, double imag) {
  return Complex(static_cast<double>(num) / static_cast<double>(den), imag);
}

}  // namespace

template <class T>
std::vector<std::pair<T, T>> default_sample_pairs(const Sites<T>& sites, std::size_t count) {
  std::vector<std::pair<T, T>> out;
  auto avoid = [&](T x) {
    while (std::any_of(sites.z.begin(), sites.z.end(), [&](const T& z) { return z == x; })) x = x + T(Rational(1, 7).get_d());
    return x;
  };
  for (std::size_t k = 0; k < count; ++k) {
    const long kk = static_cast<long>(k);
    out.emplace_back(avoid(sample_value<T>(7 + 3 * kk, 3, 0.25)), avoid(sample_value<T>(-5 - 2 * kk, 2, -0.5)));
  }
  return out;
}

#define GAUDIN_INSTANTIATE(T)                                                                                      \
  template Sites<T> make_sites<T>(const std::vector<T>&);                                                          \
  template PoleMatrix<T> current_matrix<T>(const TensorModule&, int, int, const Sites<T>&);                        \
  template OperatorPencil<PoleMatrix<T>> universal_operator<T>(const TensorModule&, const Sites<T>&);              \
  template BetheOperatorFamily<T> restrict_family<T>(const OperatorPencil<PoleMatrix<T>>&, const Matrix<T>&, int); \
  template BetheOperatorFamily<T> restrict_to_basis_vectors<T>(const OperatorPencil<PoleMatrix<T>>&,               \
                                                               const std::vector<std::size_t>&, int);              \
  template AlgebraSelfCheck algebra_selfcheck<T>(const OperatorPencil<PoleMatrix<T>>&, const TensorModule&,        \
                                                 const Sites<T>&, const std::vector<std::pair<T, T>>&);            \
  template std::vector<std::pair<T, T>> default_sample_pairs<T>(const Sites<T>&, std::size_t);                     \
  template Matrix<Complex> BetheOperatorFamily<T>::evaluate<Complex>(int, const Complex&) const;

GAUDIN_INSTANTIATE(Rational)
GAUDIN_INSTANTIATE(Complex)
template Matrix<Rational> BetheOperatorFamily<Rational>::evaluate<Rational>(int, const Rational&) const;

#undef GAUDIN_INSTANTIATE

}  // namespace gaudin
