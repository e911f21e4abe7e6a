#include "gaudin/repr.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "gaudin/errors.hpp"
#include "gaudin/linalg.hpp"

namespace gaudin {

int Weight::dot(const Weight& o) const {
  if (coords.size() != o.coords.size()) throw DimensionMismatch("weights of different rank");
  return std::inner_product(coords.begin(), coords.end(), o.coords.begin(), 0);
}

Weight operator+(const Weight& a, const Weight& b) {
  if (a.coords.size() != b.coords.size()) throw DimensionMismatch("weights of different rank");
  Weight w = a;
  for (std::size_t k = 0; k < w.coords.size(); ++k) w.coords[k] += b.coords[k];
  return w;
}

Weight operator-(const Weight& a, const Weight& b) { return a + (-1) * b; }

Weight operator*(int k, const Weight& a) {
  Weight w = a;
  for (int& c : w.coords) c *= k;
  return w;
}

Weight Weight::simple_root(int i, int rank) {
  Weight w{std::vector<int>(static_cast<std::size_t>(rank), 0)};
  w.coords[static_cast<std::size_t>(i - 1)] = 1;
  w.coords[static_cast<std::size_t>(i)] = -1;
  return w;
}

Weight Weight::unit(int i, int rank) {
  Weight w{std::vector<int>(static_cast<std::size_t>(rank), 0)};
  w.coords[static_cast<std::size_t>(i)] = 1;
  return w;
}

Partition::Partition(std::vector<int> parts) : parts_(std::move(parts)) {
  for (std::size_t k = 0; k < parts_.size(); ++k) {
    if (parts_[k] < 0) throw NotAPartition(str() + " has a negative part");
    if (k > 0 && parts_[k] > parts_[k - 1]) throw NotAPartition(str() + " is not weakly decreasing");
  }
}

int Partition::size() const { return std::accumulate(parts_.begin(), parts_.end(), 0); }

std::string Partition::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t k = 0; k < parts_.size(); ++k) os << (k ? "," : "") << parts_[k];
  os << ')';
  return os.str();
}

GlModule::GlModule(int rank, std::vector<Weight> basis_weights, std::vector<SparseMatrix<Rational>> generators,
                   std::optional<std::size_t> hw_index)
    : rank_(rank), weights_(std::move(basis_weights)), gens_(std::move(generators)), hw_(hw_index) {
  if (gens_.size() != static_cast<std::size_t>(rank_ * rank_)) throw DimensionMismatch("generator count");
  for (const auto& g : gens_)
    if (g.rows() != weights_.size() || g.cols() != weights_.size()) throw DimensionMismatch("generator size");
}

std::vector<std::size_t> GlModule::weight_indices(const Weight& mu) const {
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < weights_.size(); ++k)
    if (weights_[k] == mu) idx.push_back(k);
  return idx;
}

Partition derive_infinity_weight(const std::vector<Partition>& lambdas, const std::vector<int>& l) {
  const std::size_t rank = l.size() + 1;
  Weight w{std::vector<int>(rank, 0)};
  for (const auto& lam : lambdas) {
    if (lam.length() != rank) throw NotAPartition(lam.str() + " does not have N+1 parts");
    if (lam[rank - 1] != 0) throw NotAPartition(lam.str() + " has a nonzero last part");
    w = w + lam.weight();
  }
  for (std::size_t j = 0; j < l.size(); ++j) {
    if (l[j] < 0) throw NotAPartition("negative entry in l");
    w = w - l[j] * Weight::simple_root(static_cast<int>(j) + 1, static_cast<int>(rank));
  }
  return Partition(w.coords);
}

long weyl_dimension(const Partition& lambda) {
  const auto n = static_cast<long>(lambda.length());
  mpq_class d = 1;
  for (long i = 0; i < n; ++i)
    for (long j = i + 1; j < n; ++j) d *= mpq_class(lambda[static_cast<std::size_t>(i)] - lambda[static_cast<std::size_t>(j)] + j - i, j - i);
  d.canonicalize();
  return d.get_num().get_si();
}

namespace {

using Word = std::vector<int>;  // f_{w[0]} f_{w[1]} ... f_{w[k-1]} v, simple indices 0-based

/// Shapovalov pairing of lowering words on the Verma module of highest weight lambda.
class WordForm {
 public:
  WordForm(std::vector<int> lambda) : lambda_(std::move(lambda)) {}

  Rational pair(const Word& a, const Word& b) {
    if (a.size() != b.size()) return 0;
    if (a.empty()) return 1;
    if (!same_content(a, b)) return 0;
    auto key = std::make_pair(a, b);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    // S(f_i a', b) = S(a', e_i b)
    const int i = a.front();
    const Word rest(a.begin() + 1, a.end());
    Rational total = 0;
    for (const auto& [coeff, word] : raise(i, b)) total += coeff * pair(rest, word);
    memo_.emplace(std::move(key), total);
    return total;
  }

  /// e_i (f_{b0} ... f_{bm-1} v) as a combination of shorter words.
  std::vector<std::pair<Rational, Word>> raise(int i, const Word& b) const {
    std::vector<std::pair<Rational, Word>> out;
    std::vector<int> mu = lambda_;  // weight of f_{b(k+1)} ... v, built from the right
    for (std::size_t k = b.size(); k-- > 0;) {
      if (b[k] == i) {
        const int pairing = mu[static_cast<std::size_t>(i)] - mu[static_cast<std::size_t>(i) + 1];
        if (pairing != 0) {
          Word w;
          w.reserve(b.size() - 1);
          for (std::size_t r = 0; r < b.size(); ++r)
            if (r != k) w.push_back(b[r]);
          out.emplace_back(Rational(pairing), std::move(w));
        }
      }
      mu[static_cast<std::size_t>(b[k])] -= 1;
      mu[static_cast<std::size_t>(b[k]) + 1] += 1;
    }
    return out;
  }

 private:
  static bool same_content(const Word& a, const Word& b) {
    Word x = a, y = b;
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    return x == y;
  }

  std::vector<int> lambda_;
  std::map<std::pair<Word, Word>, Rational> memo_;
};

Weight word_weight(const std::vector<int>& lambda, const Word& w) {
  Weight mu{lambda};
  for (int i : w) {
    mu.coords[static_cast<std::size_t>(i)] -= 1;
    mu.coords[static_cast<std::size_t>(i) + 1] += 1;
  }
  return mu;
}

}  // namespace

IrreducibleModule build_irreducible(const Partition& lambda, int N) {
  const int rank = N + 1;
  if (lambda.length() != static_cast<std::size_t>(rank)) throw NotAPartition(lambda.str() + " does not have N+1 parts");
  WordForm form(lambda.parts());

  // Basis words grouped by weight, level by level (level = number of lowerings).
  std::vector<Word> basis{Word{}};
  std::vector<Weight> weights{lambda.weight()};
  std::vector<std::size_t> level_begin{0};
  while (true) {
    const std::size_t lo = level_begin.back();
    const std::size_t hi = basis.size();
    std::map<Weight, std::vector<Word>, std::greater<>> candidates;
    for (std::size_t b = lo; b < hi; ++b)
      for (int i = 0; i < N; ++i) {
        Word w{i};
        w.insert(w.end(), basis[b].begin(), basis[b].end());
        candidates[word_weight(lambda.parts(), w)].push_back(std::move(w));
      }
    for (auto& [mu, words] : candidates) {
      Matrix<Rational> gram(words.size(), words.size());
      for (std::size_t a = 0; a < words.size(); ++a)
        for (std::size_t b = a; b < words.size(); ++b) gram(a, b) = gram(b, a) = form.pair(words[a], words[b]);
      for (std::size_t p : row_echelon(gram).pivots) {
        basis.push_back(words[p]);
        weights.push_back(mu);
      }
    }
    if (basis.size() == hi) break;
    level_begin.push_back(hi);
  }

  const std::size_t dim = basis.size();
  std::map<Weight, std::vector<std::size_t>> by_weight;
  for (std::size_t k = 0; k < dim; ++k) by_weight[weights[k]].push_back(k);

  SparseMatrix<Rational> gram(dim, dim);
  std::map<Weight, Matrix<Rational>> block_gram;
  for (const auto& [mu, idx] : by_weight) {
    Matrix<Rational> g(idx.size(), idx.size());
    for (std::size_t a = 0; a < idx.size(); ++a)
      for (std::size_t b = 0; b < idx.size(); ++b) {
        g(a, b) = form.pair(basis[idx[a]], basis[idx[b]]);
        gram.add(idx[a], idx[b], g(a, b));
      }
    block_gram.emplace(mu, std::move(g));
  }

  // Coordinates of target vectors in the basis of weight `mu` from their
  // pairings with that basis: G x = r.
  auto coordinates = [&](const Weight& mu, const Matrix<Rational>& pairings) {
    return solve(block_gram.at(mu), pairings);
  };

  std::vector<SparseMatrix<Rational>> gens(static_cast<std::size_t>(rank * rank), SparseMatrix<Rational>(dim, dim));
  auto gen = [&](int i, int j) -> SparseMatrix<Rational>& { return gens[static_cast<std::size_t>(i * rank + j)]; };

  for (int i = 0; i < rank; ++i)
    for (std::size_t k = 0; k < dim; ++k) gen(i, i).add(k, k, Rational(weights[k].coords[static_cast<std::size_t>(i)]));

  for (int i = 0; i < N; ++i) {
    const Weight alpha = Weight::simple_root(i + 1, rank);
    for (const auto& [mu, idx] : by_weight) {
      // lowering f_i: weight mu -> mu - alpha
      if (auto it = by_weight.find(mu - alpha); it != by_weight.end()) {
        const auto& target = it->second;
        Matrix<Rational> r(target.size(), idx.size());
        for (std::size_t c = 0; c < idx.size(); ++c) {
          Word w{i};
          w.insert(w.end(), basis[idx[c]].begin(), basis[idx[c]].end());
          for (std::size_t a = 0; a < target.size(); ++a) r(a, c) = form.pair(basis[target[a]], w);
        }
        const auto x = coordinates(mu - alpha, r);
        for (std::size_t a = 0; a < target.size(); ++a)
          for (std::size_t c = 0; c < idx.size(); ++c) gen(i + 1, i).add(target[a], idx[c], x(a, c));
      }
      // raising e_i: weight mu -> mu + alpha, S(b'', e_i b) = S(f_i b'', b)
      if (auto it = by_weight.find(mu + alpha); it != by_weight.end()) {
        const auto& target = it->second;
        Matrix<Rational> r(target.size(), idx.size());
        for (std::size_t a = 0; a < target.size(); ++a) {
          Word w{i};
          w.insert(w.end(), basis[target[a]].begin(), basis[target[a]].end());
          for (std::size_t c = 0; c < idx.size(); ++c) r(a, c) = form.pair(w, basis[idx[c]]);
        }
        const auto x = coordinates(mu + alpha, r);
        for (std::size_t a = 0; a < target.size(); ++a)
          for (std::size_t c = 0; c < idx.size(); ++c) gen(i, i + 1).add(target[a], idx[c], x(a, c));
      }
    }
  }
  // e_{i,j} = [e_{i,i+1}, e_{i+1,j}] and e_{j,i} = [e_{j,j-1}, e_{j-1,i}] for j > i+1.
  for (int gap = 2; gap < rank; ++gap)
    for (int i = 0; i + gap < rank; ++i) {
      const int j = i + gap;
      gen(i, j) = commutator(gen(i, i + 1), gen(i + 1, j));
      gen(j, i) = commutator(gen(j, j - 1), gen(j - 1, i));
    }

  return IrreducibleModule{lambda, GlModule(rank, std::move(weights), std::move(gens), 0), SymmetricForm{std::move(gram)}};
}

GlModule tensor_module(const std::vector<GlModule>& factors) {
  if (factors.empty()) throw DimensionMismatch("tensor product of no factors");
  const int rank = factors.front().rank();
  for (const auto& f : factors)
    if (f.rank() != rank) throw DimensionMismatch("tensor factors of different rank");
  if (factors.size() == 1) return factors.front();

  std::vector<Weight> weights{Weight{std::vector<int>(static_cast<std::size_t>(rank), 0)}};
  std::size_t dim = 1;
  for (const auto& f : factors) {
    std::vector<Weight> next;
    next.reserve(weights.size() * f.dim());
    for (const auto& w : weights)
      for (const auto& fw : f.basis_weights()) next.push_back(w + fw);
    weights = std::move(next);
    dim *= f.dim();
  }

  std::vector<SparseMatrix<Rational>> gens;
  gens.reserve(static_cast<std::size_t>(rank * rank));
  for (int i = 0; i < rank; ++i)
    for (int j = 0; j < rank; ++j) {
      SparseMatrix<Rational> total(dim, dim);
      for (std::size_t slot = 0; slot < factors.size(); ++slot) {
        SparseMatrix<Rational> term = SparseMatrix<Rational>::identity(1);
        for (std::size_t s = 0; s < factors.size(); ++s)
          term = kron(term, s == slot ? factors[s].e(i, j) : SparseMatrix<Rational>::identity(factors[s].dim()));
        total += term;
      }
      gens.push_back(std::move(total));
    }

  std::optional<std::size_t> hw;
  if (std::all_of(factors.begin(), factors.end(), [](const GlModule& f) { return f.hw_index().has_value(); })) {
    std::size_t idx = 0;
    for (const auto& f : factors) idx = idx * f.dim() + *f.hw_index();
    hw = idx;
  }
  return GlModule(rank, std::move(weights), std::move(gens), hw);
}

SymmetricForm tensor_shapovalov(const std::vector<SymmetricForm>& forms) {
  if (forms.empty()) throw DimensionMismatch("tensor product of no forms");
  SparseMatrix<Rational> g = forms.front().gram;
  for (std::size_t s = 1; s < forms.size(); ++s) g = kron(g, forms[s].gram);
  return SymmetricForm{std::move(g)};
}

WeightSubspaces weight_and_singular_subspace(const GlModule& m, const Weight& mu) {
  WeightSubspaces out;
  out.weight_indices = m.weight_indices(mu);
  const std::size_t k = out.weight_indices.size();
  out.weight_basis = Matrix<Rational>(m.dim(), k);
  for (std::size_t c = 0; c < k; ++c) out.weight_basis(out.weight_indices[c], c) = 1;

  // Stack the raising operators restricted to M[mu].
  std::vector<std::vector<Rational>> rows;
  const int rank = m.rank();
  for (int i = 0; i < rank; ++i)
    for (int j = i + 1; j < rank; ++j) {
      const auto target = m.weight_indices(mu + Weight::unit(i, rank) - Weight::unit(j, rank));
      if (target.empty()) continue;
      const auto blk = m.e(i, j).block(target, out.weight_indices);
      for (std::size_t r = 0; r < blk.rows(); ++r) {
        std::vector<Rational> row(k);
        for (std::size_t c = 0; c < k; ++c) row[c] = blk(r, c);
        rows.push_back(std::move(row));
      }
    }
  Matrix<Rational> stacked(rows.size(), k);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < k; ++c) stacked(r, c) = rows[r][c];
  out.singular_coords = rows.empty() ? Matrix<Rational>::identity(k) : nullspace(stacked);
  out.singular_basis = out.weight_basis * out.singular_coords;
  return out;
}

std::size_t commutation_violations(const GlModule& m) {
  const int r = m.rank();
  std::size_t bad = 0;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < r; ++j)
      for (int s = 0; s < r; ++s)
        for (int k = 0; k < r; ++k) {
          SparseMatrix<Rational> lhs = commutator(m.e(i, j), m.e(s, k));
          if (j == s) lhs -= m.e(i, k);
          if (i == k) lhs += m.e(s, j);
          if (!lhs.is_zero()) ++bad;
        }
  return bad;
}

std::size_t contravariance_violations(const GlModule& m, const SymmetricForm& s) {
  std::size_t bad = 0;
  if (!(s.gram == s.gram.transpose())) ++bad;
  for (int i = 0; i < m.rank(); ++i)
    for (int j = 0; j < m.rank(); ++j)
      if (!(s.gram * m.e(i, j) == m.e(j, i).transpose() * s.gram)) ++bad;
  return bad;
}

std::size_t TensorModule::index_of(const std::vector<std::size_t>& factor_indices) const {
  std::size_t idx = 0;
  for (std::size_t s = 0; s < factors.size(); ++s) idx = idx * factors[s].module.dim() + factor_indices[s];
  return idx;
}

std::size_t TensorModule::highest_index() const { return *module.hw_index(); }

TensorModule build_tensor(const std::vector<Partition>& lambdas, int N) {
  TensorModule t;
  std::vector<GlModule> mods;
  std::vector<SymmetricForm> forms;
  for (const auto& lam : lambdas) {
    t.factors.push_back(build_irreducible(lam, N));
    mods.push_back(t.factors.back().module);
    forms.push_back(t.factors.back().form);
  }
  t.module = tensor_module(mods);
  t.form = tensor_shapovalov(forms);
  return t;
}

}  // namespace gaudin
