#include "gaudin/weight_function.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace gaudin {

std::vector<int> ColoredSequence::word() const {
  std::vector<int> w;
  for (const auto& s : segments) w.insert(w.end(), s.begin(), s.end());
  return w;
}

namespace {

std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) return std::numeric_limits<std::uint64_t>::max();
  return a * b;
}

void compositions(int total, std::size_t parts, std::vector<int>& current,
                  const std::function<void(const std::vector<int>&)>& visit) {
  if (current.size() + 1 == parts) {
    current.push_back(total);
    visit(current);
    current.pop_back();
    return;
  }
  for (int b = 0; b <= total; ++b) {
    current.push_back(b);
    compositions(total - b, parts, current, visit);
    current.pop_back();
  }
}

}  // namespace

std::uint64_t count_terms(const GaudinProblem& p) {
  // l! ways to fill the word with variables, binomial(l + n - 1, n - 1) cuts
  std::uint64_t total = 1;
  for (int k = 2; k <= p.l_total; ++k) total = sat_mul(total, static_cast<std::uint64_t>(k));
  const auto n = static_cast<std::uint64_t>(p.n());
  const auto l = static_cast<std::uint64_t>(p.l_total);
  std::uint64_t binom = 1;
  for (std::uint64_t k = 1; k + 1 <= n; ++k) {
    // binom = C(l + k, k), exact at every step
    const std::uint64_t next = sat_mul(binom, l + k);
    if (next == std::numeric_limits<std::uint64_t>::max()) return next;
    binom = next / k;
  }
  return sat_mul(total, binom);
}

void for_each_colored_sequence(const GaudinProblem& p, const std::function<void(const ColoredSequence&)>& visit) {
  std::vector<int> word;
  for (int i = 1; i <= p.N; ++i) word.insert(word.end(), static_cast<std::size_t>(p.l[static_cast<std::size_t>(i - 1)]), i);
  do {
    std::vector<int> current;
    compositions(p.l_total, p.n(), current, [&](const std::vector<int>& b) {
      ColoredSequence C;
      std::size_t pos = 0;
      for (int bs : b) {
        C.segments.emplace_back(word.begin() + static_cast<std::ptrdiff_t>(pos), word.begin() + static_cast<std::ptrdiff_t>(pos + bs));
        pos += static_cast<std::size_t>(bs);
      }
      visit(C);
    });
  } while (std::next_permutation(word.begin(), word.end()));
}

void for_each_assignment(const GaudinProblem& p, const ColoredSequence& C,
                         const std::function<void(const VariableAssignment&)>& visit) {
  const auto word = C.word();
  std::vector<std::vector<std::size_t>> positions(static_cast<std::size_t>(p.N) + 1);
  for (std::size_t a = 0; a < word.size(); ++a) positions[static_cast<std::size_t>(word[a])].push_back(a);
  std::vector<std::size_t> offset(static_cast<std::size_t>(p.N) + 2, 0);
  for (int i = 1; i <= p.N; ++i) offset[static_cast<std::size_t>(i) + 1] = offset[static_cast<std::size_t>(i)] + static_cast<std::size_t>(p.l[static_cast<std::size_t>(i - 1)]);

  VariableAssignment va;
  va.sigma.assign(word.size(), 0);
  auto recurse = [&](auto&& self, int color) -> void {
    if (color > p.N) {
      visit(va);
      return;
    }
    const auto& pos = positions[static_cast<std::size_t>(color)];
    std::vector<std::size_t> perm(pos.size());
    std::iota(perm.begin(), perm.end(), offset[static_cast<std::size_t>(color)]);
    do {
      for (std::size_t k = 0; k < pos.size(); ++k) va.sigma[pos[k]] = perm[k];
      self(self, color + 1);
    } while (std::next_permutation(perm.begin(), perm.end()));
  };
  recurse(recurse, 1);
}

std::vector<WeightFunctionTerm> enumerate_terms(const GaudinProblem& p, std::uint64_t max_terms) {
  const auto count = count_terms(p);
  if (count > max_terms) throw TermLimitExceeded(std::to_string(count) + " terms exceed the limit " + std::to_string(max_terms));
  std::vector<WeightFunctionTerm> out;
  out.reserve(count);
  for_each_colored_sequence(p, [&](const ColoredSequence& C) {
    for_each_assignment(p, C, [&](const VariableAssignment& s) { out.push_back({C, s}); });
  });
  return out;
}

template <class T>
std::vector<T> colored_vector(const TensorModule& m, const ColoredSequence& C) {
  if (C.segments.size() != m.factors.size()) throw DimensionMismatch("one segment per tensor factor is required");
  std::vector<Rational> acc{Rational(1)};
  for (std::size_t s = 0; s < m.factors.size(); ++s) {
    const auto& f = m.factors[s].module;
    std::vector<Rational> v(f.dim(), Rational(0));
    v[*f.hw_index()] = 1;
    const auto& seg = C.segments[s];
    for (auto it = seg.rbegin(); it != seg.rend(); ++it) v = f.e(*it, *it - 1).apply(v);
    std::vector<Rational> next(acc.size() * v.size(), Rational(0));
    for (std::size_t a = 0; a < acc.size(); ++a) {
      if (is_zero(acc[a])) continue;
      for (std::size_t b = 0; b < v.size(); ++b)
        if (!is_zero(v[b])) next[a * v.size() + b] = acc[a] * v[b];
    }
    acc = std::move(next);
  }
  std::vector<T> out;
  out.reserve(acc.size());
  for (const auto& x : acc) out.push_back(scalar_cast<T>(x));
  return out;
}

template <class T>
T term_coefficient(const GaudinProblem& p, const ColoredSequence& C, const VariableAssignment& sigma,
                   const std::vector<T>& t_flat) {
  const auto z = p.sites<T>();
  T den = T(1);
  std::size_t a = 0;
  for (std::size_t s = 0; s < C.segments.size(); ++s) {
    const std::size_t b = C.segments[s].size();
    if (b == 0) continue;
    for (std::size_t k = 0; k + 1 < b; ++k) den *= t_flat[sigma.sigma[a + k]] - t_flat[sigma.sigma[a + k + 1]];
    den *= t_flat[sigma.sigma[a + b - 1]] - z[s];
    a += b;
  }
  if (is_zero(den)) throw DivisionByZero("a term of the weight function is singular at this point");
  return T(1) / den;
}

namespace {

template <class T>
std::pair<std::vector<T>, double> evaluate_with_mass(const GaudinProblem& p, const TensorModule& m, const PointConfig<T>& t,
                                                     std::uint64_t max_terms) {
  const auto x = t.flat();
  if (x.size() != static_cast<std::size_t>(p.l_total)) throw DimensionMismatch("point has the wrong number of coordinates");
  detail::require_in_u(variable_layout(p), x, p.sites<T>());
  const auto count = count_terms(p);
  if (count > max_terms) throw TermLimitExceeded(std::to_string(count) + " terms exceed the limit " + std::to_string(max_terms));

  std::vector<T> acc(m.module.dim(), T(0));
  double mass = 0.0;
  for_each_colored_sequence(p, [&](const ColoredSequence& C) {
    const auto v = colored_vector<T>(m, C);
    if (std::all_of(v.begin(), v.end(), [](const T& e) { return is_zero(e); })) return;
    T coeff = T(0);
    for_each_assignment(p, C, [&](const VariableAssignment& s) {
      const T c = term_coefficient(p, C, s, x);
      coeff += c;
      mass = std::max(mass, magnitude(c));
    });
    if (is_zero(coeff)) return;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!is_zero(v[k])) acc[k] += coeff * v[k];
  });

  for (std::size_t k = 0; k < acc.size(); ++k)
    if (!is_zero(acc[k]) && m.module.basis_weights()[k] != p.lambda_inf.weight())
      throw NotInvariant("weight function left the weight space of the weight at infinity");
  return {std::move(acc), mass};
}

double norm_of(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

}  // namespace

template <class T>
std::vector<T> omega_evaluate(const GaudinProblem& p, const TensorModule& m, const PointConfig<T>& t,
                              std::uint64_t max_terms) {
  return evaluate_with_mass(p, m, t, max_terms).first;
}

template <class T>
T shapovalov_pairing(const SymmetricForm& s, const std::vector<T>& a, const std::vector<T>& b) {
  if (a.size() != s.gram.rows() || b.size() != s.gram.cols()) throw DimensionMismatch("pairing of vectors of the wrong size");
  T acc = T(0);
  for (std::size_t r = 0; r < s.gram.rows(); ++r) {
    if (is_zero(a[r])) continue;
    for (const auto& [c, g] : s.gram.row(r))
      if (!is_zero(b[c])) acc += a[r] * scalar_cast<T>(g) * b[c];
  }
  return acc;
}

BetheVector bethe_vector(const GaudinProblem& p, const TensorModule& m, const CriticalOrbit& orbit, std::uint64_t max_terms) {
  if (orbit.degenerate) throw DegenerateCriticalPoint("the orbit has a degenerate Hessian");
  auto [omega, mass] = evaluate_with_mass(p, m, orbit.rep, max_terms);
  BetheVector out;
  out.norm = norm_of(omega);
  if (out.norm == 0.0 || out.norm <= 1e-13 * mass)
    throw ZeroVector("the weight function vanishes at the critical point");
  const int rank = m.module.rank();
  for (int i = 0; i < rank; ++i) {
    for (int j = i + 1; j < rank; ++j)
      out.singular_residual = std::max(out.singular_residual, norm_of(m.module.e(i, j).cast<Complex>().apply(omega)) / out.norm);
    auto w = m.module.e(i, i).cast<Complex>().apply(omega);
    for (std::size_t k = 0; k < w.size(); ++k) w[k] -= double(p.lambda_inf[static_cast<std::size_t>(i)]) * omega[k];
    out.weight_residual = std::max(out.weight_residual, norm_of(w) / out.norm);
  }
  out.omega = std::move(omega);
  return out;
}

#define GAUDIN_INSTANTIATE(T)                                                                                         \
  template std::vector<T> colored_vector<T>(const TensorModule&, const ColoredSequence&);                             \
  template T term_coefficient<T>(const GaudinProblem&, const ColoredSequence&, const VariableAssignment&,             \
                                 const std::vector<T>&);                                                              \
  template std::vector<T> omega_evaluate<T>(const GaudinProblem&, const TensorModule&, const PointConfig<T>&,        \
                                            std::uint64_t);                                                           \
  template T shapovalov_pairing<T>(const SymmetricForm&, const std::vector<T>&, const std::vector<T>&);

GAUDIN_INSTANTIATE(Rational)
GAUDIN_INSTANTIATE(Complex)

#undef GAUDIN_INSTANTIATE

}  // namespace gaudin
