#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gaudin/master.hpp"

namespace gaudin {

/// Colors c^s_1..c^s_{b_s} for each site s; color i occurs l_i times overall.
struct ColoredSequence {
  std::vector<std::vector<int>> segments;

  std::vector<int> word() const;
};

/// sigma[a] = flat index of the variable at position a (positions follow
/// the flattened segments). Flat indices list group 1 first, then group 2, ...
struct VariableAssignment {
  std::vector<std::size_t> sigma;
};

struct WeightFunctionTerm {
  ColoredSequence C;
  VariableAssignment sigma;
};

inline constexpr std::uint64_t default_max_terms = 10'000'000;

/// l_total! * binomial(l_total + n - 1, n - 1), saturating at UINT64_MAX.
std::uint64_t count_terms(const GaudinProblem& p);

/// Visits every colored sequence once, in lexicographic order of the color
/// word, then of the segment lengths (b_1, ..., b_n) read from the left.
void for_each_colored_sequence(const GaudinProblem& p, const std::function<void(const ColoredSequence&)>& visit);

/// All bijections compatible with C; within each color the variable indices
/// run through permutations in lexicographic order, colors nested 1..N.
void for_each_assignment(const GaudinProblem& p, const ColoredSequence& C,
                         const std::function<void(const VariableAssignment&)>& visit);

/// Every (C, sigma) pair. Throws TermLimitExceeded above `max_terms`.
std::vector<WeightFunctionTerm> enumerate_terms(const GaudinProblem& p, std::uint64_t max_terms = default_max_terms);

/// e_C v in the tensor basis; operators of a segment act right to left.
template <class T>
std::vector<T> colored_vector(const TensorModule& m, const ColoredSequence& C);

/// omega_{C, sigma}(t).
template <class T>
T term_coefficient(const GaudinProblem& p, const ColoredSequence& C, const VariableAssignment& sigma,
                   const std::vector<T>& t_flat);

/// omega(t) = sum over (C, sigma) of omega_{C, sigma} e_C v. Checks t in U, the
/// term limit, and weight membership of the result.
template <class T>
std::vector<T> omega_evaluate(const GaudinProblem& p, const TensorModule& m, const PointConfig<T>& t,
                              std::uint64_t max_terms = default_max_terms);

/// Bilinear Shapovalov pairing a^T G b.
template <class T>
T shapovalov_pairing(const SymmetricForm& s, const std::vector<T>& a, const std::vector<T>& b);

struct BetheVector {
  std::vector<Complex> omega;
  double norm = 0.0;                  // Euclidean norm in the module basis
  double singular_residual = 0.0;     // max_{i<j} |e_ij omega| / |omega|
  double weight_residual = 0.0;       // max_i |(e_ii - lambda_inf_i) omega| / |omega|
};

/// omega at the orbit representative with its diagnostics. Throws
/// DegenerateCriticalPoint for degenerate orbits and ZeroVector when the
/// value vanishes.
BetheVector bethe_vector(const GaudinProblem& p, const TensorModule& m, const CriticalOrbit& orbit,
                         std::uint64_t max_terms = default_max_terms);

}  // namespace gaudin
