#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "gaudin/master.hpp"
#include "gaudin/weight_function.hpp"
#include "gaudin/wronski.hpp"

namespace gaudin {

enum class Verdict { Pass, Fail, Skipped };

std::string to_string(Verdict v);

struct CheckRecord {
  std::string name;
  Verdict verdict = Verdict::Skipped;
  std::string reason;
};

struct HarnessConfig {
  SolverConfig solver;
  std::optional<int> j_max;
  std::optional<int> d_cap;
  std::uint64_t max_terms = default_max_terms;
  std::size_t selfcheck_samples = 5;
};

struct LoadedProblem {
  GaudinProblem problem;
  HarnessConfig config;
};

/// Parses the problem document. Exact mode when every site is a rational
/// string ("p/q", integer or decimal); [re, im] pairs select numeric mode.
/// Throws SchemaError, DistinctnessError or NotAPartition.
LoadedProblem load_problem(const nlohmann::json& doc);
LoadedProblem load_problem_text(const std::string& text);
LoadedProblem load_problem_file(const std::string& path);

struct VerificationReport {
  nlohmann::ordered_json body;  // everything except the check list
  std::vector<CheckRecord> checks;

  bool any_fail() const;
  void add(std::string name, Verdict v, std::string reason);
};

struct IndependenceResult {
  Matrix<Complex> gram;
  std::vector<double> singular_values;
  std::size_t rank = 0;
  bool full_rank = false;
  std::string completeness;  // EQUAL, SHORTFALL or EXCESS
};

/// Cross-orbit Gram matrix S(omega_a, omega_b), its numerical rank (singular
/// values above 1e-8 * largest) and the orbit count against dim Sing.
IndependenceResult independence_and_completeness(const std::vector<std::vector<Complex>>& vectors,
                                                 const SymmetricForm& form, std::size_t orbit_count,
                                                 std::size_t dim_sing);

/// Sampled spectral parameters avoiding the sites and the coordinates of t.
std::vector<Complex> eigencheck_samples(const GaudinProblem& p, const PointConfig<Complex>& t, std::size_t count);

/// Full verification: self-checks, orbits, eigen/norm/singularity checks,
/// Wronskian and Schubert suites, Gram rank, completeness.
VerificationReport run_pipeline(const GaudinProblem& p, const HarnessConfig& cfg);

/// Orbit search only.
VerificationReport run_solve(const GaudinProblem& p, const HarnessConfig& cfg);

/// Eigenvalues of B_ij on every nondegenerate Bethe vector next to the
/// expansion coefficients of G_i(u, p) at infinity.
VerificationReport run_spectrum(const GaudinProblem& p, const HarnessConfig& cfg);

/// omega(t) at a user point. `point` is a list of groups, entries as in the sites.
VerificationReport run_weightfn(const GaudinProblem& p, const HarnessConfig& cfg, const nlohmann::json& point);

/// Exact algebraic suites with no solver.
VerificationReport run_selftest(const GaudinProblem& p, const HarnessConfig& cfg);

enum class ReportFormat { Json, Text };

std::string emit_report(const VerificationReport& r, ReportFormat format);

/// Inverse of the json emitter.
VerificationReport parse_report(const std::string& json_text);

/// 0 when nothing failed, 1 otherwise.
int exit_code(const VerificationReport& r);

}  // namespace gaudin
