#include "gaudin/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <thread>

#include "gaudin/bethe.hpp"
#include "gaudin/numeric.hpp"

namespace gaudin {

using ojson = nlohmann::ordered_json;

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "PASS";
    case Verdict::Fail:
      return "FAIL";
    case Verdict::Skipped:
      return "SKIPPED";
  }
  return "SKIPPED";
}

namespace {

Verdict verdict_from(const std::string& s) {
  if (s == "PASS") return Verdict::Pass;
  if (s == "FAIL") return Verdict::Fail;
  if (s == "SKIPPED") return Verdict::Skipped;
  throw SchemaError("unknown verdict " + s);
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

ojson num(double x) { return std::isfinite(x) ? ojson(x) : ojson(nullptr); }
ojson cplx(const Complex& c) { return ojson::array({num(c.real()), num(c.imag())}); }
ojson rat(const Rational& r) { return r.get_str(); }

template <class T>
ojson scalar_json(const T& x) {
  if constexpr (std::is_same_v<T, Rational>)
    return rat(x);
  else
    return cplx(x);
}

template <class T>
ojson poly_json(const Polynomial<T>& p) {
  ojson a = ojson::array();
  for (const auto& c : p.coeffs()) a.push_back(scalar_json(c));
  return a;
}

ojson point_json(const PointConfig<Complex>& t) {
  ojson groups = ojson::array();
  for (const auto& g : t.groups) {
    ojson a = ojson::array();
    for (const auto& x : g) a.push_back(cplx(x));
    groups.push_back(a);
  }
  return groups;
}

double norm_of(const std::vector<Complex>& v) {
  double s = 0.0;
  for (const auto& x : v) s += std::norm(x);
  return std::sqrt(s);
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(count, 1))));
  if (threads == 1) {
    for (std::size_t k = 0; k < count; ++k) fn(k);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned tid = 0; tid < threads; ++tid)
    pool.emplace_back([&, tid] {
      try {
        for (std::size_t k = next++; k < count; k = next++) fn(k);
      } catch (...) {
        errors[tid] = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------- input

const nlohmann::json& require(const nlohmann::json& doc, const char* key) {
  if (!doc.contains(key)) throw SchemaError(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

int as_int(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number_integer()) throw SchemaError(what + " must be an integer");
  return v.get<int>();
}

double as_double(const nlohmann::json& v, const std::string& what) {
  if (!v.is_number()) throw SchemaError(what + " must be a number");
  return v.get<double>();
}

void read_solver(const nlohmann::json& s, HarnessConfig& cfg) {
  if (!s.is_object()) throw SchemaError("solver must be an object");
  for (const auto& [key, v] : s.items()) {
    if (key == "seed") {
      if (!v.is_number_unsigned()) throw SchemaError("seed must be a nonnegative integer");
      cfg.solver.seed = v.get<std::uint64_t>();
    } else if (key == "starts") {
      if (!v.is_number_unsigned()) throw SchemaError("starts must be a nonnegative integer");
      cfg.solver.starts = v.get<std::size_t>();
    } else if (key == "tol_residual") {
      cfg.solver.tol_residual = as_double(v, key);
    } else if (key == "tol_dedup") {
      cfg.solver.tol_dedup = as_double(v, key);
    } else if (key == "tol_degenerate") {
      cfg.solver.tol_degenerate = as_double(v, key);
    } else if (key == "pole_margin") {
      cfg.solver.pole_margin = as_double(v, key);
    } else if (key == "max_iterations") {
      cfg.solver.max_iterations = as_int(v, key);
    } else if (key == "precision") {
      if (!v.is_string() || (v != "double" && v != "long-double")) throw SchemaError("precision must be double or long-double");
      cfg.solver.precision = v.get<std::string>();
    } else if (key == "threads") {
      const int t = as_int(v, key);
      if (t < 1) throw SchemaError("threads must be positive");
      cfg.solver.threads = static_cast<unsigned>(t);
    } else if (key == "j_max") {
      cfg.j_max = as_int(v, key);
      if (*cfg.j_max < 0) throw SchemaError("j_max must be nonnegative");
    } else if (key == "d_cap") {
      cfg.d_cap = as_int(v, key);
    } else if (key == "max_terms") {
      if (!v.is_number_unsigned()) throw SchemaError("max_terms must be a nonnegative integer");
      cfg.max_terms = v.get<std::uint64_t>();
    } else {
      throw SchemaError("unknown solver option \"" + key + "\"");
    }
  }
}

// A site or coordinate entry: rational string or [re, im].
struct Entry {
  std::optional<Rational> exact;
  Complex value;
};

Entry read_entry(const nlohmann::json& v, const std::string& what) {
  if (v.is_string()) {
    Entry e;
    e.exact = parse_rational(v.get<std::string>());
    e.value = to_complex(*e.exact);
    return e;
  }
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
    Entry e;
    e.value = {v[0].get<double>(), v[1].get<double>()};
    if (!std::isfinite(e.value.real()) || !std::isfinite(e.value.imag())) throw SchemaError(what + " is not finite");
    return e;
  }
  throw SchemaError(what + " must be a rational string or a [re, im] pair");
}

}  // namespace

LoadedProblem load_problem(const nlohmann::json& doc) {
  if (!doc.is_object()) throw SchemaError("problem must be a JSON object");
  for (const auto& [key, v] : doc.items())
    if (key != "N" && key != "partitions" && key != "l" && key != "z" && key != "solver" && key != "name")
      throw SchemaError("unknown field \"" + key + "\"");
  const int N = as_int(require(doc, "N"), "N");
  if (N < 0) throw SchemaError("N must be nonnegative");

  const auto& parts = require(doc, "partitions");
  if (!parts.is_array() || parts.empty()) throw SchemaError("partitions must be a nonempty array");
  std::vector<Partition> lambdas;
  for (const auto& row : parts) {
    if (!row.is_array()) throw SchemaError("each partition must be an array of integers");
    std::vector<int> v;
    for (const auto& x : row) v.push_back(as_int(x, "partition entry"));
    lambdas.emplace_back(std::move(v));
  }

  const auto& lj = require(doc, "l");
  if (!lj.is_array()) throw SchemaError("l must be an array");
  if (lj.size() != static_cast<std::size_t>(N)) throw SchemaError("l must have N entries");
  std::vector<int> l;
  for (const auto& x : lj) {
    l.push_back(as_int(x, "l entry"));
    if (l.back() < 0) throw SchemaError("l entries must be nonnegative");
  }

  const auto& zj = require(doc, "z");
  if (!zj.is_array()) throw SchemaError("z must be an array");
  if (zj.size() != lambdas.size()) throw SchemaError("z must have one entry per partition");
  std::vector<Entry> z;
  for (std::size_t s = 0; s < zj.size(); ++s) z.push_back(read_entry(zj[s], "z[" + std::to_string(s) + "]"));

  LoadedProblem out;
  if (doc.contains("solver")) read_solver(doc.at("solver"), out.config);
  const bool exact = std::all_of(z.begin(), z.end(), [](const Entry& e) { return e.exact.has_value(); });
  if (exact) {
    std::vector<Rational> zr;
    for (const auto& e : z) zr.push_back(*e.exact);
    out.problem = GaudinProblem::create(N, std::move(lambdas), std::move(l), std::move(zr));
  } else {
    std::vector<Complex> zc;
    for (const auto& e : z) zc.push_back(e.value);
    out.problem = GaudinProblem::create(N, std::move(lambdas), std::move(l), std::move(zc));
  }
  return out;
}

LoadedProblem load_problem_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
  return load_problem(doc);
}

LoadedProblem load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_problem_text(ss.str());
}

// ---------------------------------------------------------------- report

bool VerificationReport::any_fail() const {
  return std::any_of(checks.begin(), checks.end(), [](const CheckRecord& c) { return c.verdict == Verdict::Fail; });
}

void VerificationReport::add(std::string name, Verdict v, std::string reason) {
  checks.push_back({std::move(name), v, std::move(reason)});
}

int exit_code(const VerificationReport& r) { return r.any_fail() ? 1 : 0; }

std::string emit_report(const VerificationReport& r, ReportFormat format) {
  if (format == ReportFormat::Json) {
    ojson doc = r.body;
    ojson checks = ojson::array();
    for (const auto& c : r.checks)
      checks.push_back(ojson{{"name", c.name}, {"verdict", to_string(c.verdict)}, {"reason", c.reason}});
    doc["checks"] = checks;
    doc["verdict"] = r.any_fail() ? "FAIL" : "PASS";
    return doc.dump(2) + "\n";
  }
  std::ostringstream os;
  os << r.body.value("schema", std::string("gaudin-report/1")) << "  command: " << r.body.value("command", std::string("?"))
     << "\n";
  if (r.body.contains("problem")) {
    const auto& p = r.body["problem"];
    os << "problem: N=" << p["N"].dump() << " partitions=" << p["partitions"].dump() << " l=" << p["l"].dump()
       << " z=" << p["z"].dump() << " mode=" << p["mode"].get<std::string>() << "\n";
  }
  if (r.body.contains("counts")) os << "counts: " << r.body["counts"].dump() << "\n";
  std::size_t width = 0;
  for (const auto& c : r.checks) width = std::max(width, c.name.size());
  for (const auto& c : r.checks) {
    std::string v = to_string(c.verdict);
    os << v << std::string(8 - v.size(), ' ') << c.name << std::string(width + 2 - c.name.size(), ' ') << c.reason << "\n";
  }
  os << "overall: " << (r.any_fail() ? "FAIL" : "PASS") << "\n";
  return os.str();
}

VerificationReport parse_report(const std::string& json_text) {
  ojson doc;
  try {
    doc = ojson::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("invalid report JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("checks") || !doc["checks"].is_array())
    throw SchemaError("a report is an object with a checks array");
  VerificationReport r;
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    if (it.key() == "checks") {
      for (const auto& c : it.value()) {
        try {
          r.checks.push_back({c.at("name").get<std::string>(), verdict_from(c.at("verdict").get<std::string>()),
                              c.at("reason").get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
          throw SchemaError(std::string("malformed check entry: ") + e.what());
        }
      }
    } else if (it.key() != "verdict") {
      r.body[it.key()] = it.value();
    }
  }
  return r;
}

// ---------------------------------------------------------------- checks

IndependenceResult independence_and_completeness(const std::vector<std::vector<Complex>>& vectors,
                                                 const SymmetricForm& form, std::size_t orbit_count,
                                                 std::size_t dim_sing) {
  IndependenceResult out;
  const std::size_t k = vectors.size();
  out.gram = Matrix<Complex>(k, k);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b) out.gram(a, b) = shapovalov_pairing<Complex>(form, vectors[a], vectors[b]);
  if (k > 0) {
    out.singular_values = numeric::singular_values(out.gram);
    const double top = out.singular_values.front();
    for (double s : out.singular_values)
      if (top > 0 && s > 1e-8 * top) ++out.rank;
  }
  out.full_rank = k > 0 && out.rank == k;
  out.completeness = orbit_count == dim_sing ? "EQUAL" : orbit_count < dim_sing ? "SHORTFALL" : "EXCESS";
  return out;
}

std::vector<Complex> eigencheck_samples(const GaudinProblem& p, const PointConfig<Complex>& t, std::size_t count) {
  std::vector<Complex> avoid = p.z;
  for (const auto& g : t.groups) avoid.insert(avoid.end(), g.begin(), g.end());
  const double scale = p.scale();
  std::vector<Complex> out;
  constexpr double golden = 2.399963229728653;
  for (std::size_t k = 0; out.size() < count; ++k) {
    const double r = scale * (0.35 + 2.0 * static_cast<double>(k % 17) / 17.0);
    const Complex u = std::polar(r, 0.1 + golden * static_cast<double>(k));
    const bool clear = std::all_of(avoid.begin(), avoid.end(), [&](const Complex& x) { return std::abs(u - x) > 1e-2 * scale; });
    if (clear) out.push_back(u);
  }
  return out;
}

namespace {

ojson problem_json(const GaudinProblem& p) {
  ojson parts = ojson::array();
  for (const auto& lam : p.lambdas) parts.push_back(lam.parts());
  ojson z = ojson::array();
  for (std::size_t s = 0; s < p.n(); ++s) z.push_back(p.exact() ? rat((*p.z_exact)[s]) : cplx(p.z[s]));
  return ojson{{"N", p.N},         {"partitions", parts}, {"l", p.l}, {"z", z}, {"mode", p.exact() ? "exact" : "numeric"},
               {"lambda_inf", p.lambda_inf.parts()}};
}

ojson config_json(const GaudinProblem& p, const HarnessConfig& cfg) {
  return ojson{{"seed", cfg.solver.seed},
               {"starts", cfg.solver.starts},
               {"tol_residual", cfg.solver.tol_residual},
               {"tol_dedup", cfg.solver.tol_dedup},
               {"tol_degenerate", cfg.solver.tol_degenerate},
               {"pole_margin", cfg.solver.pole_margin},
               {"max_iterations", cfg.solver.max_iterations},
               {"precision", cfg.solver.precision},
               {"threads", cfg.solver.threads},
               {"j_max", cfg.j_max.value_or(default_j_max(p.lambdas, p.N))},
               {"d_cap", exponent_data(p, cfg.d_cap).d_cap},
               {"max_terms", cfg.max_terms}};
}

VerificationReport start_report(const std::string& command, const GaudinProblem& p, const HarnessConfig& cfg) {
  VerificationReport r;
  r.body["schema"] = "gaudin-report/1";
  r.body["command"] = command;
  r.body["problem"] = problem_json(p);
  r.body["config"] = config_json(p, cfg);
  return r;
}

constexpr const char* degenerate_reason = "μ_p > 1 out of scope";

// Points far from every site, usable wherever G_1 or omega must be evaluated
// at some admissible configuration.
template <class T>
PointConfig<T> far_point(const GaudinProblem& p) {
  const int base = static_cast<int>(std::ceil(4.0 * p.scale())) + 3;
  PointConfig<T> t;
  int k = 0;
  for (int li : p.l) {
    t.groups.emplace_back();
    for (int j = 0; j < li; ++j) t.groups.back().push_back(T(base + 2 * (k++)));
  }
  return t;
}

// G_1 against the telescoped closed form -sum_s |lambda_s| / (u - z_s).
template <class T>
double g1_residual(const GaudinProblem& p) {
  const auto t = far_point<T>(p);
  const auto z = p.sites<T>();
  const auto G1 = master_operator_at(p, t).coefficient(p.N);
  RationalFunction<T> oracle;
  for (std::size_t s = 0; s < z.size(); ++s)
    oracle = oracle + RationalFunction<T>(Polynomial<T>::constant(T(-p.lambdas[s].size())), Polynomial<T>::linear_factor(z[s]));
  if constexpr (is_exact_v<T>) {
    return (G1 - oracle).is_zero() ? 0.0 : max_abs_coeff((G1 - oracle).num()) + 1e-300;
  } else {
    double worst = 0.0;
    for (const auto& u : eigencheck_samples(p, PointConfig<Complex>{t.groups}, 8))
      worst = std::max(worst, std::abs(G1(u) - oracle(u)) / std::max(1.0, std::abs(oracle(u))));
    return worst;
  }
}

template <class T>
struct Algebra {
  TensorModule module;
  WeightSubspaces weights;
  Sites<T> sites;
  OperatorPencil<PoleMatrix<T>> pencil;
  BetheOperatorFamily<T> family;
  int j_max = 0;
};

template <class T>
Algebra<T> build_algebra(const GaudinProblem& p, const HarnessConfig& cfg) {
  Algebra<T> a;
  a.module = build_tensor(p.lambdas, p.N);
  a.weights = weight_and_singular_subspace(a.module.module, p.lambda_inf.weight());
  a.sites = make_sites(p.sites<T>());
  a.pencil = universal_operator(a.module, a.sites);
  a.j_max = cfg.j_max.value_or(default_j_max(p.lambdas, p.N));
  a.family = restrict_to_basis_vectors(a.pencil, a.weights.weight_indices, a.j_max);
  return a;
}

template <class T>
void add_selfcheck(VerificationReport& r, const GaudinProblem& p, const Algebra<T>& a, const HarnessConfig& cfg) {
  const auto sc = algebra_selfcheck(a.pencil, a.module, a.sites, default_sample_pairs(a.sites, cfg.selfcheck_samples));
  r.body["selfcheck"] = ojson{{"exact", sc.exact},
                              {"sample_pairs", sc.sample_pairs},
                              {"commutativity", num(sc.commutativity)},
                              {"gl_commutation", num(sc.gl_commutation)},
                              {"symmetry", num(sc.symmetry)},
                              {"b1_identity", num(sc.b1_identity)},
                              {"lower_coefficients", num(sc.lower_coefficients)}};
  const double worst = std::max({sc.commutativity, sc.gl_commutation, sc.symmetry, sc.lower_coefficients});
  const double tol = sc.exact ? 0.0 : 1e-9;
  r.add("algebra_selfcheck", worst <= tol ? Verdict::Pass : Verdict::Fail,
        std::string(sc.exact ? "exact" : "floating") + ", " + std::to_string(sc.sample_pairs) + " sample pairs, max residual " +
            sci(worst));

  const double g1 = g1_residual<T>(p);
  r.body["structural"] = ojson{{"b1_identity", num(sc.b1_identity)}, {"g1_identity", num(g1)}, {"exact", sc.exact}};
  const double s = std::max(sc.b1_identity, g1);
  r.add("b1_equals_g1", s <= tol ? Verdict::Pass : Verdict::Fail,
        "B_1 and G_1 against -sum |lambda_s|/(u - z_s), max residual " + sci(s));
}

ojson orbit_json(std::size_t index, const CriticalOrbit& o) {
  return ojson{{"index", index},
               {"rep", point_json(o.rep)},
               {"residual", num(o.residual)},
               {"hessian", cplx(o.hessian)},
               {"degenerate", o.degenerate},
               {"milnor", o.milnor ? ojson(*o.milnor) : ojson(nullptr)}};
}

void add_orbit_check(VerificationReport& r, const std::vector<CriticalOrbit>& orbits, const HarnessConfig& cfg) {
  ojson table = ojson::array();
  double worst = 0.0;
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    table.push_back(orbit_json(k, orbits[k]));
    worst = std::max(worst, orbits[k].residual);
  }
  r.body["orbits"] = table;
  if (orbits.empty())
    r.add("orbit_search", Verdict::Fail, "no critical orbit found");
  else
    r.add("orbit_search", worst < cfg.solver.tol_residual ? Verdict::Pass : Verdict::Fail,
          std::to_string(orbits.size()) + " orbits, max residual " + sci(worst));
}

struct StageTally {
  explicit StageTally(std::string n) : name(std::move(n)) {}

  std::string name;
  std::size_t passed = 0, failed = 0, skipped = 0;
  double worst = 0.0;
  std::string first_failure;

  void pass(double value) {
    ++passed;
    worst = std::max(worst, value);
  }
  void fail(const std::string& why) {
    if (failed++ == 0) first_failure = why;
  }
  void record(VerificationReport& r, const std::string& quantity) const {
    if (failed > 0) {
      r.add(name, Verdict::Fail, std::to_string(failed) + " orbit(s) failed: " + first_failure);
    } else if (passed == 0) {
      r.add(name, Verdict::Skipped, skipped ? degenerate_reason : "no orbit to check");
    } else {
      std::string reason = std::to_string(passed) + " orbit(s), max " + quantity + " " + sci(worst);
      if (skipped) reason += ", " + std::to_string(skipped) + " skipped (" + degenerate_reason + ")";
      r.add(name, Verdict::Pass, reason);
    }
  }
};

struct OrbitOutcome {
  bool degenerate = false;
  std::optional<std::vector<Complex>> omega;
  std::optional<std::string> omega_error;
  ojson eig, norm, sing, wron;
  double eig_res = 0.0, norm_res = 0.0, sing_res = 0.0, wron_res = 0.0;
  bool eig_ok = false, norm_ok = false, sing_ok = false, wron_ok = false;
  std::string eig_why, norm_why, sing_why, wron_why;
};

constexpr double kTol = 1e-8;

template <class T>
void eigencheck(OrbitOutcome& out, const GaudinProblem& p, const Algebra<T>& a, const CriticalOrbit& o) {
  const auto& omega = *out.omega;
  std::vector<Complex> w;
  for (std::size_t k : a.weights.weight_indices) w.push_back(omega[k]);
  const double wn = norm_of(w);
  const auto samples = eigencheck_samples(p, o.rep, std::max<std::size_t>(20, 2 * static_cast<std::size_t>(a.j_max) + 1));
  std::vector<double> per_i(static_cast<std::size_t>(p.N) + 1, 0.0);
  for (const auto& u0 : samples) {
    const auto G = master_coefficients_at(p, o.rep, u0);
    for (int i = 1; i <= p.N + 1; ++i) {
      const auto B = a.family.template evaluate<Complex>(i, u0);
      auto bw = B.apply(w);
      for (std::size_t k = 0; k < bw.size(); ++k) bw[k] -= G[static_cast<std::size_t>(i - 1)] * w[k];
      auto& slot = per_i[static_cast<std::size_t>(i - 1)];
      slot = std::max(slot, norm_of(bw) / wn);
    }
  }
  ojson res = ojson::array();
  for (double v : per_i) {
    res.push_back(num(v));
    out.eig_res = std::max(out.eig_res, v);
  }
  out.eig["samples"] = samples.size();
  out.eig["residuals"] = res;
  out.eig_ok = out.eig_res < kTol;
  out.eig_why = "residual " + sci(out.eig_res);
}

void wronski_suite(OrbitOutcome& out, const GaudinProblem& p, const CriticalOrbit& o, const ExponentData& E) {
  try {
    const auto h = solve_h_tuple(p, o.rep, E);
    ojson hs = ojson::array();
    for (const auto& hi : h.h) hs.push_back(poly_json(hi));
    out.wron["h"] = hs;
    const double ode = ode_residual(p, o.rep, h);
    out.wron["ode_residual"] = num(ode);
    bool ok = ode < kTol;
    double worst = ode;
    ojson ids = ojson::array();
    for (const auto& w : verify_wronskian_identities(h, p, o.rep, E)) {
      ids.push_back(ojson{{"j", w.j},
                          {"residual", num(w.residual)},
                          {"degree_lhs", w.degree_lhs},
                          {"degree_rhs", w.degree_rhs},
                          {"constant", w.constant}});
      ok = ok && w.residual < kTol && w.degree_lhs == w.degree_rhs;
      worst = std::max(worst, w.residual);
    }
    out.wron["identities"] = ids;
    ojson inc = ojson::array();
    bool inc_ok = true;
    auto add_site = [&](const std::string& label, const IncidenceResult& res) {
      ojson rows = ojson::array();
      for (const auto& row : res.rows)
        rows.push_back(ojson{{"j", row.j},
                             {"exponent", row.exponent},
                             {"dim_at", row.dim_at},
                             {"expected_at", row.expected_at},
                             {"dim_above", row.dim_above},
                             {"expected_above", row.expected_above}});
      inc.push_back(ojson{{"site", label}, {"pass", res.pass}, {"rows", rows}});
      inc_ok = inc_ok && res.pass;
    };
    for (std::size_t s = 0; s < p.n(); ++s)
      add_site("z" + std::to_string(s + 1), schubert_incidence(h, E, Site<Complex>{p.z[s]}, p.lambdas[s]));
    add_site("infinity", schubert_incidence(h, E, Site<Complex>{}, E.dual));
    out.wron["incidence"] = inc;
    out.wron_res = worst;
    out.wron_ok = ok && inc_ok;
    out.wron_why = !ok ? "identity or ODE residual " + sci(worst) : !inc_ok ? "Schubert incidence failed" : "";
  } catch (const GaudinError& e) {
    out.wron["error"] = e.what();
    out.wron_ok = false;
    out.wron_why = e.what();
  }
}

template <class T>
VerificationReport pipeline(const GaudinProblem& p, const HarnessConfig& cfg) {
  auto r = start_report("verify", p, cfg);
  const auto a = build_algebra<T>(p, cfg);
  const std::size_t dim_sing = a.weights.singular_basis.cols();
  r.body["module"] = ojson{{"dimension", a.module.module.dim()},
                           {"weight_space_dimension", a.weights.weight_indices.size()},
                           {"dim_sing", dim_sing}};
  add_selfcheck(r, p, a, cfg);

  const auto orbits = find_critical_orbits(p, cfg.solver, dim_sing ? std::optional<std::size_t>(dim_sing) : std::nullopt);
  add_orbit_check(r, orbits, cfg);
  const auto E = exponent_data(p, cfg.d_cap);
  r.body["exponents"] = ojson{{"d", E.d}, {"dual", E.dual.parts()}, {"d_cap", E.d_cap}};

  std::vector<OrbitOutcome> outcomes(orbits.size());
  parallel_for(orbits.size(), cfg.solver.threads, [&](std::size_t k) {
    auto& out = outcomes[k];
    const auto& o = orbits[k];
    out.degenerate = o.degenerate;
    if (o.degenerate) return;
    try {
      const auto bv = bethe_vector(p, a.module, o, cfg.max_terms);
      out.omega = bv.omega;
      out.sing = ojson{{"singular_residual", num(bv.singular_residual)},
                       {"weight_residual", num(bv.weight_residual)},
                       {"norm", num(bv.norm)}};
      out.sing_res = std::max(bv.singular_residual, bv.weight_residual);
      out.sing_ok = out.sing_res < kTol && bv.norm > 0;
      out.sing_why = "residual " + sci(out.sing_res);
    } catch (const GaudinError& e) {
      out.omega_error = e.what();
      return;
    }
    eigencheck(out, p, a, o);
    const Complex S = shapovalov_pairing<Complex>(a.module.form, *out.omega, *out.omega);
    out.norm_res = std::abs(S - o.hessian) / std::abs(o.hessian);
    out.norm = ojson{{"shapovalov", cplx(S)}, {"hessian", cplx(o.hessian)}, {"relative_error", num(out.norm_res)}};
    out.norm_ok = out.norm_res < kTol;
    out.norm_why = "relative error " + sci(out.norm_res);
    wronski_suite(out, p, o, E);
  });

  StageTally eig{"eigencheck"}, norm{"norm_formula"}, sing{"singular_nonzero"}, wron{"wronskian_schubert"};
  ojson eig_t = ojson::array(), norm_t = ojson::array(), sing_t = ojson::array(), wron_t = ojson::array();
  std::vector<std::vector<Complex>> vectors;
  for (std::size_t k = 0; k < outcomes.size(); ++k) {
    auto& out = outcomes[k];
    auto entry = [&](ojson body, const char* status) {
      ojson e{{"orbit", k}, {"status", status}};
      for (auto it = body.begin(); body.is_object() && it != body.end(); ++it) e[it.key()] = it.value();
      return e;
    };
    if (out.degenerate) {
      for (auto* t : {&eig, &norm, &sing, &wron}) ++t->skipped;
      const ojson why{{"reason", degenerate_reason}};
      eig_t.push_back(entry(why, "SKIPPED"));
      norm_t.push_back(entry(why, "SKIPPED"));
      sing_t.push_back(entry(why, "SKIPPED"));
      wron_t.push_back(entry(why, "SKIPPED"));
      continue;
    }
    if (out.omega_error) {
      const std::string why = "orbit " + std::to_string(k) + ": " + *out.omega_error;
      for (auto* t : {&eig, &norm, &sing, &wron}) t->fail(why);
      const ojson body{{"error", *out.omega_error}};
      for (auto* t : {&eig_t, &norm_t, &sing_t, &wron_t}) t->push_back(entry(body, "FAIL"));
      continue;
    }
    vectors.push_back(*out.omega);
    auto tally = [&](StageTally& t, ojson& table, const ojson& body, bool ok, double v, const std::string& why) {
      if (ok)
        t.pass(v);
      else
        t.fail("orbit " + std::to_string(k) + ": " + why);
      table.push_back(entry(body, ok ? "PASS" : "FAIL"));
    };
    tally(eig, eig_t, out.eig, out.eig_ok, out.eig_res, out.eig_why);
    tally(norm, norm_t, out.norm, out.norm_ok, out.norm_res, out.norm_why);
    tally(sing, sing_t, out.sing, out.sing_ok, out.sing_res, out.sing_why);
    tally(wron, wron_t, out.wron, out.wron_ok, out.wron_res, out.wron_why);
  }
  r.body["eigencheck"] = eig_t;
  r.body["norm"] = norm_t;
  r.body["singularity"] = sing_t;
  r.body["wronskian"] = wron_t;
  eig.record(r, "residual");
  norm.record(r, "relative error");
  sing.record(r, "residual");
  wron.record(r, "residual");

  const auto ind = independence_and_completeness(vectors, a.module.form, orbits.size(), dim_sing);
  ojson gram = ojson::array();
  for (std::size_t i = 0; i < ind.gram.rows(); ++i) {
    ojson row = ojson::array();
    for (std::size_t j = 0; j < ind.gram.cols(); ++j) row.push_back(cplx(ind.gram(i, j)));
    gram.push_back(row);
  }
  ojson svs = ojson::array();
  for (double s : ind.singular_values) svs.push_back(num(s));
  r.body["gram"] = ojson{{"matrix", gram}, {"singular_values", svs}, {"rank", ind.rank}, {"vectors", vectors.size()}};
  std::size_t nondegenerate = 0;
  for (const auto& o : orbits) nondegenerate += o.degenerate ? 0 : 1;
  r.body["counts"] = ojson{{"orbits_found", orbits.size()},
                           {"nondegenerate", nondegenerate},
                           {"dim_sing", dim_sing},
                           {"completeness", ind.completeness}};
  if (vectors.empty())
    r.add("independence", Verdict::Skipped, "no Bethe vector available");
  else
    r.add("independence", ind.full_rank ? Verdict::Pass : Verdict::Fail,
          "Gram rank " + std::to_string(ind.rank) + " of " + std::to_string(vectors.size()));
  r.add("completeness", ind.completeness == "EQUAL" ? Verdict::Pass : Verdict::Fail,
        ind.completeness + ": " + std::to_string(orbits.size()) + " orbits, dim Sing = " + std::to_string(dim_sing) +
            (ind.completeness == "EQUAL" ? "" : " (solver coverage)"));
  return r;
}

template <class T>
VerificationReport spectrum(const GaudinProblem& p, const HarnessConfig& cfg) {
  auto r = start_report("spectrum", p, cfg);
  const auto a = build_algebra<T>(p, cfg);
  const std::size_t dim_sing = a.weights.singular_basis.cols();
  const auto orbits = find_critical_orbits(p, cfg.solver, dim_sing ? std::optional<std::size_t>(dim_sing) : std::nullopt);
  add_orbit_check(r, orbits, cfg);

  std::vector<ojson> tables(orbits.size());
  std::vector<double> worst(orbits.size(), 0.0);
  std::vector<std::string> errors(orbits.size());
  parallel_for(orbits.size(), cfg.solver.threads, [&](std::size_t k) {
    const auto& o = orbits[k];
    if (o.degenerate) {
      tables[k] = ojson{{"orbit", k}, {"status", "SKIPPED"}, {"reason", degenerate_reason}};
      return;
    }
    try {
      const auto bv = bethe_vector(p, a.module, o, cfg.max_terms);
      std::vector<Complex> w;
      for (std::size_t idx : a.weights.weight_indices) w.push_back(bv.omega[idx]);
      Complex ww{};
      for (const auto& x : w) ww += std::conj(x) * x;
      const double wn = norm_of(w);
      const auto D = master_operator_at(p, o.rep);
      ojson rows = ojson::array();
      for (int i = 1; i <= p.N + 1; ++i) {
        const auto g = series_at_infinity(D.coefficient(p.N + 1 - i), a.j_max);
        for (int j = 0; j <= a.j_max; ++j) {
          const auto Bij = a.family.coefficient(i, j).template cast<Complex>();
          const auto bw = Bij.apply(w);
          Complex rq{};
          for (std::size_t q = 0; q < w.size(); ++q) rq += std::conj(w[q]) * bw[q];
          rq /= ww;
          std::vector<Complex> diff(bw);
          for (std::size_t q = 0; q < w.size(); ++q) diff[q] -= g[static_cast<std::size_t>(j)] * w[q];
          const double res = norm_of(diff) / wn / std::max(1.0, std::abs(g[static_cast<std::size_t>(j)]));
          worst[k] = std::max(worst[k], res);
          rows.push_back(ojson{{"i", i}, {"j", j}, {"B", cplx(rq)}, {"G", cplx(g[static_cast<std::size_t>(j)])}, {"residual", num(res)}});
        }
      }
      tables[k] = ojson{{"orbit", k}, {"status", worst[k] < kTol ? "PASS" : "FAIL"}, {"table", rows}};
    } catch (const GaudinError& e) {
      errors[k] = e.what();
      tables[k] = ojson{{"orbit", k}, {"status", "FAIL"}, {"error", e.what()}};
    }
  });
  StageTally tally{"spectrum"};
  for (std::size_t k = 0; k < orbits.size(); ++k) {
    if (orbits[k].degenerate)
      ++tally.skipped;
    else if (!errors[k].empty())
      tally.fail("orbit " + std::to_string(k) + ": " + errors[k]);
    else if (worst[k] < kTol)
      tally.pass(worst[k]);
    else
      tally.fail("orbit " + std::to_string(k) + ": residual " + sci(worst[k]));
  }
  r.body["spectrum"] = tables;
  tally.record(r, "residual");
  return r;
}

template <class T>
VerificationReport selftest(const GaudinProblem& p, const HarnessConfig& cfg) {
  auto r = start_report("selftest", p, cfg);
  const auto a = build_algebra<T>(p, cfg);
  r.body["module"] = ojson{{"dimension", a.module.module.dim()},
                           {"weight_space_dimension", a.weights.weight_indices.size()},
                           {"dim_sing", a.weights.singular_basis.cols()}};
  const auto comm = commutation_violations(a.module.module);
  const auto contra = contravariance_violations(a.module.module, a.module.form);
  r.add("gl_relations", comm == 0 && contra == 0 ? Verdict::Pass : Verdict::Fail,
        std::to_string(comm) + " commutator and " + std::to_string(contra) + " contravariance violations");
  add_selfcheck(r, p, a, cfg);

  const auto count = count_terms(p);
  if (count <= 200'000) {
    std::uint64_t listed = 0;
    for_each_colored_sequence(p, [&](const ColoredSequence& C) { for_each_assignment(p, C, [&](const VariableAssignment&) { ++listed; }); });
    r.add("weight_function_terms", listed == count ? Verdict::Pass : Verdict::Fail,
          std::to_string(listed) + " enumerated, " + std::to_string(count) + " by formula");
    const auto t = far_point<T>(p);
    try {
      const auto omega = omega_evaluate(p, a.module, t, cfg.max_terms);
      r.add("weight_membership", Verdict::Pass, "omega stays in the weight space of lambda_inf");
      (void)omega;
    } catch (const GaudinError& e) {
      r.add("weight_membership", Verdict::Fail, e.what());
    }
  } else {
    r.add("weight_function_terms", Verdict::Skipped, std::to_string(count) + " terms exceed the self-test budget");
  }
  return r;
}

template <class T>
VerificationReport weightfn(const GaudinProblem& p, const HarnessConfig& cfg, const nlohmann::json& point) {
  auto r = start_report("weightfn", p, cfg);
  if (!point.is_array() || point.size() != static_cast<std::size_t>(p.N)) throw SchemaError("point must list N groups");
  PointConfig<T> t;
  ojson echo = ojson::array();
  for (std::size_t i = 0; i < point.size(); ++i) {
    const auto& g = point[i];
    if (!g.is_array() || g.size() != static_cast<std::size_t>(p.l[i]))
      throw SchemaError("group " + std::to_string(i + 1) + " must have l_" + std::to_string(i + 1) + " entries");
    t.groups.emplace_back();
    ojson ge = ojson::array();
    for (const auto& x : g) {
      const auto e = read_entry(x, "point entry");
      if constexpr (std::is_same_v<T, Rational>) {
        if (!e.exact) throw SchemaError("exact evaluation needs rational coordinates");
        t.groups.back().push_back(*e.exact);
      } else {
        t.groups.back().push_back(e.value);
      }
      ge.push_back(scalar_json(t.groups.back().back()));
    }
    echo.push_back(ge);
  }
  r.body["point"] = echo;
  const auto module = build_tensor(p.lambdas, p.N);
  const auto omega = omega_evaluate(p, module, t, cfg.max_terms);
  ojson entries = ojson::array();
  double norm2 = 0.0;
  for (std::size_t k = 0; k < omega.size(); ++k) {
    if (is_zero(omega[k])) continue;
    norm2 += magnitude(omega[k]) * magnitude(omega[k]);
    entries.push_back(ojson{{"index", k}, {"weight", module.module.basis_weights()[k].coords}, {"value", scalar_json(omega[k])}});
  }
  r.body["omega"] = ojson{{"dimension", omega.size()}, {"nonzero", entries}, {"norm", num(std::sqrt(norm2))}};
  r.add("weight_function", Verdict::Pass, std::to_string(entries.size()) + " nonzero coordinates");
  return r;
}

}  // namespace

VerificationReport run_pipeline(const GaudinProblem& p, const HarnessConfig& cfg) {
  return p.exact() ? pipeline<Rational>(p, cfg) : pipeline<Complex>(p, cfg);
}

VerificationReport run_spectrum(const GaudinProblem& p, const HarnessConfig& cfg) {
  return p.exact() ? spectrum<Rational>(p, cfg) : spectrum<Complex>(p, cfg);
}

VerificationReport run_selftest(const GaudinProblem& p, const HarnessConfig& cfg) {
  return p.exact() ? selftest<Rational>(p, cfg) : selftest<Complex>(p, cfg);
}

VerificationReport run_weightfn(const GaudinProblem& p, const HarnessConfig& cfg, const nlohmann::json& point) {
  bool rational_point = p.exact();
  if (point.is_array())
    for (const auto& g : point)
      if (g.is_array())
        for (const auto& x : g) rational_point = rational_point && x.is_string();
  return rational_point ? weightfn<Rational>(p, cfg, point) : weightfn<Complex>(p, cfg, point);
}

VerificationReport run_solve(const GaudinProblem& p, const HarnessConfig& cfg) {
  auto r = start_report("solve", p, cfg);
  const auto module = build_tensor(p.lambdas, p.N);
  const std::size_t dim_sing = weight_and_singular_subspace(module.module, p.lambda_inf.weight()).singular_basis.cols();
  const auto orbits = find_critical_orbits(p, cfg.solver, dim_sing ? std::optional<std::size_t>(dim_sing) : std::nullopt);
  add_orbit_check(r, orbits, cfg);
  std::size_t nondegenerate = 0;
  for (const auto& o : orbits) nondegenerate += o.degenerate ? 0 : 1;
  const std::string completeness = orbits.size() == dim_sing ? "EQUAL" : orbits.size() < dim_sing ? "SHORTFALL" : "EXCESS";
  r.body["counts"] = ojson{{"orbits_found", orbits.size()},
                           {"nondegenerate", nondegenerate},
                           {"dim_sing", dim_sing},
                           {"completeness", completeness}};
  r.add("completeness", completeness == "EQUAL" ? Verdict::Pass : Verdict::Fail,
        completeness + ": " + std::to_string(orbits.size()) + " orbits, dim Sing = " + std::to_string(dim_sing));
  return r;
}

}  // namespace gaudin
