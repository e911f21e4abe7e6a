#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gaudin/harness.hpp"

namespace {

struct Options {
  std::string problem;
  std::string out;
  std::string format = "json";
  std::string point;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> starts;
  std::optional<double> tol_residual;
  std::optional<double> tol_dedup;
  std::optional<int> jmax;
  std::optional<std::string> precision;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> max_terms;
};

void add_common(CLI::App* cmd, Options& o) {
  cmd->add_option("--problem", o.problem, "problem JSON file, '-' for stdin, or inline JSON")->required();
  cmd->add_option("--out", o.out, "write the report here instead of stdout");
  cmd->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  cmd->add_option("--seed", o.seed, "solver seed");
  cmd->add_option("--starts", o.starts, "number of Newton starts (0 = automatic)");
  cmd->add_option("--tol-residual", o.tol_residual, "acceptance threshold for |Psi|");
  cmd->add_option("--tol-dedup", o.tol_dedup, "orbit deduplication tolerance");
  cmd->add_option("--jmax", o.jmax, "expansion cutoff for B_ij");
  cmd->add_option("--precision", o.precision, "double or long-double")->check(CLI::IsMember({"double", "long-double"}));
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_option("--max-terms", o.max_terms, "weight function term limit");
}

std::string slurp(const std::string& where) {
  if (where == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  const auto first = where.find_first_not_of(" \t\n");
  if (first != std::string::npos && (where[first] == '{' || where[first] == '[')) return where;
  std::ifstream in(where);
  if (!in) throw gaudin::SchemaError("cannot read " + where);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

gaudin::LoadedProblem load(const Options& o) {
  auto lp = gaudin::load_problem_text(slurp(o.problem));
  auto& c = lp.config;
  if (o.seed) c.solver.seed = *o.seed;
  if (o.starts) c.solver.starts = *o.starts;
  if (o.tol_residual) c.solver.tol_residual = *o.tol_residual;
  if (o.tol_dedup) c.solver.tol_dedup = *o.tol_dedup;
  if (o.jmax) c.j_max = *o.jmax;
  if (o.precision) c.solver.precision = *o.precision;
  if (o.threads) c.solver.threads = *o.threads;
  if (o.max_terms) c.max_terms = *o.max_terms;
  return lp;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gaudin model verification workbench"};
  app.require_subcommand(1);
  Options o;
  auto* solve = app.add_subcommand("solve", "find critical orbits of the master function");
  auto* verify = app.add_subcommand("verify", "run the full verification pipeline");
  auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of B_ij on every Bethe vector");
  auto* weightfn = app.add_subcommand("weightfn", "evaluate the weight function at a point");
  auto* selftest = app.add_subcommand("selftest", "exact algebraic checks without the solver");
  for (auto* cmd : {solve, verify, spectrum, weightfn, selftest}) add_common(cmd, o);
  weightfn->add_option("--point", o.point, "coordinates by color group, JSON or file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  gaudin::VerificationReport report;
  try {
    const auto lp = load(o);
    if (solve->parsed()) {
      report = gaudin::run_solve(lp.problem, lp.config);
    } else if (verify->parsed()) {
      report = gaudin::run_pipeline(lp.problem, lp.config);
    } else if (spectrum->parsed()) {
      report = gaudin::run_spectrum(lp.problem, lp.config);
    } else if (weightfn->parsed()) {
      nlohmann::json point;
      try {
        point = nlohmann::json::parse(slurp(o.point));
      } catch (const nlohmann::json::parse_error& e) {
        throw gaudin::SchemaError(std::string("invalid point JSON: ") + e.what());
      }
      report = gaudin::run_weightfn(lp.problem, lp.config, point);
    } else {
      report = gaudin::run_selftest(lp.problem, lp.config);
    }
  } catch (const gaudin::SchemaError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gaudin::NotAPartition& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gaudin::DistinctnessError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gaudin::PointNotInU& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gaudin::AmbientTooSmall& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gaudin::DimensionMismatch& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const gaudin::GaudinError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }

  const auto text = gaudin::emit_report(report, o.format == "text" ? gaudin::ReportFormat::Text : gaudin::ReportFormat::Json);
  if (o.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(o.out);
    if (!out) {
      std::cerr << "cannot write " << o.out << "\n";
      return 2;
    }
    out << text;
  }
  return gaudin::exit_code(report);
}
