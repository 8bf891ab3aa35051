// rr-hdiv: command line driver for the two-side Robin-Robin solver.
#include "rrhdiv/boundary_system.hpp"
#include "rrhdiv/experiments.hpp"
#include "rrhdiv/iteration.hpp"
#include "rrhdiv/mesh.hpp"
#include "rrhdiv/partition.hpp"
#include "rrhdiv/spectrum.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>

using namespace rrhdiv;

namespace {

struct RunOptions {
  std::string experiment = "table1";
  int max_n = 16;
  bool full = false;
  std::string out = "results";
  std::string format = "csv";
  double tol = 1e-6;
  int max_iter = 10000;
};

struct SolveOptions {
  int n = 4;
  int ratio = 8;
  std::string gamma = "h";
  double theta = 0.5;
  std::string method = "richardson";
  double tol = 1e-6;
  int max_iter = 10000;
  std::string history;
  std::string mesh_dir;
};

struct SpectrumOptions {
  int n = 4;
  int ratio = 8;
  std::string gamma = "h";
  double theta = 1.0;
  std::string out = "results";
};

int do_run(const RunOptions& o) {
  ExperimentConfig config = ExperimentConfig::defaults(parse_experiment(o.experiment), o.max_n, o.full);
  config.output_dir = o.out;
  config.format = parse_format(o.format);
  config.tol = o.tol;
  config.max_iter = o.max_iter;
  if (o.full)
    std::cerr << "warning: --full runs the complete parameter grid; the largest cases take a long time\n";
  const RunRecord record = run_experiment(config, &std::cerr);
  const auto path = write_record(record);
  if (config.experiment != ExperimentKind::single) std::cout << format_table_csv(record);
  std::cerr << "wrote " << path.string() << '\n';
  return record.all_converged() ? 0 : 1;
}

int do_solve(const SolveOptions& o) {
  IterationConfig config;
  config.n = o.n;
  config.ratio = o.ratio;
  config.gamma = GammaChoice::parse(o.gamma);
  config.theta = o.theta;
  config.tol = o.tol;
  config.max_iter = o.max_iter;
  const Method method = parse_method(o.method);
  if (method == Method::spectrum) throw ConfigurationError("use the spectrum subcommand for eigenvalues");
  config.constrained = method != Method::baseline;
  config.validate();

  if (!o.mesh_dir.empty()) write_mesh_csv(build_unit_square_mesh(config.resolution()), o.mesh_dir);

  const ModelProblem problem = manufactured_problem();
  int iterations = 0;
  bool converged = false;
  double l2 = 0.0, hdiv = 0.0, seconds = 0.0;
  std::string status;
  if (method == Method::minres) {
    const KrylovReport rep = run_minres(config, problem);
    if (!o.history.empty()) write_residual_history(rep, o.history);
    iterations = rep.iterations;
    converged = rep.converged();
    status = to_string(rep.status);
    l2 = rep.l2_error;
    hdiv = rep.hdiv_error;
    seconds = rep.wall_seconds;
  } else {
    const SolveReport rep = config.constrained ? run_richardson(config, problem) : run_baseline(config, problem);
    if (!o.history.empty()) write_increment_history(rep, o.history);
    iterations = rep.iterations;
    converged = rep.converged;
    status = converged ? "converged" : "max_iterations";
    l2 = rep.l2_error;
    hdiv = rep.hdiv_error;
    seconds = rep.wall_seconds;
  }
  std::printf("method=%s N=%d H/h=%d gamma=%s theta=%g\n", o.method.c_str(), config.n, config.ratio,
              config.gamma.label().c_str(), config.theta);
  std::printf("iterations=%d status=%s\n", iterations, status.c_str());
  std::printf("L2-err=%.6e H(div)-err=%.6e time=%.3fs\n", l2, hdiv, seconds);
  return converged ? 0 : 1;
}

int do_spectrum(const SpectrumOptions& o) {
  ExperimentConfig config = ExperimentConfig::defaults(ExperimentKind::spectrum);
  config.ns = {o.n};
  config.ratios = {o.ratio};
  config.gammas = {GammaChoice::parse(o.gamma)};
  config.thetas = {o.theta};
  config.output_dir = o.out;
  const RunRecord record = run_spectrum(config, &std::cerr);
  const RunEntry& e = record.entries.front();
  if (!e.spectrum) {
    std::cerr << "spectrum not computed: " << e.status << '\n';
    return 1;
  }
  const SpectrumSummary& s = *e.spectrum;
  std::printf("file=%s\n", (config.output_dir / s.file).string().c_str());
  std::printf("dimension=%d unit_eigenvalues=%d\n", s.dimension, s.unit_count);
  std::printf("max_real=%.10f max_real_below_one=%.10f\n", s.max_real, s.max_real_below_one);
  std::printf("max_complex_modulus=%.10f reduced_spectral_radius=%.10f\n", s.max_complex_modulus,
              s.reduced_spectral_radius);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-side Robin-Robin domain decomposition for the H(div)-elliptic problem"};
  app.require_subcommand(1);
  app.set_version_flag("--version", software_version());

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a parameter sweep and write the result table");
  run_cmd->add_option("--experiment", run.experiment, "table1, table2, table3 or spectrum")
      ->check(CLI::IsMember({"table1", "table2", "table3", "spectrum"}));
  run_cmd->add_option("--max-n", run.max_n, "Largest N for table1 and table3")->check(CLI::PositiveNumber);
  run_cmd->add_flag("--full", run.full, "Use the complete grid regardless of --max-n");
  run_cmd->add_option("--out", run.out, "Output directory");
  run_cmd->add_option("--format", run.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  run_cmd->add_option("--tol", run.tol, "Stopping tolerance")->check(CLI::PositiveNumber);
  run_cmd->add_option("--max-iter", run.max_iter, "Iteration limit per run")->check(CLI::PositiveNumber);

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve the model problem once");
  solve_cmd->add_option("--n", solve.n, "Subdomains per side")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--ratio", solve.ratio, "H/h")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--gamma", solve.gamma, "h, H or a positive number");
  solve_cmd->add_option("--theta", solve.theta, "Relaxation parameter in (0, 1]");
  solve_cmd->add_option("--method", solve.method, "richardson, minres or baseline")
      ->check(CLI::IsMember({"richardson", "minres", "baseline"}));
  solve_cmd->add_option("--tol", solve.tol, "Stopping tolerance")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--max-iter", solve.max_iter, "Iteration limit")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--history", solve.history, "CSV file for the per-iteration history");
  solve_cmd->add_option("--mesh-out", solve.mesh_dir, "Directory for vertices/edges/triangles CSV");

  SpectrumOptions spec;
  auto* spec_cmd = app.add_subcommand("spectrum", "Eigenvalues of the iteration operator");
  spec_cmd->add_option("--n", spec.n, "Subdomains per side")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--ratio", spec.ratio, "H/h")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--gamma", spec.gamma, "h, H or a positive number");
  spec_cmd->add_option("--theta", spec.theta, "Relaxation parameter in (0, 1]");
  spec_cmd->add_option("--out", spec.out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return do_run(run);
    if (*solve_cmd) return do_solve(solve);
    if (*spec_cmd) return do_spectrum(spec);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return 2;
  }
  return 0;
}
