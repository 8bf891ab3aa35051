#include "rrhdiv/iteration.hpp"

#include "rrhdiv/partition.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace rrhdiv {

GammaChoice GammaChoice::parse(const std::string& text) {
  if (text == "h") return fine();
  if (text == "H") return coarse();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || !(v > 0.0))
    throw std::invalid_argument("gamma must be 'h', 'H' or a positive number, got '" + text + "'");
  return explicit_value(v);
}

double GammaChoice::resolve(int resolution, int subdomains_per_side) const {
  switch (rule) {
    case Rule::fine: return 1.0 / resolution;
    case Rule::coarse: return 1.0 / subdomains_per_side;
    case Rule::value: return value;
  }
  return value;
}

std::string GammaChoice::label() const {
  switch (rule) {
    case Rule::fine: return "h";
    case Rule::coarse: return "H";
    case Rule::value: break;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", value);
  return buf;
}

void IterationConfig::validate() const {
  if (n < 1) throw std::invalid_argument("number of subdomains per side must be positive");
  if (ratio < 1) throw std::invalid_argument("H/h must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  if (!(theta > 0.0 && theta <= 1.0)) throw std::invalid_argument("theta must lie in (0, 1]");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  if (max_iter < 1) throw std::invalid_argument("max_iter must be positive");
  if (gamma.rule == GammaChoice::Rule::value && !(gamma.value > 0.0))
    throw std::invalid_argument("gamma must be positive");
}

TraceVector robin_exchange(const TraceVector& trace_u, const TraceVector& g, double gamma) {
  return swap_sides(2.0 * gamma * trace_u - g);
}

TraceVector richardson_step(const RobinSubstructuring& solver, const std::vector<SubdomainLoad>& loads,
                            const TraceVector& g, double theta, bool constrained) {
  const DecomposedSolution u =
      constrained ? solver.solve_constrained(loads, g) : solver.solve_unconstrained(loads, g);
  return theta * robin_exchange(u.trace, g, solver.gamma()) + (1.0 - theta) * g;
}

SolveReport richardson(const RobinSubstructuring& solver, const std::vector<SubdomainLoad>& loads, double theta,
                       double tol, int max_iter, bool constrained) {
  SolveReport report;
  TraceVector g = TraceVector::Zero(solver.slot_count());
  for (int it = 1; it <= max_iter; ++it) {
    TraceVector next = richardson_step(solver, loads, g, theta, constrained);
    const double increment = g.size() > 0 ? (next - g).lpNorm<Eigen::Infinity>() : 0.0;
    report.increment_history.push_back(increment);
    g = std::move(next);
    report.iterations = it;
    if (increment < tol) {
      report.converged = true;
      break;
    }
  }
  const DecomposedSolution u =
      constrained ? solver.solve_constrained(loads, g) : solver.solve_unconstrained(loads, g);
  report.u_h = solver.assemble(u);
  report.g = std::move(g);
  return report;
}

namespace {

SolveReport run(const IterationConfig& config, const ModelProblem& problem) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Mesh mesh = build_unit_square_mesh(config.resolution());
  const SubdomainPartition part = partition_mesh(mesh, config.n);
  const double gamma = config.gamma.resolve(mesh.resolution, config.n);
  const RobinSubstructuring solver(mesh, part, config.beta, gamma);
  SolveReport report =
      richardson(solver, solver.loads(problem.load), config.theta, config.tol, config.max_iter, config.constrained);
  if (problem.has_exact()) {
    const ErrorNorms err = error_norms(report.u_h, problem.exact, problem.exact_div, mesh);
    report.l2_error = err.l2;
    report.hdiv_error = err.hdiv;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace

SolveReport run_richardson(const IterationConfig& config, const ModelProblem& problem) {
  return run(config, problem);
}

SolveReport run_baseline(const IterationConfig& config, const ModelProblem& problem) {
  if (config.constrained) throw std::invalid_argument("baseline run requires constrained = false");
  return run(config, problem);
}

double fixed_point_check(const RobinSubstructuring& solver, const DofVector& u_global, const VectorField& f) {
  const TraceVector g =
      fixed_point_g(u_global, solver.gamma(), solver.partition(), solver.mesh(), solver.beta(), f);
  if (g.size() == 0) return 0.0;
  const DecomposedSolution u = solver.solve_constrained(solver.loads(f), g);
  return (robin_exchange(u.trace, g, solver.gamma()) - g).lpNorm<Eigen::Infinity>();
}

void write_increment_history(const SolveReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "iteration,increment\n";
  for (std::size_t i = 0; i < report.increment_history.size(); ++i)
    out << i + 1 << ',' << report.increment_history[i] << '\n';
}

}  // namespace rrhdiv
