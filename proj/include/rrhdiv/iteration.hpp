#pragma once

#include "rrhdiv/fem_rt0.hpp"
#include "rrhdiv/local_solver.hpp"
#include "rrhdiv/verify.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace rrhdiv {

/// Robin parameter: gamma = h, gamma = H, or an explicit positive value.
struct GammaChoice {
  enum class Rule { fine, coarse, value };
  Rule rule = Rule::fine;
  double value = 0.0;

  static GammaChoice fine() { return {Rule::fine, 0.0}; }
  static GammaChoice coarse() { return {Rule::coarse, 0.0}; }
  static GammaChoice explicit_value(double v) { return {Rule::value, v}; }
  /// Accepts "h", "H" or a positive number.
  static GammaChoice parse(const std::string& text);

  double resolve(int resolution, int subdomains_per_side) const;
  /// "h", "H" or the value printed with %g.
  std::string label() const;
};

struct IterationConfig {
  int n = 4;       ///< subdomains per side
  int ratio = 8;   ///< H/h
  double beta = 1.0;
  GammaChoice gamma = GammaChoice::fine();
  double theta = 0.5;
  double tol = 1e-6;
  int max_iter = 10000;
  bool constrained = true;

  int resolution() const { return n * ratio; }
  /// Throws std::invalid_argument on out-of-range parameters.
  void validate() const;
};

struct SolveReport {
  int iterations = 0;
  bool converged = false;
  std::vector<double> increment_history;  ///< |g^{n+1} - g^n|_inf per step
  TraceVector g;
  DofVector u_h;
  double l2_error = 0.0;
  double hdiv_error = 0.0;
  double wall_seconds = 0.0;
};

/// Transmission update T(2 gamma u_D - g).
TraceVector robin_exchange(const TraceVector& trace_u, const TraceVector& g, double gamma);

/// One relaxed step g -> theta T(2 gamma u_D(g) - g) + (1 - theta) g.
TraceVector richardson_step(const RobinSubstructuring& solver, const std::vector<SubdomainLoad>& loads,
                            const TraceVector& g, double theta, bool constrained);

/// Iterates from g = 0 until the sup-norm increment drops below tol.
/// Non-convergence is reported through SolveReport::converged.
SolveReport richardson(const RobinSubstructuring& solver, const std::vector<SubdomainLoad>& loads, double theta,
                       double tol, int max_iter, bool constrained);

/// Builds mesh, partition and local factorizations for `config` and runs the
/// iteration on `problem`. Errors are filled in when the problem has an
/// exact solution.
SolveReport run_richardson(const IterationConfig& config, const ModelProblem& problem);

/// Same as run_richardson with independent subdomain solves (no edge-average
/// constraint). Requires config.constrained == false.
SolveReport run_baseline(const IterationConfig& config, const ModelProblem& problem);

/// Sup-norm distance between the Robin data of `u_global` and its image under
/// one unrelaxed constrained step. Zero iff u_global is a fixed point.
double fixed_point_check(const RobinSubstructuring& solver, const DofVector& u_global, const VectorField& f);

void write_increment_history(const SolveReport& report, const std::filesystem::path& path);

}  // namespace rrhdiv
