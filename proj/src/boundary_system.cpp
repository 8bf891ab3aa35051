#include "rrhdiv/boundary_system.hpp"

#include "rrhdiv/partition.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

namespace rrhdiv {

const char* to_string(KrylovStatus status) {
  switch (status) {
    case KrylovStatus::converged: return "converged";
    case KrylovStatus::breakdown: return "breakdown";
    case KrylovStatus::max_iterations: return "max_iterations";
  }
  return "unknown";
}

KrylovResult minres(const LinearOperator& op, const Vector& b, double tol, int max_iter,
                    const LinearOperator& preconditioner) {
  auto precondition = [&](const Vector& v) { return preconditioner ? preconditioner(v) : v; };

  KrylovResult result;
  result.x = Vector::Zero(b.size());
  result.residual_history.push_back(1.0);

  Vector r1 = b;
  Vector y = precondition(r1);
  const double beta1_sq = r1.dot(y);
  if (beta1_sq < 0.0) throw NumericError("MINRES preconditioner is not positive definite");
  const double beta1 = std::sqrt(beta1_sq);
  if (beta1 == 0.0) {
    result.status = KrylovStatus::converged;
    return result;
  }

  const double eps = std::numeric_limits<double>::epsilon();
  Vector r2 = r1;
  Vector w = Vector::Zero(b.size()), w1 = w, w2 = w;
  double old_beta = 0.0, beta = beta1, dbar = 0.0, epsilon = 0.0;
  double phibar = beta1, cs = -1.0, sn = 0.0;
  // Running estimate of |T_k| for the breakdown test.
  double tnorm = 0.0;

  for (int it = 1; it <= max_iter; ++it) {
    const Vector v = y / beta;
    y = op(v);
    if (it >= 2) y -= (beta / old_beta) * r1;
    const double alpha = v.dot(y);
    y -= (alpha / beta) * r2;
    r1 = r2;
    r2 = y;
    y = precondition(r2);
    old_beta = beta;
    const double beta_sq = r2.dot(y);
    if (beta_sq < 0.0) throw NumericError("MINRES preconditioner is not positive definite");
    beta = std::sqrt(beta_sq);
    tnorm = std::max({tnorm, std::abs(alpha), old_beta, beta});

    const double old_epsilon = epsilon;
    const double delta = cs * dbar + sn * alpha;
    const double gbar = sn * dbar - cs * alpha;
    epsilon = sn * beta;
    dbar = -cs * beta;
    const double gamma = std::hypot(gbar, beta);
    result.iterations = it;
    if (gamma <= 1e-14 * std::max(tnorm, eps)) {
      result.status = KrylovStatus::breakdown;
      return result;
    }
    cs = gbar / gamma;
    sn = beta / gamma;
    const double phi = cs * phibar;
    phibar = sn * phibar;

    w1 = w2;
    w2 = w;
    w = (v - old_epsilon * w1 - delta * w2) / gamma;
    result.x += phi * w;

    const double relative = phibar / beta1;
    result.residual_history.push_back(relative);
    if (relative < tol) {
      result.status = KrylovStatus::converged;
      return result;
    }
    if (beta <= 1e-14 * std::max(tnorm, eps)) {
      // Invariant Krylov subspace exhausted without reaching tol.
      result.status = KrylovStatus::breakdown;
      return result;
    }
  }
  result.status = KrylovStatus::max_iterations;
  return result;
}

TraceVector InterfaceOperator::apply(const TraceVector& g) const {
  if (g.size() != size()) throw DimensionError("trace vector size does not match the interface operator");
  const Vector& m = solver_->mass();
  const TraceVector mg = m.cwiseProduct(g);
  const TraceVector u = solver_->apply_resolvent(mg);
  return swap_sides(mg) + mg - 2.0 * solver_->gamma() * m.cwiseProduct(u);
}

TraceVector InterfaceOperator::rhs(const std::vector<SubdomainLoad>& loads) const {
  const TraceVector condensed = solver_->condensed_load(loads);
  return 2.0 * solver_->gamma() * solver_->mass().cwiseProduct(solver_->apply_resolvent(condensed));
}

KrylovReport solve_minres(const InterfaceOperator& op, const TraceVector& f_g, double tol, int max_iter) {
  if (f_g.size() != op.size()) throw DimensionError("right-hand side size does not match the interface operator");
  KrylovResult kr = minres([&](const Vector& v) { return op.apply(v); }, f_g, tol, max_iter);
  KrylovReport report;
  report.iterations = kr.iterations;
  report.status = kr.status;
  report.residual_history = std::move(kr.residual_history);
  const double norm_f = f_g.norm();
  report.final_relative_residual = norm_f > 0.0 ? (op.apply(kr.x) - f_g).norm() / norm_f : 0.0;
  report.g = std::move(kr.x);
  return report;
}

DofVector recover_solution(const RobinSubstructuring& solver, const std::vector<SubdomainLoad>& loads,
                           const TraceVector& g) {
  return solver.assemble(solver.solve_constrained(loads, g));
}

KrylovReport run_minres(const IterationConfig& config, const ModelProblem& problem) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const Mesh mesh = build_unit_square_mesh(config.resolution());
  const SubdomainPartition part = partition_mesh(mesh, config.n);
  const RobinSubstructuring solver(mesh, part, config.beta, config.gamma.resolve(mesh.resolution, config.n));
  const InterfaceOperator op(solver);
  const auto loads = solver.loads(problem.load);
  KrylovReport report = solve_minres(op, op.rhs(loads), config.tol, config.max_iter);
  report.u_h = recover_solution(solver, loads, report.g);
  if (problem.has_exact()) {
    const ErrorNorms err = error_norms(report.u_h, problem.exact, problem.exact_div, mesh);
    report.l2_error = err.l2;
    report.hdiv_error = err.hdiv;
  }
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

void write_residual_history(const KrylovReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out.precision(17);
  out << "iteration,relative_residual\n";
  for (std::size_t i = 0; i < report.residual_history.size(); ++i)
    out << i << ',' << report.residual_history[i] << '\n';
}

}  // namespace rrhdiv
