#pragma once

#include "rrhdiv/iteration.hpp"
#include "rrhdiv/local_solver.hpp"

#include <filesystem>
#include <functional>
#include <vector>

namespace rrhdiv {

using LinearOperator = std::function<Vector(const Vector&)>;

enum class KrylovStatus { converged, breakdown, max_iterations };

const char* to_string(KrylovStatus status);

struct KrylovResult {
  Vector x;
  int iterations = 0;
  KrylovStatus status = KrylovStatus::max_iterations;
  /// Relative residual estimate per iteration, starting with 1 at iteration 0.
  std::vector<double> residual_history;
};

/// Minimal residual method for symmetric, possibly indefinite or singular
/// (consistent) systems, started from x = 0. Stops when the recurrence
/// residual estimate relative to |b| drops below tol. An optional SPD
/// preconditioner is applied as an inverse; the residual is then measured in
/// its norm.
KrylovResult minres(const LinearOperator& op, const Vector& b, double tol, int max_iter,
                    const LinearOperator& preconditioner = {});

/// G = (T M + M) - 2 gamma M (S_M^{-1} - K) M on trace vectors, applied
/// matrix-free through constrained Robin solves with zero interior load.
class InterfaceOperator {
 public:
  explicit InterfaceOperator(const RobinSubstructuring& solver) : solver_(&solver) {}

  int size() const { return solver_->slot_count(); }
  const RobinSubstructuring& solver() const { return *solver_; }

  TraceVector apply(const TraceVector& g) const;
  /// f_g = 2 gamma M (S_M^{-1} - K) f~.
  TraceVector rhs(const std::vector<SubdomainLoad>& loads) const;

 private:
  const RobinSubstructuring* solver_;
};

struct KrylovReport {
  int iterations = 0;
  KrylovStatus status = KrylovStatus::max_iterations;
  std::vector<double> residual_history;
  double final_relative_residual = 0.0;  ///< recomputed as |G g - f_g| / |f_g|
  TraceVector g;
  DofVector u_h;
  double l2_error = 0.0;
  double hdiv_error = 0.0;
  double wall_seconds = 0.0;

  bool converged() const { return status == KrylovStatus::converged; }
};

KrylovReport solve_minres(const InterfaceOperator& op, const TraceVector& f_g, double tol, int max_iter);

/// One constrained solve with Robin data g, assembled into a global field.
DofVector recover_solution(const RobinSubstructuring& solver, const std::vector<SubdomainLoad>& loads,
                           const TraceVector& g);

/// End-to-end MINRES solve for the configuration (theta and constrained are
/// ignored).
KrylovReport run_minres(const IterationConfig& config, const ModelProblem& problem);

void write_residual_history(const KrylovReport& report, const std::filesystem::path& path);

}  // namespace rrhdiv
