#pragma once

#include "rrhdiv/mesh.hpp"
#include "rrhdiv/partition.hpp"
#include "rrhdiv/types.hpp"

#include <Eigen/SparseCholesky>

#include <array>
#include <memory>
#include <vector>

namespace rrhdiv {

/// Right-hand side of one subdomain, split into interior and interface rows.
struct SubdomainLoad {
  Vector interior;
  Vector interface;
};

struct LocalSolution {
  Vector interior;
  Vector interface;
};

/// Robin subproblem on one subdomain:
///
///   [ A_II   A_ID          ] [u_I]   [ f_I         ]
///   [ A_DI   A_DD + g*M_i  ] [u_D] = [ f_D + M_i g ]
///
/// Local numbering puts Subdomain::interior_edges first, followed by the
/// subdomain's trace slots in global slot order.
class LocalRobinSystem {
 public:
  LocalRobinSystem(const Mesh& mesh, const SubdomainPartition& partition, int subdomain, double beta,
                   double gamma);

  int subdomain() const { return subdomain_; }
  int interior_size() const { return interior_size_; }
  int interface_size() const { return interface_size_; }
  int size() const { return interior_size_ + interface_size_; }
  double gamma() const { return gamma_; }

  /// Diagonal of M_i over the local slots.
  const Vector& interface_mass() const { return mass_; }
  /// a(.,.) restricted to the subdomain, without the Robin term.
  const SparseMatrix& stiffness() const { return stiffness_; }
  const SparseMatrix& robin_matrix() const { return robin_; }

  SubdomainLoad load(const Mesh& mesh, const VectorField& f) const;

  /// Solves the Robin system for an already assembled right-hand side.
  Vector solve(const Vector& rhs) const;
  Vector solve(const Vector& interior_rhs, const Vector& interface_rhs) const;

  /// f_D - A_DI A_II^{-1} f_I.
  Vector condense(const SubdomainLoad& load) const;

  /// Local dof index of each triangle edge (-1 for boundary edges).
  const std::vector<std::array<int, 3>>& element_dofs() const { return element_dofs_; }

 private:
  int subdomain_;
  int interior_size_;
  int interface_size_;
  double gamma_;
  Vector mass_;
  SparseMatrix stiffness_;
  SparseMatrix robin_;
  SparseMatrix interface_interior_;  ///< A_DI
  std::vector<int> triangles_;
  std::vector<std::array<int, 3>> element_dofs_;
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> robin_factor_;
  std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> interior_factor_;
};

/// Builds and factorizes the Robin system of every subdomain (all gamma_ij = gamma).
std::vector<LocalRobinSystem> build_local_systems(const Mesh& mesh, const SubdomainPartition& partition,
                                                  double beta, double gamma);

/// Robin solve with right-hand side [f_I; f_D + M_i g_i].
LocalSolution solve_local(const LocalRobinSystem& system, const SubdomainLoad& load, const Vector& g);

/// B H^{-1} B^T for the block-diagonal Robin matrix H, with its Cholesky factor.
struct CoarseSchur {
  Matrix matrix;
  Eigen::LLT<Matrix> factor;
};

/// Solution of the coupled Robin problem: per-subdomain interior values,
/// per-slot interface values and one multiplier per coarse interface.
struct DecomposedSolution {
  std::vector<Vector> interior;
  TraceVector trace;
  Vector multiplier;
};

/// All subdomain Robin systems of one decomposition, coupled through the
/// edge-average constraint B u_D = 0 by Lagrange multipliers.
///
/// The mesh and partition must outlive the solver.
class RobinSubstructuring {
 public:
  RobinSubstructuring(const Mesh& mesh, const SubdomainPartition& partition, double beta, double gamma);

  const Mesh& mesh() const { return *mesh_; }
  const SubdomainPartition& partition() const { return *partition_; }
  double beta() const { return beta_; }
  double gamma() const { return gamma_; }
  int slot_count() const { return partition_->slot_count(); }
  const std::vector<LocalRobinSystem>& systems() const { return systems_; }
  const SparseMatrix& constraint() const { return constraint_; }
  /// Diagonal of the global interface mass matrix M.
  const Vector& mass() const { return mass_; }
  const CoarseSchur& coarse() const { return coarse_; }

  std::vector<SubdomainLoad> loads(const VectorField& f) const;
  std::vector<SubdomainLoad> zero_loads() const;

  /// Solves the multiplier-augmented system with Robin data g.
  DecomposedSolution solve_constrained(const std::vector<SubdomainLoad>& loads, const TraceVector& g) const;
  /// Independent Robin solves, no edge-average constraint.
  DecomposedSolution solve_unconstrained(const std::vector<SubdomainLoad>& loads, const TraceVector& g) const;

  /// (S_M^{-1} - K) rhs: the constrained interface response to an interface
  /// right-hand side with zero interior load.
  TraceVector apply_resolvent(const TraceVector& rhs) const;

  /// f~ = f_D - A_DI A_II^{-1} f_I, per slot.
  TraceVector condensed_load(const std::vector<SubdomainLoad>& loads) const;

  /// Global RT0 field; interface edges take the mean of their two sides.
  DofVector assemble(const DecomposedSolution& solution) const;

 private:
  struct CoarseCoupling {
    std::vector<int> interfaces;  ///< coarse ids adjacent to the subdomain
    Matrix rows;                  ///< local part of B: |interfaces| x interface_size
    Matrix response;              ///< H_i^{-1} [0; rows^T]: size x |interfaces|
  };

  DecomposedSolution solve(const std::vector<Vector>& interior_rhs, const TraceVector& interface_rhs,
                           bool constrained) const;
  void check_trace(const TraceVector& g) const;

  const Mesh* mesh_;
  const SubdomainPartition* partition_;
  double beta_;
  double gamma_;
  std::vector<LocalRobinSystem> systems_;
  std::vector<CoarseCoupling> coupling_;
  SparseMatrix constraint_;
  Vector mass_;
  CoarseSchur coarse_;
};

}  // namespace rrhdiv
