#pragma once

#include "rrhdiv/fem_rt0.hpp"
#include "rrhdiv/mesh.hpp"
#include "rrhdiv/partition.hpp"
#include "rrhdiv/types.hpp"

namespace rrhdiv {

/// Load and exact solution of a test problem; the exact fields may be empty
/// when no closed form is known.
struct ModelProblem {
  VectorField load;
  VectorField exact;
  ScalarField exact_div;
  double beta = 1.0;

  bool has_exact() const { return static_cast<bool>(exact) && static_cast<bool>(exact_div); }
};

/// u = (x(1-x), y(1-y)), div u = 2 - 2x - 2y, f = -grad div u + u with beta = 1.
ModelProblem manufactured_problem();

/// Largest resolution accepted by solve_global.
inline constexpr int kMaxOracleResolution = 512;

/// Direct sparse Cholesky solve of the undecomposed problem. Boundary
/// entries of the result are zero.
DofVector solve_global(const Mesh& mesh, double beta, const VectorField& f);

/// Robin data of a global discrete solution: on the first side of each
/// interface fine edge gamma*u.n + div u, on the second side gamma*u.n - div u.
///
/// The divergence trace is the discrete normal flux of the adjacent triangle,
/// (a_K(u_h, phi_e) - (f, phi_e)_K) / |e| with phi_e oriented by n_e. It
/// differs from the elementwise divergence by an O(h) consistency term and
/// makes the transmission identity hold exactly at the discrete level.
TraceVector fixed_point_g(const DofVector& u_h, double gamma, const SubdomainPartition& partition,
                          const Mesh& mesh, double beta, const VectorField& f);

}  // namespace rrhdiv
