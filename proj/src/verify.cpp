#include "rrhdiv/verify.hpp"

#include <Eigen/SparseCholesky>

#include <string>

namespace rrhdiv {

ModelProblem manufactured_problem() {
  ModelProblem p;
  p.beta = 1.0;
  p.exact = [](const Vec2& x) { return Vec2(x.x() * (1 - x.x()), x.y() * (1 - x.y())); };
  p.exact_div = [](const Vec2& x) { return 2.0 - 2.0 * x.x() - 2.0 * x.y(); };
  p.load = [](const Vec2& x) {
    return Vec2(2.0 + x.x() - x.x() * x.x(), 2.0 + x.y() - x.y() * x.y());
  };
  return p;
}

DofVector solve_global(const Mesh& mesh, double beta, const VectorField& f) {
  if (mesh.resolution > kMaxOracleResolution)
    throw std::invalid_argument("global oracle limited to resolution " + std::to_string(kMaxOracleResolution));
  const GlobalSystem sys = assemble_global(mesh, beta, f);
  Eigen::SimplicialLLT<SparseMatrix> factor(sys.matrix);
  if (factor.info() != Eigen::Success) throw ConfigurationError("global Cholesky factorization failed");
  const Vector x = factor.solve(sys.load);
  return sys.expand(x);
}

TraceVector fixed_point_g(const DofVector& u_h, double gamma, const SubdomainPartition& partition,
                          const Mesh& mesh, double beta, const VectorField& f) {
  if (u_h.size() != mesh.num_edges()) throw DimensionError("field is not defined on every edge");
  TraceVector g(partition.slot_count());
  for (int s = 0; s < partition.slot_count(); ++s) {
    const TraceSlot& slot = partition.slots[s];
    const Triangle& tri = mesh.triangles[slot.triangle];
    const Rt0Element element(tri, mesh);
    const ElementMatrices em = element.matrices();
    const Eigen::Vector3d dofs(u_h[tri.edges[0]], u_h[tri.edges[1]], u_h[tri.edges[2]]);
    const int k = slot.local_edge;
    const double a_row = (em.divdiv.row(k) + beta * em.mass.row(k)).dot(dofs);
    const double flux = (a_row - element.load(f)[k]) / mesh.edges[slot.edge].length;
    g[s] = gamma * u_h[slot.edge] + flux;
  }
  return g;
}

}  // namespace rrhdiv
