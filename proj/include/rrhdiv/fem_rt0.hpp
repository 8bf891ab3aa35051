#pragma once

#include "rrhdiv/mesh.hpp"
#include "rrhdiv/types.hpp"

#include <array>
#include <vector>

namespace rrhdiv {

/// Element integrals of the lowest-order Raviart-Thomas basis, ordered by the
/// triangle's local edges.
struct ElementMatrices {
  Eigen::Matrix3d divdiv;  ///< int_K div(phi_i) div(phi_j)
  Eigen::Matrix3d mass;    ///< int_K phi_i . phi_j
};

/// Symmetric quadrature rule on a triangle in barycentric coordinates.
/// Weights sum to one; multiply by the element area.
struct TriangleRule {
  std::vector<std::array<double, 3>> barycentric;
  std::vector<double> weights;
};

/// Six-point rule, exact for polynomials of degree four.
const TriangleRule& degree4_rule();

/// RT0 basis on a triangle given by its corners and edge orientation signs.
/// phi_k(x) = sign_k |e_k| / (2|K|) (x - p_k), p_k the corner opposite edge k.
class Rt0Element {
 public:
  Rt0Element(const std::array<Vec2, 3>& corners, const std::array<int, 3>& signs);
  Rt0Element(const Triangle& triangle, const Mesh& mesh);

  double area() const { return area_; }
  double edge_length(int k) const { return lengths_[k]; }
  Vec2 basis(int k, const Vec2& x) const;
  double basis_divergence(int k) const;
  Vec2 value(const Eigen::Vector3d& dofs, const Vec2& x) const;
  double divergence(const Eigen::Vector3d& dofs) const;
  Vec2 map(const std::array<double, 3>& barycentric) const;

  ElementMatrices matrices() const;
  /// int_K f . phi_k, degree-4 quadrature.
  Eigen::Vector3d load(const VectorField& f) const;

 private:
  std::array<Vec2, 3> corners_;
  std::array<int, 3> signs_;
  std::array<double, 3> lengths_{};
  double area_ = 0.0;
};

ElementMatrices element_matrices(const Triangle& triangle, const Mesh& mesh);

/// a(.,.) over the free (non-boundary) edges, with u.n = 0 imposed by
/// eliminating the boundary edges.
struct GlobalSystem {
  SparseMatrix matrix;
  Vector load;
  std::vector<int> free_edges;    ///< free index -> edge id
  std::vector<int> edge_to_free;  ///< edge id -> free index, -1 on the boundary

  DofVector expand(const Vector& free_values) const;
};

GlobalSystem assemble_global(const Mesh& mesh, double beta, const VectorField& f);

/// Edge-average normal components by two-point Gauss quadrature per edge.
DofVector interpolate(const VectorField& field, const Mesh& mesh);

/// Elementwise constant divergence of an RT0 field.
Vector element_divergence(const DofVector& u, const Mesh& mesh);

struct ErrorNorms {
  double l2 = 0.0;
  double hdiv = 0.0;  ///< graph norm: sqrt(|u|^2 + |div u|^2)
};

ErrorNorms error_norms(const DofVector& u_h, const VectorField& exact, const ScalarField& exact_div,
                       const Mesh& mesh);

/// L2 norm of the difference of two RT0 fields on the same mesh.
double l2_distance(const DofVector& a, const DofVector& b, const Mesh& mesh);

}  // namespace rrhdiv
