#include "rrhdiv/fem_rt0.hpp"

#include <cmath>
#include <stdexcept>

namespace rrhdiv {

const TriangleRule& degree4_rule() {
  static const TriangleRule rule = [] {
    const double a = 0.445948490915965, wa = 0.223381589678011;
    const double b = 0.091576213509771, wb = 0.109951743655322;
    TriangleRule r;
    r.barycentric = {{a, a, 1 - 2 * a}, {a, 1 - 2 * a, a}, {1 - 2 * a, a, a},
                     {b, b, 1 - 2 * b}, {b, 1 - 2 * b, b}, {1 - 2 * b, b, b}};
    r.weights = {wa, wa, wa, wb, wb, wb};
    return r;
  }();
  return rule;
}

Rt0Element::Rt0Element(const std::array<Vec2, 3>& corners, const std::array<int, 3>& signs)
    : corners_(corners), signs_(signs) {
  const Vec2 d1 = corners[1] - corners[0], d2 = corners[2] - corners[0];
  area_ = 0.5 * (d1.x() * d2.y() - d1.y() * d2.x());
  if (!(area_ > 0.0)) throw InvalidMeshError("degenerate or clockwise triangle");
  for (int k = 0; k < 3; ++k) lengths_[k] = (corners[(k + 1) % 3] - corners[(k + 2) % 3]).norm();
}

Rt0Element::Rt0Element(const Triangle& triangle, const Mesh& mesh)
    : Rt0Element(mesh.corners(triangle), triangle.signs) {}

Vec2 Rt0Element::basis(int k, const Vec2& x) const {
  return (signs_[k] * lengths_[k] / (2.0 * area_)) * (x - corners_[k]);
}

double Rt0Element::basis_divergence(int k) const { return signs_[k] * lengths_[k] / area_; }

Vec2 Rt0Element::value(const Eigen::Vector3d& dofs, const Vec2& x) const {
  Vec2 v = Vec2::Zero();
  for (int k = 0; k < 3; ++k) v += dofs[k] * basis(k, x);
  return v;
}

double Rt0Element::divergence(const Eigen::Vector3d& dofs) const {
  double d = 0.0;
  for (int k = 0; k < 3; ++k) d += dofs[k] * basis_divergence(k);
  return d;
}

Vec2 Rt0Element::map(const std::array<double, 3>& bary) const {
  return bary[0] * corners_[0] + bary[1] * corners_[1] + bary[2] * corners_[2];
}

ElementMatrices Rt0Element::matrices() const {
  ElementMatrices m;
  Eigen::Vector3d d;
  for (int k = 0; k < 3; ++k) d[k] = basis_divergence(k);
  m.divdiv = area_ * d * d.transpose();

  // Edge-midpoint rule is exact for the quadratic integrand.
  m.mass.setZero();
  for (int q = 0; q < 3; ++q) {
    const Vec2 x = 0.5 * (corners_[(q + 1) % 3] + corners_[(q + 2) % 3]);
    Eigen::Matrix<double, 2, 3> phi;
    for (int k = 0; k < 3; ++k) phi.col(k) = basis(k, x);
    m.mass += (area_ / 3.0) * phi.transpose() * phi;
  }
  return m;
}

Eigen::Vector3d Rt0Element::load(const VectorField& f) const {
  Eigen::Vector3d b = Eigen::Vector3d::Zero();
  const auto& rule = degree4_rule();
  for (std::size_t q = 0; q < rule.weights.size(); ++q) {
    const Vec2 x = map(rule.barycentric[q]);
    const Vec2 fx = f(x);
    for (int k = 0; k < 3; ++k) b[k] += area_ * rule.weights[q] * fx.dot(basis(k, x));
  }
  return b;
}

ElementMatrices element_matrices(const Triangle& triangle, const Mesh& mesh) {
  return Rt0Element(triangle, mesh).matrices();
}

DofVector GlobalSystem::expand(const Vector& free_values) const {
  DofVector u = DofVector::Zero(static_cast<Eigen::Index>(edge_to_free.size()));
  for (std::size_t i = 0; i < free_edges.size(); ++i) u[free_edges[i]] = free_values[static_cast<Eigen::Index>(i)];
  return u;
}

GlobalSystem assemble_global(const Mesh& mesh, double beta, const VectorField& f) {
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  GlobalSystem sys;
  sys.edge_to_free.assign(mesh.edges.size(), -1);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].on_boundary) continue;
    sys.edge_to_free[e] = static_cast<int>(sys.free_edges.size());
    sys.free_edges.push_back(e);
  }
  const auto n = static_cast<Eigen::Index>(sys.free_edges.size());
  sys.load = Vector::Zero(n);

  std::vector<Triplet> triplets;
  triplets.reserve(mesh.triangles.size() * 9);
  for (const Triangle& tri : mesh.triangles) {
    const Rt0Element element(tri, mesh);
    const ElementMatrices em = element.matrices();
    const Eigen::Matrix3d a = em.divdiv + beta * em.mass;
    const Eigen::Vector3d b = element.load(f);
    for (int i = 0; i < 3; ++i) {
      const int row = sys.edge_to_free[tri.edges[i]];
      if (row < 0) continue;
      sys.load[row] += b[i];
      for (int j = 0; j < 3; ++j) {
        const int col = sys.edge_to_free[tri.edges[j]];
        if (col >= 0) triplets.emplace_back(row, col, a(i, j));
      }
    }
  }
  sys.matrix.resize(n, n);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  return sys;
}

DofVector interpolate(const VectorField& field, const Mesh& mesh) {
  const double offset = 0.5 / std::sqrt(3.0);
  DofVector u(mesh.num_edges());
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[e];
    const Vec2 a = mesh.point(edge.vertices[0]), b = mesh.point(edge.vertices[1]);
    const Vec2 x0 = 0.5 * (a + b) - offset * (b - a), x1 = 0.5 * (a + b) + offset * (b - a);
    u[e] = 0.5 * (field(x0) + field(x1)).dot(edge.normal);
  }
  return u;
}

Vector element_divergence(const DofVector& u, const Mesh& mesh) {
  if (u.size() != mesh.num_edges()) throw DimensionError("field is not defined on every edge");
  Vector div(static_cast<Eigen::Index>(mesh.triangles.size()));
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const Rt0Element element(tri, mesh);
    div[static_cast<Eigen::Index>(t)] =
        element.divergence(Eigen::Vector3d(u[tri.edges[0]], u[tri.edges[1]], u[tri.edges[2]]));
  }
  return div;
}

ErrorNorms error_norms(const DofVector& u_h, const VectorField& exact, const ScalarField& exact_div,
                       const Mesh& mesh) {
  if (u_h.size() != mesh.num_edges()) throw DimensionError("field is not defined on every edge");
  const auto& rule = degree4_rule();
  double l2 = 0.0, div2 = 0.0;
  for (const Triangle& tri : mesh.triangles) {
    const Rt0Element element(tri, mesh);
    const Eigen::Vector3d dofs(u_h[tri.edges[0]], u_h[tri.edges[1]], u_h[tri.edges[2]]);
    const double div_h = element.divergence(dofs);
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Vec2 x = element.map(rule.barycentric[q]);
      const double w = element.area() * rule.weights[q];
      l2 += w * (element.value(dofs, x) - exact(x)).squaredNorm();
      const double dd = div_h - exact_div(x);
      div2 += w * dd * dd;
    }
  }
  return {std::sqrt(l2), std::sqrt(l2 + div2)};
}

double l2_distance(const DofVector& a, const DofVector& b, const Mesh& mesh) {
  const DofVector diff = a - b;
  return error_norms(diff, [](const Vec2&) { return Vec2(0.0, 0.0); }, [](const Vec2&) { return 0.0; }, mesh).l2;
}

}  // namespace rrhdiv
