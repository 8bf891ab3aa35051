#include "rrhdiv/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace rrhdiv {

namespace {

// Edge midpoints live on the half-grid; key (kx, ky) = 2m * midpoint.
struct EdgeKey {
  int kx;
  int ky;
};

}  // namespace

Mesh build_unit_square_mesh(int m, DiagonalPattern pattern) {
  if (m < 1) throw std::invalid_argument("mesh resolution must be positive");

  Mesh mesh;
  mesh.resolution = m;
  mesh.h = 1.0 / m;
  const int nv = m + 1;

  mesh.vertices.reserve(static_cast<std::size_t>(nv) * nv);
  for (int q = 0; q <= m; ++q)
    for (int p = 0; p <= m; ++p)
      mesh.vertices.push_back({static_cast<double>(p) / m, static_cast<double>(q) / m, q * nv + p});

  std::vector<EdgeKey> keys;
  keys.reserve(static_cast<std::size_t>(3 * m * m + 2 * m));
  for (int q = 0; q <= m; ++q)
    for (int p = 0; p < m; ++p) keys.push_back({2 * p + 1, 2 * q});
  for (int q = 0; q < m; ++q)
    for (int p = 0; p <= m; ++p) keys.push_back({2 * p, 2 * q + 1});
  for (int q = 0; q < m; ++q)
    for (int p = 0; p < m; ++p) keys.push_back({2 * p + 1, 2 * q + 1});
  std::sort(keys.begin(), keys.end(), [](const EdgeKey& a, const EdgeKey& b) {
    return a.ky != b.ky ? a.ky < b.ky : a.kx < b.kx;
  });

  const int stride = 2 * m + 1;
  std::vector<int> id_of_key(static_cast<std::size_t>(stride) * stride, -1);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  auto is_forward = [&](int cx, int cy) {
    switch (pattern) {
      case DiagonalPattern::forward: return true;
      case DiagonalPattern::backward: return false;
      case DiagonalPattern::alternating: return (cx + cy) % 2 == 0;
    }
    return true;
  };

  mesh.edges.resize(keys.size());
  for (std::size_t id = 0; id < keys.size(); ++id) {
    const auto [kx, ky] = keys[id];
    id_of_key[static_cast<std::size_t>(ky) * stride + kx] = static_cast<int>(id);
    Edge& e = mesh.edges[id];
    e.midpoint = Vec2(0.5 * kx / m, 0.5 * ky / m);
    if (ky % 2 == 0) {
      e.kind = EdgeKind::horizontal;
      const int q = ky / 2, p = (kx - 1) / 2;
      e.vertices = {q * nv + p, q * nv + p + 1};
      e.normal = Vec2(0.0, 1.0);
      e.length = mesh.h;
      e.on_boundary = (q == 0 || q == m);
    } else if (kx % 2 == 0) {
      e.kind = EdgeKind::vertical;
      const int p = kx / 2, q = (ky - 1) / 2;
      e.vertices = {q * nv + p, (q + 1) * nv + p};
      e.normal = Vec2(1.0, 0.0);
      e.length = mesh.h;
      e.on_boundary = (p == 0 || p == m);
    } else {
      e.kind = EdgeKind::diagonal;
      const int p = (kx - 1) / 2, q = (ky - 1) / 2;
      if (is_forward(p, q)) {
        e.vertices = {q * nv + p, (q + 1) * nv + p + 1};
        e.normal = Vec2(inv_sqrt2, -inv_sqrt2);
      } else {
        e.vertices = {q * nv + p + 1, (q + 1) * nv + p};
        e.normal = Vec2(inv_sqrt2, inv_sqrt2);
      }
      e.length = std::sqrt(2.0) * mesh.h;
      e.on_boundary = false;
    }
  }

  auto edge_id = [&](int kx, int ky) { return id_of_key[static_cast<std::size_t>(ky) * stride + kx]; };

  mesh.edge_triangles.assign(mesh.edges.size(), {-1, -1});
  mesh.triangles.resize(static_cast<std::size_t>(2 * m * m));
  const double area = 0.5 * mesh.h * mesh.h;
  for (int cy = 0; cy < m; ++cy) {
    for (int cx = 0; cx < m; ++cx) {
      const int v00 = cy * nv + cx, v10 = v00 + 1, v01 = v00 + nv, v11 = v01 + 1;
      const int bottom = edge_id(2 * cx + 1, 2 * cy);
      const int top = edge_id(2 * cx + 1, 2 * cy + 2);
      const int left = edge_id(2 * cx, 2 * cy + 1);
      const int right = edge_id(2 * cx + 2, 2 * cy + 1);
      const int diagonal = edge_id(2 * cx + 1, 2 * cy + 1);

      const int lower_id = 2 * (cy * m + cx);
      Triangle& lower = mesh.triangles[lower_id];
      Triangle& upper = mesh.triangles[lower_id + 1];
      if (is_forward(cx, cy)) {
        lower.vertices = {v00, v10, v11};
        lower.edges = {right, diagonal, bottom};
        upper.vertices = {v00, v11, v01};
        upper.edges = {top, left, diagonal};
      } else {
        lower.vertices = {v00, v10, v01};
        lower.edges = {diagonal, left, bottom};
        upper.vertices = {v10, v11, v01};
        upper.edges = {top, diagonal, right};
      }

      for (int t = lower_id; t <= lower_id + 1; ++t) {
        Triangle& tri = mesh.triangles[t];
        tri.area = area;
        tri.cell_x = cx;
        tri.cell_y = cy;
        const auto c = mesh.corners(tri);
        const Vec2 centroid = (c[0] + c[1] + c[2]) / 3.0;
        for (int k = 0; k < 3; ++k) {
          const Edge& e = mesh.edges[tri.edges[k]];
          tri.signs[k] = (e.midpoint - centroid).dot(e.normal) > 0.0 ? 1 : -1;
          auto& adjacent = mesh.edge_triangles[tri.edges[k]];
          (adjacent[0] < 0 ? adjacent[0] : adjacent[1]) = t;
        }
      }
    }
  }
  return mesh;
}

std::vector<int> classify_boundary(const Mesh& mesh) {
  std::vector<int> ids;
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edges[e].on_boundary) ids.push_back(e);
  return ids;
}

void write_mesh_csv(const Mesh& mesh, const std::filesystem::path& directory) {
  std::filesystem::create_directories(directory);
  auto open = [&](const char* name) {
    std::ofstream out(directory / name);
    if (!out) throw std::runtime_error("cannot write " + (directory / name).string());
    out.precision(17);
    return out;
  };

  auto vertices = open("vertices.csv");
  vertices << "id,x,y\n";
  for (const auto& v : mesh.vertices) vertices << v.id << ',' << v.x << ',' << v.y << '\n';

  auto edges = open("edges.csv");
  edges << "id,v0,v1,nx,ny,length,on_boundary\n";
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[e];
    edges << e << ',' << edge.vertices[0] << ',' << edge.vertices[1] << ',' << edge.normal.x() << ','
          << edge.normal.y() << ',' << edge.length << ',' << (edge.on_boundary ? 1 : 0) << '\n';
  }

  auto triangles = open("triangles.csv");
  triangles << "id,v0,v1,v2,e0,e1,e2,s0,s1,s2,area\n";
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    triangles << t;
    for (int v : tri.vertices) triangles << ',' << v;
    for (int e : tri.edges) triangles << ',' << e;
    for (int s : tri.signs) triangles << ',' << s;
    triangles << ',' << tri.area << '\n';
  }
}

}  // namespace rrhdiv
