#pragma once

#include "rrhdiv/types.hpp"

#include <array>
#include <filesystem>
#include <vector>

namespace rrhdiv {

struct Vertex {
  double x = 0.0;
  double y = 0.0;
  int id = -1;
};

enum class EdgeKind { horizontal, vertical, diagonal };

struct Edge {
  std::array<int, 2> vertices{};
  /// Fixed unit normal n_e: (0,1) horizontal, (1,0) vertical,
  /// (1,-1)/sqrt(2) diagonal.
  Vec2 normal = Vec2::Zero();
  Vec2 midpoint = Vec2::Zero();
  double length = 0.0;
  bool on_boundary = false;
  EdgeKind kind = EdgeKind::horizontal;
};

/// Local edge k is the edge opposite local vertex k.
struct Triangle {
  std::array<int, 3> vertices{};
  std::array<int, 3> edges{};
  /// +1 iff the global edge normal is the outward normal of this triangle.
  std::array<int, 3> signs{};
  double area = 0.0;
  int cell_x = 0;
  int cell_y = 0;
};

/// Structured triangulation of the unit square: m x m cells, each cut by the
/// diagonal from its bottom-left to its top-right corner.
///
/// Vertex ids are row-major (y outer). Edge ids are lexicographic in the
/// (y, x) coordinates of the edge midpoint. Triangle ids are 2*(cy*m + cx)
/// for the lower-right half of cell (cx, cy) and that plus one for the
/// upper-left half.
struct Mesh {
  int resolution = 0;
  double h = 0.0;
  std::vector<Vertex> vertices;
  std::vector<Edge> edges;
  std::vector<Triangle> triangles;
  /// Triangles incident to each edge; second entry is -1 on the boundary.
  std::vector<std::array<int, 2>> edge_triangles;

  Vec2 point(int vertex) const { return {vertices[vertex].x, vertices[vertex].y}; }
  std::array<Vec2, 3> corners(const Triangle& t) const {
    return {point(t.vertices[0]), point(t.vertices[1]), point(t.vertices[2])};
  }
  int num_edges() const { return static_cast<int>(edges.size()); }
};

/// How each square cell is cut into two triangles.
enum class DiagonalPattern {
  forward,      ///< bottom-left to top-right in every cell
  backward,     ///< bottom-right to top-left in every cell
  alternating,  ///< forward where cx + cy is even, backward otherwise
};

Mesh build_unit_square_mesh(int m, DiagonalPattern pattern = DiagonalPattern::forward);

/// Sorted ids of the edges lying on the boundary of the unit square.
std::vector<int> classify_boundary(const Mesh& mesh);

/// Writes vertices.csv, edges.csv and triangles.csv into `directory`.
void write_mesh_csv(const Mesh& mesh, const std::filesystem::path& directory);

}  // namespace rrhdiv
