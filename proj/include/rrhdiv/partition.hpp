#pragma once

#include "rrhdiv/mesh.hpp"
#include "rrhdiv/types.hpp"

#include <vector>

namespace rrhdiv {

/// Common edge Gamma_ij of two neighbouring subdomains, first < second.
/// The normal points from `first` into `second` and coincides with the mesh
/// normal of every fine edge on it.
struct CoarseInterface {
  int first = -1;
  int second = -1;
  Vec2 normal = Vec2::Zero();
  std::vector<int> fine_edges;  ///< ordered by position along the interface
  double length = 0.0;
};

/// One side of one interface fine edge. Slots 2k and 2k+1 belong to the same
/// fine edge; the even slot is on the `first` side of its interface.
struct TraceSlot {
  int subdomain = -1;
  int interface = -1;
  int edge = -1;
  int side = 0;        ///< 0: first-side subdomain, 1: second-side subdomain
  int triangle = -1;   ///< triangle of `subdomain` adjacent to `edge`
  int local_edge = -1; ///< index of `edge` within that triangle
};

struct Subdomain {
  int col = 0;
  int row = 0;
  std::vector<int> triangles;
  /// Free edges of the subdomain not on the interface (the I block).
  std::vector<int> interior_edges;
  /// Trace slots owned by this subdomain in global slot order (the Delta block).
  std::vector<int> slots;
  std::vector<int> interfaces;
  std::vector<int> neighbors;
};

/// N x N decomposition of the unit square into square subdomains. Subdomain
/// id is row * N + col. Interfaces are ordered by the (y, x) position of
/// their midpoints.
struct SubdomainPartition {
  int n = 0;
  int resolution = 0;
  int ratio = 0;  ///< H/h
  std::vector<int> triangle_subdomain;
  std::vector<Subdomain> subdomains;
  std::vector<CoarseInterface> interfaces;
  std::vector<TraceSlot> slots;

  int slot_count() const { return static_cast<int>(slots.size()); }
  int interface_count() const { return static_cast<int>(interfaces.size()); }
  static int partner(int slot) { return slot ^ 1; }
};

/// Throws IncompatiblePartitionError unless n divides the mesh resolution.
SubdomainPartition partition_mesh(const Mesh& mesh, int n);

/// Edge-average jump constraint: one row per interface, +|e| on first-side
/// slots and -|e| on second-side slots.
SparseMatrix build_constraint(const SubdomainPartition& partition, const Mesh& mesh);

/// Diagonal of the interface mass matrix M (|e| per slot).
Vector interface_mass(const SubdomainPartition& partition, const Mesh& mesh);

/// The pairing permutation T: exchanges the two sides of every fine edge.
TraceVector swap_sides(const TraceVector& g);

}  // namespace rrhdiv
