#include "rrhdiv/partition.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rrhdiv {

SubdomainPartition partition_mesh(const Mesh& mesh, int n) {
  const int m = mesh.resolution;
  if (n < 1) throw std::invalid_argument("number of subdomains per side must be positive");
  if (m % n != 0)
    throw IncompatiblePartitionError("mesh resolution " + std::to_string(m) + " is not a multiple of " +
                                     std::to_string(n));

  SubdomainPartition part;
  part.n = n;
  part.resolution = m;
  part.ratio = m / n;
  const int r = part.ratio;

  part.subdomains.resize(static_cast<std::size_t>(n) * n);
  for (int s = 0; s < n * n; ++s) {
    part.subdomains[s].col = s % n;
    part.subdomains[s].row = s / n;
  }
  part.triangle_subdomain.resize(mesh.triangles.size());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    const int s = (tri.cell_y / r) * n + tri.cell_x / r;
    part.triangle_subdomain[t] = s;
    part.subdomains[s].triangles.push_back(static_cast<int>(t));
  }

  // Interfaces, ordered by midpoint (y, x): walk rows of horizontal and
  // vertical interfaces in the order their midpoints appear.
  struct Pending {
    double y, x;
    int first, second;
    bool vertical;
  };
  std::vector<Pending> pending;
  const double H = 1.0 / n;
  for (int row = 0; row < n; ++row)
    for (int col = 0; col + 1 < n; ++col)
      pending.push_back({(row + 0.5) * H, (col + 1) * H, row * n + col, row * n + col + 1, true});
  for (int row = 0; row + 1 < n; ++row)
    for (int col = 0; col < n; ++col)
      pending.push_back({(row + 1) * H, (col + 0.5) * H, row * n + col, (row + 1) * n + col, false});
  std::sort(pending.begin(), pending.end(),
            [](const Pending& a, const Pending& b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });

  std::vector<int> interface_of_edge(mesh.edges.size(), -1);
  for (const Pending& p : pending) {
    CoarseInterface face;
    face.first = p.first;
    face.second = p.second;
    face.normal = p.vertical ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
    face.length = H;
    const int k = static_cast<int>(part.interfaces.size());
    part.subdomains[p.first].interfaces.push_back(k);
    part.subdomains[p.second].interfaces.push_back(k);
    part.subdomains[p.first].neighbors.push_back(p.second);
    part.subdomains[p.second].neighbors.push_back(p.first);
    part.interfaces.push_back(std::move(face));
  }

  // Fine edges of each interface: the edges of `first`'s triangles that lie
  // on the shared line, ordered along it.
  const double tol = 0.25 * mesh.h;
  for (std::size_t k = 0; k < part.interfaces.size(); ++k) {
    CoarseInterface& face = part.interfaces[k];
    const Subdomain& a = part.subdomains[face.first];
    const bool vertical = face.normal.x() > 0.5;
    const double line = vertical ? (a.col + 1) * H : (a.row + 1) * H;
    for (int t : a.triangles) {
      for (int e : mesh.triangles[t].edges) {
        const Edge& edge = mesh.edges[e];
        const double coord = vertical ? edge.midpoint.x() : edge.midpoint.y();
        if (std::abs(coord - line) > tol || interface_of_edge[e] >= 0) continue;
        if (edge.kind == EdgeKind::diagonal)
          throw InvalidMeshError("diagonal edge on a subdomain interface");
        if ((edge.normal - face.normal).norm() > 1e-12)
          throw InvalidMeshError("interface edge normal does not match the interface normal");
        interface_of_edge[e] = static_cast<int>(k);
        face.fine_edges.push_back(e);
      }
    }
    std::sort(face.fine_edges.begin(), face.fine_edges.end(), [&](int x, int y) {
      const Vec2 &px = mesh.edges[x].midpoint, &py = mesh.edges[y].midpoint;
      return vertical ? px.y() < py.y() : px.x() < py.x();
    });
    if (static_cast<int>(face.fine_edges.size()) != r)
      throw InvalidMeshError("interface does not carry H/h fine edges");
  }

  auto adjacent_in = [&](int edge, int subdomain) {
    for (int t : mesh.edge_triangles[edge])
      if (t >= 0 && part.triangle_subdomain[t] == subdomain) return t;
    throw InvalidMeshError("interface edge without an adjacent triangle in its subdomain");
  };

  for (std::size_t k = 0; k < part.interfaces.size(); ++k) {
    const CoarseInterface& face = part.interfaces[k];
    for (int e : face.fine_edges) {
      for (int side = 0; side < 2; ++side) {
        TraceSlot slot;
        slot.subdomain = side == 0 ? face.first : face.second;
        slot.interface = static_cast<int>(k);
        slot.edge = e;
        slot.side = side;
        slot.triangle = adjacent_in(e, slot.subdomain);
        const auto& edges = mesh.triangles[slot.triangle].edges;
        slot.local_edge = static_cast<int>(std::find(edges.begin(), edges.end(), e) - edges.begin());
        part.subdomains[slot.subdomain].slots.push_back(part.slot_count());
        part.slots.push_back(slot);
      }
    }
  }

  for (Subdomain& sub : part.subdomains) {
    for (int t : sub.triangles)
      for (int e : mesh.triangles[t].edges)
        if (!mesh.edges[e].on_boundary && interface_of_edge[e] < 0) sub.interior_edges.push_back(e);
    std::sort(sub.interior_edges.begin(), sub.interior_edges.end());
    sub.interior_edges.erase(std::unique(sub.interior_edges.begin(), sub.interior_edges.end()),
                             sub.interior_edges.end());
  }
  return part;
}

SparseMatrix build_constraint(const SubdomainPartition& partition, const Mesh& mesh) {
  std::vector<Triplet> triplets;
  triplets.reserve(partition.slots.size());
  for (int s = 0; s < partition.slot_count(); ++s) {
    const TraceSlot& slot = partition.slots[s];
    const double len = mesh.edges[slot.edge].length;
    triplets.emplace_back(slot.interface, s, slot.side == 0 ? len : -len);
  }
  SparseMatrix b(partition.interface_count(), partition.slot_count());
  b.setFromTriplets(triplets.begin(), triplets.end());
  return b;
}

Vector interface_mass(const SubdomainPartition& partition, const Mesh& mesh) {
  Vector m(partition.slot_count());
  for (int s = 0; s < partition.slot_count(); ++s) m[s] = mesh.edges[partition.slots[s].edge].length;
  return m;
}

TraceVector swap_sides(const TraceVector& g) {
  if (g.size() % 2 != 0) throw DimensionError("trace vector must have an even number of slots");
  TraceVector out(g.size());
  for (Eigen::Index s = 0; s < g.size(); s += 2) {
    out[s] = g[s + 1];
    out[s + 1] = g[s];
  }
  return out;
}

}  // namespace rrhdiv
