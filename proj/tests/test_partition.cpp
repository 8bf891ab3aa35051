#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rrhdiv/partition.hpp"
#include "support.hpp"

#include <set>

using namespace rrhdiv;

TEST_CASE("interface counts") {
  const Mesh m4 = build_unit_square_mesh(4);
  const SubdomainPartition p1 = partition_mesh(m4, 1);
  CHECK(p1.interface_count() == 0);
  CHECK(p1.slot_count() == 0);
  CHECK(p1.subdomains.size() == 1);
  CHECK(static_cast<int>(p1.subdomains[0].interior_edges.size()) == m4.num_edges() - 16);

  CHECK(partition_mesh(m4, 2).interface_count() == 4);

  const Mesh m32 = build_unit_square_mesh(32);
  const SubdomainPartition p = partition_mesh(m32, 4);
  CHECK(p.interface_count() == 24);
  CHECK(p.slot_count() == 384);
  CHECK(p.ratio == 8);
  for (const auto& iface : p.interfaces) {
    CHECK(iface.fine_edges.size() == 8);
    CHECK(iface.length == doctest::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("incompatible resolution") {
  const Mesh mesh = build_unit_square_mesh(10);
  CHECK_THROWS_AS(partition_mesh(mesh, 3), IncompatiblePartitionError);
  CHECK_THROWS_AS(partition_mesh(mesh, 4), IncompatiblePartitionError);
  CHECK_NOTHROW(partition_mesh(mesh, 5));
}

TEST_CASE("interface geometry and ordering") {
  const int m = 24, n = 3;
  const Mesh mesh = build_unit_square_mesh(m);
  const SubdomainPartition p = partition_mesh(mesh, n);
  for (int k = 0; k < p.interface_count(); ++k) {
    const auto& iface = p.interfaces[k];
    CHECK(iface.first < iface.second);
    const auto& a = p.subdomains[iface.first];
    const auto& b = p.subdomains[iface.second];
    const Vec2 step(b.col - a.col, b.row - a.row);
    CHECK(step.norm() == 1.0);
    CHECK(iface.normal == step);
    for (int e : iface.fine_edges) {
      CHECK(mesh.edges[e].kind != EdgeKind::diagonal);
      CHECK(mesh.edges[e].normal == iface.normal);
    }
    for (std::size_t i = 1; i < iface.fine_edges.size(); ++i) {
      const Vec2 prev = mesh.edges[iface.fine_edges[i - 1]].midpoint;
      const Vec2 cur = mesh.edges[iface.fine_edges[i]].midpoint;
      CHECK((prev.y() < cur.y() || (prev.y() == cur.y() && prev.x() < cur.x())));
    }
  }
}

TEST_CASE("slot layout") {
  const Mesh mesh = build_unit_square_mesh(16);
  const SubdomainPartition p = partition_mesh(mesh, 4);
  std::set<int> fine_edges;
  for (int s = 0; s < p.slot_count(); s += 2) {
    const TraceSlot& a = p.slots[s];
    const TraceSlot& b = p.slots[s + 1];
    CHECK(a.edge == b.edge);
    CHECK(a.interface == b.interface);
    CHECK(a.side == 0);
    CHECK(b.side == 1);
    CHECK(a.subdomain == p.interfaces[a.interface].first);
    CHECK(b.subdomain == p.interfaces[b.interface].second);
    CHECK(p.triangle_subdomain[a.triangle] == a.subdomain);
    CHECK(p.triangle_subdomain[b.triangle] == b.subdomain);
    CHECK(mesh.triangles[a.triangle].edges[a.local_edge] == a.edge);
    CHECK(mesh.triangles[b.triangle].edges[b.local_edge] == b.edge);
    // no fine edge is shared by two coarse interfaces
    CHECK(fine_edges.insert(a.edge).second);
    CHECK(SubdomainPartition::partner(s) == s + 1);
    CHECK(SubdomainPartition::partner(s + 1) == s);
  }
}

TEST_CASE("every free dof is interior to one subdomain or on one interface") {
  const Mesh mesh = build_unit_square_mesh(12);
  const SubdomainPartition p = partition_mesh(mesh, 3);
  std::vector<int> interior_owner(mesh.edges.size(), 0), slot_owner(mesh.edges.size(), 0);
  for (const auto& sd : p.subdomains) {
    for (int e : sd.interior_edges) ++interior_owner[e];
    for (int s : sd.slots) ++slot_owner[p.slots[s].edge];
  }
  for (int e = 0; e < mesh.num_edges(); ++e) {
    if (mesh.edges[e].on_boundary) {
      CHECK(interior_owner[e] + slot_owner[e] == 0);
    } else {
      CHECK(((interior_owner[e] == 1 && slot_owner[e] == 0) || (interior_owner[e] == 0 && slot_owner[e] == 2)));
    }
  }
}

TEST_CASE("interface sizes per subdomain") {
  const Mesh mesh = build_unit_square_mesh(32);
  const SubdomainPartition p = partition_mesh(mesh, 4);
  for (const auto& sd : p.subdomains) {
    const int sides = static_cast<int>(sd.interfaces.size());
    CHECK(static_cast<int>(sd.slots.size()) == 8 * sides);
    CHECK((sd.slots.size() == 16 || sd.slots.size() == 24 || sd.slots.size() == 32));
    CHECK(sd.neighbors.size() == sd.interfaces.size());
    CHECK(std::is_sorted(sd.slots.begin(), sd.slots.end()));
  }
}

TEST_CASE("swap is a fixed-point-free involution commuting with the mass") {
  const Mesh mesh = build_unit_square_mesh(16);
  const SubdomainPartition p = partition_mesh(mesh, 4);
  const int n = p.slot_count();
  const TraceVector g = testing::random_vector(n, 1);
  const TraceVector tg = swap_sides(g);
  CHECK(swap_sides(tg) == g);
  for (int s = 0; s < n; ++s) CHECK(tg[s] == g[s ^ 1]);
  const Vector m = interface_mass(p, mesh);
  CHECK(swap_sides(m.cwiseProduct(g)) == m.cwiseProduct(tg));
  for (int s = 0; s < n; ++s) CHECK(m[s] == doctest::Approx(1.0 / 16).epsilon(1e-15));
  CHECK_THROWS_AS(swap_sides(TraceVector::Zero(5)), DimensionError);
}

TEST_CASE("constraint matrix structure") {
  const int m = 16, n = 4, r = m / n;
  const Mesh mesh = build_unit_square_mesh(m);
  const SubdomainPartition p = partition_mesh(mesh, n);
  const Matrix b(build_constraint(p, mesh));
  REQUIRE(b.rows() == 2 * n * (n - 1));
  REQUIRE(b.cols() == p.slot_count());
  for (int row = 0; row < b.rows(); ++row) {
    int nnz = 0;
    for (int s = 0; s < b.cols(); ++s)
      if (b(row, s) != 0.0) {
        ++nnz;
        CHECK(p.slots[s].interface == row);
        CHECK(b(row, s) == doctest::Approx((p.slots[s].side == 0 ? 1.0 : -1.0) / m));
      }
    CHECK(nnz == 2 * r);
  }
  const Matrix gram = b * b.transpose();
  CHECK((gram - Matrix(gram.diagonal().asDiagonal())).norm() == 0.0);
  CHECK(Eigen::FullPivLU<Matrix>(b).rank() == b.rows());
  // swapping sides flips the jump
  CHECK((b * testing::dense_swap(p.slot_count()) + b).norm() == 0.0);
}

TEST_CASE("constraint action") {
  const int m = 16, n = 4;
  const Mesh mesh = build_unit_square_mesh(m);
  const SubdomainPartition p = partition_mesh(mesh, n);
  const SparseMatrix b = build_constraint(p, mesh);

  TraceVector continuous = testing::random_vector(p.slot_count(), 2);
  for (int s = 0; s < p.slot_count(); s += 2) continuous[s + 1] = continuous[s];
  CHECK((b * continuous).norm() < 1e-15);

  TraceVector one_side = TraceVector::Zero(p.slot_count());
  const int target = 5;
  for (int s = 0; s < p.slot_count(); ++s)
    if (p.slots[s].interface == target && p.slots[s].side == 0) one_side[s] = 1.0;
  const Vector jump = b * one_side;
  for (int row = 0; row < jump.size(); ++row)
    CHECK(jump[row] == doctest::Approx(row == target ? 1.0 / n : 0.0).epsilon(1e-14));

  // orthogonal projection onto ker B using the diagonal Gram matrix
  const TraceVector x = testing::random_vector(p.slot_count(), 3);
  const Matrix bd(b);
  const Vector gram = (bd * bd.transpose()).diagonal();
  const TraceVector proj = x - bd.transpose() * (bd * x).cwiseQuotient(gram);
  CHECK((b * proj).norm() < 1e-12);
}
