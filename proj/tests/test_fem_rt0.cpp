#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rrhdiv/fem_rt0.hpp"
#include "rrhdiv/verify.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>

using namespace rrhdiv;

namespace {

// Exact second moment: int_K x x^T = |K|/12 (sum v v^T + (sum v)(sum v)^T).
Eigen::Matrix2d second_moment(const std::array<Vec2, 3>& v, double area) {
  Eigen::Matrix2d s = Eigen::Matrix2d::Zero();
  Vec2 sum = Vec2::Zero();
  for (const auto& p : v) {
    s += p * p.transpose();
    sum += p;
  }
  return area / 12.0 * (s + sum * sum.transpose());
}

// Mass matrix from the closed-form moments of phi_k = c_k (x - p_k).
Eigen::Matrix3d exact_mass(const std::array<Vec2, 3>& v, const std::array<int, 3>& signs) {
  const double area = 0.5 * std::abs((v[1] - v[0]).x() * (v[2] - v[0]).y() - (v[1] - v[0]).y() * (v[2] - v[0]).x());
  const Eigen::Matrix2d xx = second_moment(v, area);
  const Vec2 x1 = area * (v[0] + v[1] + v[2]) / 3.0;
  Eigen::Matrix3d m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const double li = (v[(i + 1) % 3] - v[(i + 2) % 3]).norm();
      const double lj = (v[(j + 1) % 3] - v[(j + 2) % 3]).norm();
      const double ci = signs[i] * li / (2 * area), cj = signs[j] * lj / (2 * area);
      const double integral = xx.trace() - x1.dot(v[i]) - x1.dot(v[j]) + area * v[i].dot(v[j]);
      m(i, j) = ci * cj * integral;
    }
  return m;
}

std::array<Vec2, 3> random_triangle(std::mt19937& gen) {
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (;;) {
    std::array<Vec2, 3> v{Vec2(d(gen), d(gen)), Vec2(d(gen), d(gen)), Vec2(d(gen), d(gen))};
    const double cross = (v[1] - v[0]).x() * (v[2] - v[0]).y() - (v[1] - v[0]).y() * (v[2] - v[0]).x();
    if (cross < 0.0) std::swap(v[1], v[2]);
    if (std::abs(cross) > 0.05) return v;
  }
}

Vec2 edge_normal(const std::array<Vec2, 3>& v, int k) {
  const Vec2 t = v[(k + 2) % 3] - v[(k + 1) % 3];
  return Vec2(t.y(), -t.x()).normalized();  // outward for counter-clockwise corners
}

}  // namespace

TEST_CASE("reference triangle integrals") {
  const std::array<Vec2, 3> v{Vec2(0, 0), Vec2(1, 0), Vec2(0, 1)};
  const Rt0Element el(v, {1, 1, 1});
  const ElementMatrices mats = el.matrices();
  CHECK(mats.divdiv(0, 0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(mats.divdiv(1, 1) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mats.divdiv(2, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(mats.mass(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
  CHECK(el.area() == doctest::Approx(0.5));
}

TEST_CASE("element matrices on random triangles") {
  std::mt19937 gen(7);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    const auto v = random_triangle(gen);
    const std::array<int, 3> signs{coin(gen) ? 1 : -1, coin(gen) ? 1 : -1, coin(gen) ? 1 : -1};
    const Rt0Element el(v, signs);
    const ElementMatrices mats = el.matrices();

    Eigen::Vector3d d;
    for (int k = 0; k < 3; ++k) d[k] = signs[k] * el.edge_length(k) / std::sqrt(el.area());
    CHECK((mats.divdiv - d * d.transpose()).norm() < 1e-12 * d.squaredNorm());

    const Eigen::Matrix3d oracle = exact_mass(v, signs);
    CHECK((mats.mass - oracle).norm() < 1e-12 * oracle.norm());
    CHECK((mats.mass - mats.mass.transpose()).norm() <= 1e-15 * mats.mass.norm());
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(mats.mass);
    CHECK(es.eigenvalues().minCoeff() > 0.0);
  }
}

TEST_CASE("basis functions have unit flux on their own edge") {
  std::mt19937 gen(11);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_triangle(gen);
    const Rt0Element el(v, {1, -1, 1});
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) {
        const Vec2 a = v[(j + 1) % 3], b = v[(j + 2) % 3];
        const Vec2 n = edge_normal(v, j) * (j == 1 ? -1.0 : 1.0);
        // the normal component is constant along the edge
        const double at_a = el.basis(k, 0.75 * a + 0.25 * b).dot(n);
        const double at_b = el.basis(k, 0.25 * a + 0.75 * b).dot(n);
        CHECK(at_a == doctest::Approx(at_b).epsilon(1e-12));
        CHECK(at_a == doctest::Approx(k == j ? 1.0 : 0.0).epsilon(1e-12));
      }
  }
}

TEST_CASE("divergence matches finite differences of the basis") {
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto v = random_triangle(gen);
    const Rt0Element el(v, {-1, 1, 1});
    const Eigen::Vector3d dofs(d(gen), d(gen), d(gen));
    const Vec2 x = el.map({0.2, 0.3, 0.5});
    const double eps = 1e-6;
    const double fd = (el.value(dofs, x + Vec2(eps, 0)).x() - el.value(dofs, x - Vec2(eps, 0)).x() +
                       el.value(dofs, x + Vec2(0, eps)).y() - el.value(dofs, x - Vec2(0, eps)).y()) /
                      (2 * eps);
    CHECK(el.divergence(dofs) == doctest::Approx(fd).epsilon(1e-7));
    double formula = 0.0;
    for (int k = 0; k < 3; ++k) formula += el.basis_divergence(k) * dofs[k];
    CHECK(el.divergence(dofs) == doctest::Approx(formula).epsilon(1e-13));
  }
}

TEST_CASE("element divergence of a global field") {
  const Mesh mesh = build_unit_square_mesh(6);
  const DofVector u = testing::random_vector(mesh.num_edges(), 17);
  const Vector div = element_divergence(u, mesh);
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Triangle& tri = mesh.triangles[t];
    double expected = 0.0;
    for (int k = 0; k < 3; ++k) expected += tri.signs[k] * mesh.edges[tri.edges[k]].length * u[tri.edges[k]];
    CHECK(div[static_cast<int>(t)] == doctest::Approx(expected / tri.area).epsilon(1e-12));
  }
}

TEST_CASE("degenerate element") {
  const std::array<Vec2, 3> flat{Vec2(0, 0), Vec2(1, 0), Vec2(2, 0)};
  CHECK_THROWS_AS(Rt0Element(flat, {1, 1, 1}), InvalidMeshError);
  const std::array<Vec2, 3> clockwise{Vec2(0, 0), Vec2(0, 1), Vec2(1, 0)};
  CHECK_THROWS_AS(Rt0Element(clockwise, {1, 1, 1}), InvalidMeshError);
}

TEST_CASE("quadrature rule integrates quartics exactly") {
  const auto& rule = degree4_rule();
  double wsum = 0.0;
  for (double w : rule.weights) wsum += w;
  CHECK(wsum == doctest::Approx(1.0).epsilon(1e-14));
  // On the reference triangle int x^a y^b = a! b! / (a + b + 2)!.
  auto fact = [](int n) { double r = 1; for (int i = 2; i <= n; ++i) r *= i; return r; };
  for (int a = 0; a <= 4; ++a)
    for (int b = 0; a + b <= 4; ++b) {
      double q = 0.0;
      for (std::size_t i = 0; i < rule.weights.size(); ++i) {
        const double x = rule.barycentric[i][1], y = rule.barycentric[i][2];
        q += 0.5 * rule.weights[i] * std::pow(x, a) * std::pow(y, b);
      }
      CHECK(q == doctest::Approx(fact(a) * fact(b) / fact(a + b + 2)).epsilon(1e-13));
    }
}

TEST_CASE("global system dimension, symmetry and definiteness") {
  const ModelProblem p = manufactured_problem();
  const Mesh mesh = build_unit_square_mesh(32);
  const GlobalSystem sys = assemble_global(mesh, 1.0, p.load);
  CHECK(sys.matrix.rows() == 3008);
  CHECK(static_cast<int>(sys.free_edges.size()) == mesh.num_edges() - 4 * 32);
  const SparseMatrix asym = sys.matrix - SparseMatrix(sys.matrix.transpose());
  CHECK(asym.norm() <= 1e-14 * sys.matrix.norm());

  const Mesh small = build_unit_square_mesh(4);
  const GlobalSystem s4 = assemble_global(small, 1.0, p.load);
  Eigen::SelfAdjointEigenSolver<Matrix> es{Matrix(s4.matrix)};
  CHECK(es.eigenvalues().minCoeff() > 0.0);
}

TEST_CASE("energy bounds the mass norm") {
  const Mesh mesh = build_unit_square_mesh(5);
  const double beta = 0.3;
  const GlobalSystem sys = assemble_global(mesh, beta, [](const Vec2&) { return Vec2(0, 0); });
  std::mt19937 gen(3);
  std::uniform_real_distribution<double> d(-1, 1);
  for (int trial = 0; trial < 10; ++trial) {
    Vector w(sys.matrix.rows());
    for (int i = 0; i < w.size(); ++i) w[i] = d(gen);
    const double energy = w.dot(sys.matrix * w);
    // a(w, w) - beta (w, w) = |div w|^2 >= 0
    const DofVector full = sys.expand(w);
    CHECK(energy > 0.0);
    CHECK(energy >= beta * std::pow(l2_distance(full, DofVector::Zero(full.size()), mesh), 2) * (1 - 1e-12));
  }
}

TEST_CASE("zero load gives the zero solution") {
  const Mesh mesh = build_unit_square_mesh(8);
  const auto zero = [](const Vec2&) { return Vec2(0, 0); };
  CHECK(assemble_global(mesh, 1.0, zero).load.norm() == 0.0);
  CHECK(solve_global(mesh, 1.0, zero).norm() == 0.0);
}

TEST_CASE("Galerkin residual of the direct solve") {
  const ModelProblem p = manufactured_problem();
  const Mesh mesh = build_unit_square_mesh(4);
  const GlobalSystem sys = assemble_global(mesh, 1.0, p.load);
  const DofVector u = solve_global(mesh, 1.0, p.load);
  Vector free(sys.free_edges.size());
  for (std::size_t i = 0; i < sys.free_edges.size(); ++i) free[static_cast<int>(i)] = u[sys.free_edges[i]];
  CHECK((sys.matrix * free - sys.load).norm() < 1e-10 * sys.load.norm());
  for (int e : classify_boundary(mesh)) CHECK(u[e] == 0.0);
}

TEST_CASE("invalid beta") {
  const Mesh mesh = build_unit_square_mesh(2);
  const auto f = [](const Vec2&) { return Vec2(1, 1); };
  CHECK_THROWS_AS(assemble_global(mesh, 0.0, f), std::invalid_argument);
  CHECK_THROWS_AS(assemble_global(mesh, -1.0, f), std::invalid_argument);
}

TEST_CASE("interpolation") {
  const Mesh mesh = build_unit_square_mesh(6);
  const DofVector c = interpolate([](const Vec2&) { return Vec2(0.7, -1.3); }, mesh);
  for (int e = 0; e < mesh.num_edges(); ++e)
    CHECK(c[e] == doctest::Approx(Vec2(0.7, -1.3).dot(mesh.edges[e].normal)).epsilon(1e-14));

  const ModelProblem p = manufactured_problem();
  const DofVector u = interpolate(p.exact, mesh);
  for (int e : classify_boundary(mesh)) CHECK(std::abs(u[e]) < 1e-15);

  const DofVector tangential = interpolate([](const Vec2& x) { return Vec2(x.y(), 0.0); }, mesh);
  for (int e = 0; e < mesh.num_edges(); ++e)
    if (mesh.edges[e].kind == EdgeKind::horizontal) CHECK(tangential[e] == 0.0);

  // Average of a quadratic normal component: exact with two Gauss points.
  const DofVector q = interpolate([](const Vec2& x) { return Vec2(x.y() * x.y(), 0.0); }, mesh);
  for (int e = 0; e < mesh.num_edges(); ++e) {
    const Edge& edge = mesh.edges[e];
    if (edge.kind != EdgeKind::vertical) continue;
    const double y0 = mesh.point(edge.vertices[0]).y(), y1 = mesh.point(edge.vertices[1]).y();
    CHECK(q[e] == doctest::Approx((y1 * y1 * y1 - y0 * y0 * y0) / (3 * (y1 - y0))).epsilon(1e-13));
  }
}

TEST_CASE("fields in the finite element space have zero error") {
  const Mesh mesh = build_unit_square_mesh(8);
  const auto field = [](const Vec2& x) { return Vec2(1.0 + 2.0 * x.x(), 3.0 + 2.0 * x.y()); };
  const DofVector u = interpolate(field, mesh);
  const ErrorNorms err = error_norms(u, field, [](const Vec2&) { return 4.0; }, mesh);
  CHECK(err.l2 < 1e-12);
  CHECK(err.hdiv < 1e-12);
}

TEST_CASE("errors halve under refinement") {
  const ModelProblem p = manufactured_problem();
  std::vector<ErrorNorms> errs;
  for (int m : {32, 64, 128}) {
    const Mesh mesh = build_unit_square_mesh(m);
    errs.push_back(error_norms(solve_global(mesh, 1.0, p.load), p.exact, p.exact_div, mesh));
  }
  for (int i = 0; i < 2; ++i) {
    CHECK(errs[i].l2 / errs[i + 1].l2 == doctest::Approx(2.0).epsilon(0.05));
    CHECK(errs[i].hdiv / errs[i + 1].hdiv == doctest::Approx(2.0).epsilon(0.05));
  }
}

TEST_CASE("error norms reject mismatched sizes") {
  const Mesh mesh = build_unit_square_mesh(2);
  const ModelProblem p = manufactured_problem();
  CHECK_THROWS_AS(error_norms(DofVector::Zero(3), p.exact, p.exact_div, mesh), DimensionError);
}
