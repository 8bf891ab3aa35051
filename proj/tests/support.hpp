#pragma once

#include "rrhdiv/local_solver.hpp"
#include "rrhdiv/mesh.hpp"
#include "rrhdiv/partition.hpp"

#include <random>

namespace rrhdiv::testing {

inline Vector random_vector(int n, unsigned seed) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = dist(gen);
  return v;
}

inline double relative_diff(const Vector& a, const Vector& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

inline double relative_diff(const Matrix& a, const Matrix& b) {
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

/// Dense T as a permutation matrix.
inline Matrix dense_swap(int n) {
  Matrix t = Matrix::Zero(n, n);
  for (int s = 0; s < n; ++s) t(s, s ^ 1) = 1.0;
  return t;
}

/// Block-diagonal Robin Schur complement S + gamma M over all trace slots,
/// built from dense copies of each subdomain's stiffness matrix.
inline Matrix dense_robin_schur(const RobinSubstructuring& solver) {
  const int n = solver.slot_count();
  Matrix sm = Matrix::Zero(n, n);
  const auto& part = solver.partition();
  for (std::size_t i = 0; i < solver.systems().size(); ++i) {
    const LocalRobinSystem& sys = solver.systems()[i];
    const Matrix a(sys.stiffness());
    const int ni = sys.interior_size(), nd = sys.interface_size();
    Matrix s = a.bottomRightCorner(nd, nd);
    if (ni > 0) {
      const Matrix aii = a.topLeftCorner(ni, ni);
      s -= a.bottomLeftCorner(nd, ni) * aii.llt().solve(Matrix(a.topRightCorner(ni, nd)));
    }
    s += solver.gamma() * Matrix(sys.interface_mass().asDiagonal());
    const auto& slots = part.subdomains[i].slots;
    for (int r = 0; r < nd; ++r)
      for (int c = 0; c < nd; ++c) sm(slots[r], slots[c]) += s(r, c);
  }
  return sm;
}

/// S_M^{-1} - K with K = S_M^{-1} B^T [B S_M^{-1} B^T]^{-1} B S_M^{-1}.
inline Matrix dense_resolvent(const RobinSubstructuring& solver) {
  const Matrix sm = dense_robin_schur(solver);
  const int n = static_cast<int>(sm.rows());
  const Matrix sinv = sm.llt().solve(Matrix::Identity(n, n));
  const Matrix b(solver.constraint());
  if (b.rows() == 0) return sinv;
  const Matrix coarse = b * sinv * b.transpose();
  const Matrix k = sinv * b.transpose() * coarse.llt().solve(b * sinv);
  return sinv - k;
}

/// (T + I) M - 2 gamma M R M with R the dense resolvent.
inline Matrix dense_interface_operator(const RobinSubstructuring& solver) {
  const int n = solver.slot_count();
  const Matrix m = solver.mass().asDiagonal();
  const Matrix r = dense_resolvent(solver);
  return (dense_swap(n) + Matrix::Identity(n, n)) * m - 2.0 * solver.gamma() * m * r * m;
}

/// Q_theta = (1 - theta) I + theta T (2 gamma R M - I).
inline Matrix dense_iteration_operator(const RobinSubstructuring& solver, double theta) {
  const int n = solver.slot_count();
  const Matrix m = solver.mass().asDiagonal();
  const Matrix id = Matrix::Identity(n, n);
  return (1.0 - theta) * id + theta * dense_swap(n) * (2.0 * solver.gamma() * dense_resolvent(solver) * m - id);
}

}  // namespace rrhdiv::testing
