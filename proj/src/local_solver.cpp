#include "rrhdiv/local_solver.hpp"

#include "rrhdiv/fem_rt0.hpp"

#include <algorithm>
#include <string>
#include <unordered_map>

namespace rrhdiv {

namespace {

std::unique_ptr<Eigen::SimplicialLLT<SparseMatrix>> factorize(const SparseMatrix& matrix, int subdomain) {
  auto factor = std::make_unique<Eigen::SimplicialLLT<SparseMatrix>>();
  factor->compute(matrix);
  if (factor->info() != Eigen::Success)
    throw ConfigurationError("Cholesky factorization failed on subdomain " + std::to_string(subdomain));
  return factor;
}

}  // namespace

LocalRobinSystem::LocalRobinSystem(const Mesh& mesh, const SubdomainPartition& partition, int subdomain,
                                   double beta, double gamma)
    : subdomain_(subdomain), gamma_(gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("Robin parameter must be positive");
  if (!(beta > 0.0)) throw std::invalid_argument("beta must be positive");
  const Subdomain& sub = partition.subdomains.at(subdomain);
  interior_size_ = static_cast<int>(sub.interior_edges.size());
  interface_size_ = static_cast<int>(sub.slots.size());
  triangles_ = sub.triangles;

  std::unordered_map<int, int> local_of_edge;
  local_of_edge.reserve(static_cast<std::size_t>(size()));
  for (int i = 0; i < interior_size_; ++i) local_of_edge.emplace(sub.interior_edges[i], i);
  mass_.resize(interface_size_);
  for (int j = 0; j < interface_size_; ++j) {
    const int edge = partition.slots[sub.slots[j]].edge;
    local_of_edge.emplace(edge, interior_size_ + j);
    mass_[j] = mesh.edges[edge].length;
  }

  std::vector<Triplet> triplets;
  triplets.reserve(triangles_.size() * 9);
  element_dofs_.reserve(triangles_.size());
  for (int t : triangles_) {
    const Triangle& tri = mesh.triangles[t];
    std::array<int, 3> dofs{};
    for (int k = 0; k < 3; ++k) {
      const auto it = local_of_edge.find(tri.edges[k]);
      dofs[k] = it == local_of_edge.end() ? -1 : it->second;
    }
    element_dofs_.push_back(dofs);
    const ElementMatrices em = Rt0Element(tri, mesh).matrices();
    const Eigen::Matrix3d a = em.divdiv + beta * em.mass;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (dofs[i] >= 0 && dofs[j] >= 0) triplets.emplace_back(dofs[i], dofs[j], a(i, j));
  }
  stiffness_.resize(size(), size());
  stiffness_.setFromTriplets(triplets.begin(), triplets.end());

  for (int j = 0; j < interface_size_; ++j)
    triplets.emplace_back(interior_size_ + j, interior_size_ + j, gamma * mass_[j]);
  robin_.resize(size(), size());
  robin_.setFromTriplets(triplets.begin(), triplets.end());

  robin_factor_ = factorize(robin_, subdomain);
  interface_interior_ = stiffness_.bottomLeftCorner(interface_size_, interior_size_);
  if (interior_size_ > 0) {
    const SparseMatrix interior = stiffness_.topLeftCorner(interior_size_, interior_size_);
    interior_factor_ = factorize(interior, subdomain);
  }
}

SubdomainLoad LocalRobinSystem::load(const Mesh& mesh, const VectorField& f) const {
  Vector b = Vector::Zero(size());
  for (std::size_t k = 0; k < triangles_.size(); ++k) {
    const Eigen::Vector3d local = Rt0Element(mesh.triangles[triangles_[k]], mesh).load(f);
    for (int i = 0; i < 3; ++i)
      if (element_dofs_[k][i] >= 0) b[element_dofs_[k][i]] += local[i];
  }
  return {b.head(interior_size_), b.tail(interface_size_)};
}

Vector LocalRobinSystem::solve(const Vector& rhs) const {
  if (rhs.size() != size()) throw DimensionError("local right-hand side has the wrong size");
  return robin_factor_->solve(rhs);
}

Vector LocalRobinSystem::solve(const Vector& interior_rhs, const Vector& interface_rhs) const {
  if (interior_rhs.size() != interior_size_ || interface_rhs.size() != interface_size_)
    throw DimensionError("local right-hand side blocks have the wrong size");
  Vector rhs(size());
  rhs << interior_rhs, interface_rhs;
  return robin_factor_->solve(rhs);
}

Vector LocalRobinSystem::condense(const SubdomainLoad& load) const {
  if (interior_size_ == 0) return load.interface;
  const Vector interior = interior_factor_->solve(load.interior);
  return load.interface - interface_interior_ * interior;
}

std::vector<LocalRobinSystem> build_local_systems(const Mesh& mesh, const SubdomainPartition& partition,
                                                  double beta, double gamma) {
  std::vector<LocalRobinSystem> systems;
  systems.reserve(partition.subdomains.size());
  for (std::size_t s = 0; s < partition.subdomains.size(); ++s)
    systems.emplace_back(mesh, partition, static_cast<int>(s), beta, gamma);
  return systems;
}

LocalSolution solve_local(const LocalRobinSystem& system, const SubdomainLoad& load, const Vector& g) {
  if (g.size() != system.interface_size()) throw DimensionError("Robin data has the wrong size");
  const Vector u = system.solve(load.interior, load.interface + system.interface_mass().cwiseProduct(g));
  return {u.head(system.interior_size()), u.tail(system.interface_size())};
}

RobinSubstructuring::RobinSubstructuring(const Mesh& mesh, const SubdomainPartition& partition, double beta,
                                         double gamma)
    : mesh_(&mesh),
      partition_(&partition),
      beta_(beta),
      gamma_(gamma),
      systems_(build_local_systems(mesh, partition, beta, gamma)),
      constraint_(build_constraint(partition, mesh)),
      mass_(interface_mass(partition, mesh)) {
  const int nc = partition.interface_count();
  coarse_.matrix = Matrix::Zero(nc, nc);
  coupling_.resize(systems_.size());

  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const Subdomain& sub = partition.subdomains[i];
    const LocalRobinSystem& sys = systems_[i];
    CoarseCoupling& c = coupling_[i];
    c.interfaces = sub.interfaces;
    std::sort(c.interfaces.begin(), c.interfaces.end());
    const auto nk = static_cast<Eigen::Index>(c.interfaces.size());

    c.rows = Matrix::Zero(nk, sys.interface_size());
    for (int j = 0; j < sys.interface_size(); ++j) {
      const TraceSlot& slot = partition.slots[sub.slots[j]];
      const auto row = std::find(c.interfaces.begin(), c.interfaces.end(), slot.interface) - c.interfaces.begin();
      c.rows(row, j) = constraint_.coeff(slot.interface, sub.slots[j]);
    }

    c.response.resize(sys.size(), nk);
    Vector rhs = Vector::Zero(sys.size());
    for (Eigen::Index k = 0; k < nk; ++k) {
      rhs.tail(sys.interface_size()) = c.rows.row(k).transpose();
      c.response.col(k) = sys.solve(rhs);
    }

    const Matrix local = c.rows * c.response.bottomRows(sys.interface_size());
    for (Eigen::Index a = 0; a < nk; ++a)
      for (Eigen::Index b = 0; b < nk; ++b) coarse_.matrix(c.interfaces[a], c.interfaces[b]) += local(a, b);
  }

  if (nc > 0) {
    coarse_.factor.compute(coarse_.matrix);
    if (coarse_.factor.info() != Eigen::Success)
      throw ConfigurationError("Cholesky factorization of the coarse multiplier system failed");
  }
}

std::vector<SubdomainLoad> RobinSubstructuring::loads(const VectorField& f) const {
  std::vector<SubdomainLoad> out;
  out.reserve(systems_.size());
  for (const auto& sys : systems_) out.push_back(sys.load(*mesh_, f));
  return out;
}

std::vector<SubdomainLoad> RobinSubstructuring::zero_loads() const {
  std::vector<SubdomainLoad> out;
  out.reserve(systems_.size());
  for (const auto& sys : systems_)
    out.push_back({Vector::Zero(sys.interior_size()), Vector::Zero(sys.interface_size())});
  return out;
}

void RobinSubstructuring::check_trace(const TraceVector& g) const {
  if (g.size() != slot_count())
    throw DimensionError("trace vector has " + std::to_string(g.size()) + " entries, expected " +
                         std::to_string(slot_count()));
}

DecomposedSolution RobinSubstructuring::solve(const std::vector<Vector>& interior_rhs,
                                              const TraceVector& interface_rhs, bool constrained) const {
  const auto& part = *partition_;
  std::vector<Vector> local(systems_.size());
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const LocalRobinSystem& sys = systems_[i];
    const auto& slots = part.subdomains[i].slots;
    Vector rhs(sys.size());
    rhs.head(sys.interior_size()) = interior_rhs[i];
    for (int j = 0; j < sys.interface_size(); ++j) rhs[sys.interior_size() + j] = interface_rhs[slots[j]];
    local[i] = rhs.isZero(0.0) ? Vector::Zero(sys.size()) : sys.solve(rhs);
  }

  DecomposedSolution out;
  out.multiplier = Vector::Zero(part.interface_count());
  if (constrained && part.interface_count() > 0) {
    Vector coarse_rhs = Vector::Zero(part.interface_count());
    for (std::size_t i = 0; i < systems_.size(); ++i) {
      const CoarseCoupling& c = coupling_[i];
      const Vector contribution = c.rows * local[i].tail(systems_[i].interface_size());
      for (std::size_t a = 0; a < c.interfaces.size(); ++a)
        coarse_rhs[c.interfaces[a]] += contribution[static_cast<Eigen::Index>(a)];
    }
    out.multiplier = coarse_.factor.solve(coarse_rhs);
    for (std::size_t i = 0; i < systems_.size(); ++i) {
      const CoarseCoupling& c = coupling_[i];
      Vector mu(static_cast<Eigen::Index>(c.interfaces.size()));
      for (std::size_t a = 0; a < c.interfaces.size(); ++a)
        mu[static_cast<Eigen::Index>(a)] = out.multiplier[c.interfaces[a]];
      local[i] -= c.response * mu;
    }
  }

  out.trace = TraceVector::Zero(slot_count());
  out.interior.resize(systems_.size());
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const LocalRobinSystem& sys = systems_[i];
    const auto& slots = part.subdomains[i].slots;
    out.interior[i] = local[i].head(sys.interior_size());
    for (int j = 0; j < sys.interface_size(); ++j) out.trace[slots[j]] = local[i][sys.interior_size() + j];
  }
  return out;
}

namespace {

std::vector<Vector> interior_parts(const std::vector<SubdomainLoad>& loads) {
  std::vector<Vector> out;
  out.reserve(loads.size());
  for (const auto& l : loads) out.push_back(l.interior);
  return out;
}

}  // namespace

DecomposedSolution RobinSubstructuring::solve_constrained(const std::vector<SubdomainLoad>& loads,
                                                          const TraceVector& g) const {
  check_trace(g);
  if (loads.size() != systems_.size()) throw DimensionError("one load per subdomain required");
  TraceVector rhs = mass_.cwiseProduct(g);
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const auto& slots = partition_->subdomains[i].slots;
    for (std::size_t j = 0; j < slots.size(); ++j) rhs[slots[j]] += loads[i].interface[static_cast<Eigen::Index>(j)];
  }
  return solve(interior_parts(loads), rhs, true);
}

DecomposedSolution RobinSubstructuring::solve_unconstrained(const std::vector<SubdomainLoad>& loads,
                                                            const TraceVector& g) const {
  check_trace(g);
  if (loads.size() != systems_.size()) throw DimensionError("one load per subdomain required");
  TraceVector rhs = mass_.cwiseProduct(g);
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const auto& slots = partition_->subdomains[i].slots;
    for (std::size_t j = 0; j < slots.size(); ++j) rhs[slots[j]] += loads[i].interface[static_cast<Eigen::Index>(j)];
  }
  return solve(interior_parts(loads), rhs, false);
}

TraceVector RobinSubstructuring::apply_resolvent(const TraceVector& rhs) const {
  check_trace(rhs);
  std::vector<Vector> interior;
  interior.reserve(systems_.size());
  for (const auto& sys : systems_) interior.push_back(Vector::Zero(sys.interior_size()));
  return solve(interior, rhs, true).trace;
}

TraceVector RobinSubstructuring::condensed_load(const std::vector<SubdomainLoad>& loads) const {
  if (loads.size() != systems_.size()) throw DimensionError("one load per subdomain required");
  TraceVector out = TraceVector::Zero(slot_count());
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const Vector local = systems_[i].condense(loads[i]);
    const auto& slots = partition_->subdomains[i].slots;
    for (std::size_t j = 0; j < slots.size(); ++j) out[slots[j]] = local[static_cast<Eigen::Index>(j)];
  }
  return out;
}

DofVector RobinSubstructuring::assemble(const DecomposedSolution& solution) const {
  const auto& part = *partition_;
  DofVector u = DofVector::Zero(mesh_->num_edges());
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const auto& edges = part.subdomains[i].interior_edges;
    for (std::size_t k = 0; k < edges.size(); ++k) u[edges[k]] = solution.interior[i][static_cast<Eigen::Index>(k)];
  }
  for (int s = 0; s < part.slot_count(); ++s) u[part.slots[s].edge] += 0.5 * solution.trace[s];
  return u;
}

}  // namespace rrhdiv
