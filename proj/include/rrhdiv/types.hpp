#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <functional>
#include <stdexcept>

namespace rrhdiv {

using Vec2 = Eigen::Vector2d;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

/// Lowest-order Raviart-Thomas coefficients indexed by mesh edge id.
/// Entry e is the average normal component of the field along n_e.
using DofVector = Eigen::VectorXd;

/// Interface data indexed by trace slot (one slot per interface fine edge
/// and per side of the interface).
using TraceVector = Eigen::VectorXd;

using VectorField = std::function<Vec2(const Vec2&)>;
using ScalarField = std::function<double(const Vec2&)>;

// Error taxonomy. Everything derives from std::runtime_error so callers that
// only care about "it failed" can catch one type.

struct InvalidMeshError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Mesh resolution not divisible by the number of subdomains per side.
struct IncompatiblePartitionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A factorization that must succeed (SPD by construction) failed.
struct ConfigurationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace rrhdiv
