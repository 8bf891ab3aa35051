#pragma once

#include "rrhdiv/iteration.hpp"
#include "rrhdiv/local_solver.hpp"

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

namespace rrhdiv {

/// Dense assembly refuses operators larger than this.
inline constexpr int kMaxSpectrumDimension = 4500;

/// Eigenvalues closer than this to 1 count as the unit eigenvalue.
inline constexpr double kUnitEigenvalueTol = 1e-6;

struct SpectrumReport {
  std::vector<std::complex<double>> eigenvalues;
  double max_real = 0.0;
  /// Largest real eigenvalue below 1 - kUnitEigenvalueTol (NaN if none).
  double max_real_below_one = 0.0;
  /// Largest modulus among eigenvalues with nonzero imaginary part (0 if none).
  double max_complex_modulus = 0.0;
  /// Largest modulus once the unit eigenvalues are removed.
  double reduced_spectral_radius = 0.0;
  int unit_count = 0;
};

/// Matrix of the homogeneous iteration map
///   Q = (1 - theta) I + theta T [2 gamma (S_M^{-1} - K) M - I],
/// one column per unit trace vector. Throws DimensionError above max_dimension.
Matrix assemble_iteration_operator(const RobinSubstructuring& solver, double theta,
                                   int max_dimension = kMaxSpectrumDimension);

/// Builds the decomposition for `config` and assembles Q with config.theta.
Matrix assemble_iteration_operator(const IterationConfig& config, int max_dimension = kMaxSpectrumDimension);

/// Full nonsymmetric eigenvalue computation (LAPACK dgeev, eigenvalues only).
SpectrumReport eigenvalues(const Matrix& q);

/// Summary statistics for a given eigenvalue list.
SpectrumReport summarize_spectrum(std::vector<std::complex<double>> eigenvalues);

/// CSV with header "re,im", one row per eigenvalue, sorted by re then im.
void export_spectrum(const SpectrumReport& report, const std::filesystem::path& path);

/// Reads a file written by export_spectrum.
std::vector<std::complex<double>> read_spectrum(const std::filesystem::path& path);

/// spectrum_N{n}_r{ratio}_gamma{rule}_theta{theta}.csv
std::string spectrum_file_name(int n, int ratio, const GammaChoice& gamma, double theta);

}  // namespace rrhdiv
