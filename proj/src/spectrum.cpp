#include "rrhdiv/spectrum.hpp"

#include "rrhdiv/mesh.hpp"
#include "rrhdiv/partition.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

namespace rrhdiv {

namespace {

// Imaginary parts below this are treated as rounding noise of a real eigenvalue.
constexpr double kRealTol = 1e-8;

}  // namespace

Matrix assemble_iteration_operator(const RobinSubstructuring& solver, double theta, int max_dimension) {
  const int n = solver.slot_count();
  if (n > max_dimension)
    throw DimensionError("iteration operator of dimension " + std::to_string(n) + " exceeds the cap of " +
                         std::to_string(max_dimension));
  const auto loads = solver.zero_loads();
  Matrix q(n, n);
  TraceVector unit = TraceVector::Zero(n);
  for (int s = 0; s < n; ++s) {
    unit[s] = 1.0;
    q.col(s) = richardson_step(solver, loads, unit, theta, true);
    unit[s] = 0.0;
  }
  return q;
}

Matrix assemble_iteration_operator(const IterationConfig& config, int max_dimension) {
  config.validate();
  const int slots = 4 * config.n * (config.n - 1) * config.ratio;
  if (slots > max_dimension)
    throw DimensionError("iteration operator of dimension " + std::to_string(slots) + " exceeds the cap of " +
                         std::to_string(max_dimension));
  const Mesh mesh = build_unit_square_mesh(config.resolution());
  const SubdomainPartition part = partition_mesh(mesh, config.n);
  const RobinSubstructuring solver(mesh, part, config.beta, config.gamma.resolve(mesh.resolution, config.n));
  return assemble_iteration_operator(solver, config.theta, max_dimension);
}

SpectrumReport summarize_spectrum(std::vector<std::complex<double>> values) {
  SpectrumReport r;
  r.max_real = -std::numeric_limits<double>::infinity();
  r.max_real_below_one = std::numeric_limits<double>::quiet_NaN();
  for (const auto& z : values) {
    r.max_real = std::max(r.max_real, z.real());
    const bool unit = std::abs(z - 1.0) < kUnitEigenvalueTol;
    if (unit) {
      ++r.unit_count;
    } else {
      r.reduced_spectral_radius = std::max(r.reduced_spectral_radius, std::abs(z));
    }
    if (std::abs(z.imag()) <= kRealTol) {
      if (z.real() < 1.0 - kUnitEigenvalueTol &&
          (std::isnan(r.max_real_below_one) || z.real() > r.max_real_below_one))
        r.max_real_below_one = z.real();
    } else {
      r.max_complex_modulus = std::max(r.max_complex_modulus, std::abs(z));
    }
  }
  if (values.empty()) r.max_real = std::numeric_limits<double>::quiet_NaN();
  r.eigenvalues = std::move(values);
  return r;
}

SpectrumReport eigenvalues(const Matrix& q) {
  if (q.rows() != q.cols()) throw DimensionError("eigenvalues of a non-square matrix");
  const auto n = static_cast<lapack_int>(q.rows());
  if (n == 0) return summarize_spectrum({});
  Matrix a = q;
  Vector wr(n), wi(n);
  const lapack_int info =
      LAPACKE_dgeev(LAPACK_COL_MAJOR, 'N', 'N', n, a.data(), n, wr.data(), wi.data(), nullptr, 1, nullptr, 1);
  if (info != 0)
    throw NumericError("dgeev failed (info = " + std::to_string(info) + ") on a " + std::to_string(n) + "x" +
                       std::to_string(n) + " operator");
  std::vector<std::complex<double>> values(static_cast<std::size_t>(n));
  for (lapack_int i = 0; i < n; ++i) values[static_cast<std::size_t>(i)] = {wr[i], wi[i]};
  return summarize_spectrum(std::move(values));
}

void export_spectrum(const SpectrumReport& report, const std::filesystem::path& path) {
  auto sorted = report.eigenvalues;
  std::sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "re,im\n";
  char line[64];
  for (const auto& z : sorted) {
    std::snprintf(line, sizeof line, "%.17g,%.17g\n", z.real(), z.imag());
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

std::vector<std::complex<double>> read_spectrum(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "re,im") throw std::runtime_error("unexpected spectrum header in " + path.string());
  std::vector<std::complex<double>> values;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    values.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  return values;
}

std::string spectrum_file_name(int n, int ratio, const GammaChoice& gamma, double theta) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "spectrum_N%d_r%d_gamma%s_theta%g.csv", n, ratio, gamma.label().c_str(), theta);
  return buf;
}

}  // namespace rrhdiv
