#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "rrhdiv/spectrum.hpp"
#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace rrhdiv;
using cplx = std::complex<double>;

namespace {

IterationConfig config(int n, int ratio, double theta) {
  IterationConfig c;
  c.n = n;
  c.ratio = ratio;
  c.theta = theta;
  return c;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

bool by_re_im(const cplx& a, const cplx& b) {
  return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
}

}  // namespace

TEST_CASE("diagonal matrix") {
  Matrix d = Matrix::Zero(3, 3);
  d(0, 0) = 0.3;
  d(1, 1) = 1.0;
  d(2, 2) = -0.5;
  const SpectrumReport r = eigenvalues(d);
  CHECK(r.eigenvalues.size() == 3);
  CHECK(r.unit_count == 1);
  CHECK(r.max_real == doctest::Approx(1.0));
  CHECK(r.max_real_below_one == doctest::Approx(0.3));
  CHECK(r.reduced_spectral_radius == doctest::Approx(0.5));
  CHECK(r.max_complex_modulus == 0.0);
}

TEST_CASE("rotation gives a conjugate pair") {
  const double a = 0.4, b = 0.3;
  Matrix q(2, 2);
  q << a, -b, b, a;
  const SpectrumReport r = eigenvalues(q);
  REQUIRE(r.eigenvalues.size() == 2);
  CHECK(std::abs(r.eigenvalues[0] - std::conj(r.eigenvalues[1])) < 1e-15);
  CHECK(std::abs(r.eigenvalues[0].imag()) == doctest::Approx(b));
  CHECK(r.max_complex_modulus == doctest::Approx(0.5));
  CHECK(r.reduced_spectral_radius == doctest::Approx(0.5));
  CHECK(r.unit_count == 0);
}

TEST_CASE("summary without eigenvalues below one") {
  const SpectrumReport r = summarize_spectrum({cplx(1.0, 0.0), cplx(1.0 + 1e-9, 0.0)});
  CHECK(r.unit_count == 2);
  CHECK(std::isnan(r.max_real_below_one));
  CHECK(r.reduced_spectral_radius == 0.0);
}

TEST_CASE("iteration matrix matches the dense formula") {
  const Mesh mesh = build_unit_square_mesh(8);
  const SubdomainPartition part = partition_mesh(mesh, 2);
  const RobinSubstructuring solver(mesh, part, 1.0, 1.0 / 8);
  for (double theta : {0.5, 1.0}) {
    const Matrix q = assemble_iteration_operator(solver, theta);
    CHECK(testing::relative_diff(q, testing::dense_iteration_operator(solver, theta)) < 1e-9);
  }
}

TEST_CASE("spectrum of a 4x4 decomposition") {
  const int n = 4, r = 4;
  const SpectrumReport full = eigenvalues(assemble_iteration_operator(config(n, r, 1.0)));
  CHECK(full.eigenvalues.size() == static_cast<std::size_t>(4 * n * (n - 1) * r));
  // one unit eigenvalue per coarse interface
  CHECK(full.unit_count == 2 * n * (n - 1));

  // conjugate symmetry
  std::vector<cplx> sorted = full.eigenvalues, conj;
  for (const cplx& z : sorted) conj.push_back(std::conj(z));
  std::sort(sorted.begin(), sorted.end(), by_re_im);
  std::sort(conj.begin(), conj.end(), by_re_im);
  for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(std::abs(sorted[i] - conj[i]) < 1e-10);

  // relaxation maps eigenvalues affinely: lambda_theta = 1 - theta + theta lambda_1
  const SpectrumReport half = eigenvalues(assemble_iteration_operator(config(n, r, 0.5)));
  std::vector<cplx> mapped;
  for (const cplx& z : full.eigenvalues) mapped.push_back(0.5 + 0.5 * z);
  std::vector<cplx> direct = half.eigenvalues;
  std::sort(mapped.begin(), mapped.end(), by_re_im);
  std::sort(direct.begin(), direct.end(), by_re_im);
  double worst = 0.0;
  for (std::size_t i = 0; i < mapped.size(); ++i) worst = std::max(worst, std::abs(mapped[i] - direct[i]));
  CHECK(worst < 1e-10);
  CHECK(half.unit_count == full.unit_count);
}

TEST_CASE("relaxed iteration contracts away from the unit eigenvalue") {
  const SpectrumReport r = eigenvalues(assemble_iteration_operator(config(4, 8, 0.5)));
  CHECK(r.unit_count == 24);
  CHECK(r.reduced_spectral_radius < 1.0);
  CHECK(r.max_real_below_one < 1.0);
}

TEST_CASE("size cap") {
  CHECK_THROWS_AS(assemble_iteration_operator(config(4, 4, 1.0), 100), DimensionError);
  CHECK_NOTHROW(assemble_iteration_operator(config(2, 2, 1.0), 16));
  CHECK_THROWS_AS(eigenvalues(Matrix::Zero(2, 3)), DimensionError);
}

TEST_CASE("export round trip is exact and deterministic") {
  const auto dir = std::filesystem::temp_directory_path() / "rrhdiv_spectrum";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const IterationConfig c = config(2, 4, 1.0);
  const SpectrumReport r = eigenvalues(assemble_iteration_operator(c));
  const auto a = dir / "a.csv", b = dir / "b.csv";
  export_spectrum(r, a);
  export_spectrum(eigenvalues(assemble_iteration_operator(c)), b);
  CHECK(slurp(a) == slurp(b));
  CHECK(slurp(a).rfind("re,im\n", 0) == 0);

  std::vector<cplx> read = read_spectrum(a), original = r.eigenvalues;
  std::sort(original.begin(), original.end(), by_re_im);
  REQUIRE(read.size() == original.size());
  for (std::size_t i = 0; i < read.size(); ++i) CHECK(read[i] == original[i]);
  std::filesystem::remove_all(dir);
  CHECK_THROWS(read_spectrum(dir / "missing.csv"));
}

TEST_CASE("file naming") {
  CHECK(spectrum_file_name(4, 8, GammaChoice::fine(), 1.0) == "spectrum_N4_r8_gammah_theta1.csv");
  CHECK(spectrum_file_name(12, 4, GammaChoice::coarse(), 0.5) == "spectrum_N12_r4_gammaH_theta0.5.csv");
}
