#pragma once

#include "rrhdiv/iteration.hpp"

#include "json.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace rrhdiv {

enum class ExperimentKind { table1, table2, table3, spectrum, single };
enum class OutputFormat { csv, json };
enum class Method { richardson, minres, baseline, spectrum };

const char* to_string(ExperimentKind kind);
const char* to_string(OutputFormat format);
const char* to_string(Method method);
ExperimentKind parse_experiment(const std::string& text);
OutputFormat parse_format(const std::string& text);
Method parse_method(const std::string& text);

const char* software_version();

/// Parameter grid of one experiment. Every run is the Cartesian product of
/// ns x ratios x gammas x thetas for the Richardson tables; table3 ignores
/// thetas and spectrum uses thetas as the relaxation of Q.
struct ExperimentConfig {
  ExperimentKind experiment = ExperimentKind::table1;
  std::vector<int> ns;
  std::vector<int> ratios;
  std::vector<GammaChoice> gammas;
  std::vector<double> thetas;
  /// Method for experiment == single.
  Method method = Method::richardson;
  double beta = 1.0;
  double tol = 1e-6;
  int max_iter = 10000;
  std::filesystem::path output_dir = "results";
  OutputFormat format = OutputFormat::csv;

  /// Parameter grid for the given experiment. table1 and table3 keep
  /// N <= max_n unless `full` is set, in which case the whole grid is used.
  static ExperimentConfig defaults(ExperimentKind kind, int max_n = 16, bool full = false);

  /// Throws ConfigurationError on an empty grid or out-of-range values.
  void validate() const;
};

struct SpectrumSummary {
  int dimension = 0;
  int unit_count = 0;
  double max_real = 0.0;
  double max_real_below_one = 0.0;
  double max_complex_modulus = 0.0;
  double reduced_spectral_radius = 0.0;
  std::string file;
};

/// Outcome of one solver run or one spectrum computation.
struct RunEntry {
  Method method = Method::richardson;
  int n = 0;
  int ratio = 0;
  GammaChoice gamma;
  double theta = 1.0;
  int iterations = 0;
  bool converged = false;
  /// "converged", "max_iterations", "breakdown", "skipped" or an error message.
  std::string status;
  double l2_error = 0.0;
  double hdiv_error = 0.0;
  double wall_seconds = 0.0;
  std::optional<SpectrumSummary> spectrum;
};

struct RunRecord {
  ExperimentConfig config;
  std::vector<RunEntry> entries;
  std::string started;
  std::string finished;
  std::string version;

  /// True when every non-skipped run converged.
  bool all_converged() const;
  const RunEntry* find(Method method, int n, int ratio, const std::string& gamma, double theta) const;
};

void to_json(nlohmann::json& j, const GammaChoice& g);
void from_json(const nlohmann::json& j, GammaChoice& g);
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);
void to_json(nlohmann::json& j, const SpectrumSummary& s);
void from_json(const nlohmann::json& j, SpectrumSummary& s);
void to_json(nlohmann::json& j, const RunEntry& e);
void from_json(const nlohmann::json& j, RunEntry& e);
void to_json(nlohmann::json& j, const RunRecord& r);
void from_json(const nlohmann::json& j, RunRecord& r);

/// Runs every configuration of the experiment. Solver failures are recorded
/// in the entry and do not abort the sweep. Spectrum CSVs are written into
/// config.output_dir as they are computed. `log` receives progress lines.
RunRecord run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

RunRecord run_table1(ExperimentConfig config, std::ostream* log = nullptr);
RunRecord run_table2(ExperimentConfig config, std::ostream* log = nullptr);
RunRecord run_table3(ExperimentConfig config, std::ostream* log = nullptr);
RunRecord run_spectrum(ExperimentConfig config, std::ostream* log = nullptr);

/// Results table for the experiment. The first line is
/// "# config: " followed by the config as compact JSON; the header row uses
/// quoted column names such as "gamma=h,theta=1/2". Iteration cells of runs
/// that did not converge read "nc:<iterations>".
std::string format_table_csv(const RunRecord& record);

/// Writes <experiment>.csv (format csv) or <experiment>.json (format json)
/// into config.output_dir and returns the path.
std::filesystem::path write_record(const RunRecord& record);

/// Reads a file written by write_record in either format. The CSV loader
/// recovers the config from the comment line and the cells from the table.
RunRecord load_record(const std::filesystem::path& path);

}  // namespace rrhdiv
