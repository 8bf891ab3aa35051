#include "rrhdiv/experiments.hpp"

#include "rrhdiv/boundary_system.hpp"
#include "rrhdiv/mesh.hpp"
#include "rrhdiv/partition.hpp"
#include "rrhdiv/spectrum.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <sstream>

#ifndef RRHDIV_VERSION
#define RRHDIV_VERSION "0.0.0"
#endif

namespace rrhdiv {

using nlohmann::json;

namespace {

template <typename E, std::size_t K>
E parse_enum(const std::string& text, const std::array<E, K>& values, const char* what) {
  for (E v : values)
    if (text == to_string(v)) return v;
  throw ConfigurationError(std::string("unknown ") + what + " '" + text + "'");
}

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// NaN is not representable in JSON; it is stored as null.
json number_or_null(double v) { return std::isnan(v) ? json(nullptr) : json(v); }
double number_from(const json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

bool same_theta(double a, double b) { return std::abs(a - b) <= 1e-12; }

// 0.5 -> "1/2", 0.6666... -> "2/3", 1 -> "1"; anything else with %g.
std::string theta_label(double theta) {
  for (int den = 1; den <= 12; ++den) {
    const double num = std::round(theta * den);
    if (std::abs(num / den - theta) < 1e-9) {
      if (den == 1) return std::to_string(static_cast<int>(num));
      if (std::gcd(static_cast<int>(num), den) == 1)
        return std::to_string(static_cast<int>(num)) + "/" + std::to_string(den);
    }
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", theta);
  return buf;
}

double parse_theta_label(const std::string& text) {
  const auto slash = text.find('/');
  if (slash == std::string::npos) return std::stod(text);
  return std::stod(text.substr(0, slash)) / std::stod(text.substr(slash + 1));
}

std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

std::string full(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_number(const std::string& s) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  return std::stod(s);
}

std::string iteration_cell(const RunEntry* e) {
  if (!e) return "";
  if (e->status == "skipped") return "skipped";
  return e->converged ? std::to_string(e->iterations) : "nc:" + std::to_string(e->iterations);
}

void parse_iteration_cell(const std::string& cell, RunEntry& e) {
  if (cell.rfind("nc:", 0) == 0) {
    e.iterations = std::stoi(cell.substr(3));
    e.converged = false;
    e.status = "not converged";
  } else {
    e.iterations = std::stoi(cell);
    e.converged = true;
    e.status = "converged";
  }
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string csv_cell(const std::string& s) {
  return s.find_first_of(",\"") == std::string::npos ? s : quote(s);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  cells.push_back(cur);
  return cells;
}

std::string grid_label(int n) { return std::to_string(n) + "x" + std::to_string(n); }

int parse_grid_label(const std::string& s) { return std::stoi(s.substr(0, s.find('x'))); }

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

const std::vector<std::string> kSingleHeader = {"method",    "NxN",       "H/h",    "gamma",
                                                "theta",     "iterations", "status", "L2-err",
                                                "H(div)-err"};
const std::vector<std::string> kSpectrumHeader = {
    "NxN",      "H/h",      "gamma", "theta", "dimension", "unit_count", "max_real", "max_real_below_one",
    "max_complex_modulus", "reduced_spectral_radius", "status", "file"};

Table build_table(const RunRecord& record) {
  const ExperimentConfig& c = record.config;
  Table t;
  switch (c.experiment) {
    case ExperimentKind::table1:
    case ExperimentKind::table2: {
      const bool by_n = c.experiment == ExperimentKind::table1;
      t.header.push_back(by_n ? "NxN" : "H/h");
      for (const auto& g : c.gammas)
        for (double th : c.thetas) t.header.push_back("gamma=" + g.label() + ",theta=" + theta_label(th));
      if (by_n) {
        t.header.push_back("L2-err");
        t.header.push_back("H(div)-err");
      }
      for (int n : c.ns)
        for (int r : c.ratios) {
          std::vector<std::string> row{by_n ? grid_label(n) : std::to_string(r)};
          const RunEntry* first = nullptr;
          for (const auto& g : c.gammas)
            for (double th : c.thetas) {
              const RunEntry* e = record.find(Method::richardson, n, r, g.label(), th);
              if (!first) first = e;
              row.push_back(iteration_cell(e));
            }
          if (by_n) {
            row.push_back(first ? sci(first->l2_error) : "");
            row.push_back(first ? sci(first->hdiv_error) : "");
          }
          t.rows.push_back(std::move(row));
        }
      break;
    }
    case ExperimentKind::table3: {
      t.header.push_back("NxN");
      for (const auto& g : c.gammas)
        for (int r : c.ratios) t.header.push_back("gamma=" + g.label() + ",H/h=" + std::to_string(r));
      for (int n : c.ns) {
        std::vector<std::string> row{grid_label(n)};
        for (const auto& g : c.gammas)
          for (int r : c.ratios) row.push_back(iteration_cell(record.find(Method::minres, n, r, g.label(), 1.0)));
        t.rows.push_back(std::move(row));
      }
      break;
    }
    case ExperimentKind::spectrum: {
      t.header = kSpectrumHeader;
      for (const auto& e : record.entries) {
        const SpectrumSummary s = e.spectrum.value_or(SpectrumSummary{});
        t.rows.push_back({grid_label(e.n), std::to_string(e.ratio), e.gamma.label(), theta_label(e.theta),
                          std::to_string(s.dimension), std::to_string(s.unit_count), full(s.max_real),
                          full(s.max_real_below_one), full(s.max_complex_modulus), full(s.reduced_spectral_radius),
                          e.status, s.file});
      }
      break;
    }
    case ExperimentKind::single: {
      t.header = kSingleHeader;
      for (const auto& e : record.entries)
        t.rows.push_back({to_string(e.method), grid_label(e.n), std::to_string(e.ratio), e.gamma.label(),
                          theta_label(e.theta), std::to_string(e.iterations), e.status, sci(e.l2_error),
                          sci(e.hdiv_error)});
      break;
    }
  }
  return t;
}

RunEntry base_entry(Method method, int n, int ratio, const GammaChoice& gamma, double theta) {
  RunEntry e;
  e.method = method;
  e.n = n;
  e.ratio = ratio;
  e.gamma = gamma;
  e.theta = theta;
  return e;
}

void log_entry(std::ostream* log, const RunEntry& e) {
  if (!log) return;
  *log << to_string(e.method) << " N=" << e.n << " H/h=" << e.ratio << " gamma=" << e.gamma.label()
       << " theta=" << theta_label(e.theta) << ": ";
  if (e.spectrum && e.status == "converged")
    *log << "dimension " << e.spectrum->dimension << ", " << e.spectrum->unit_count << " unit eigenvalues";
  else if (e.status == "converged")
    *log << e.iterations << " iterations";
  else
    *log << e.status;
  *log << '\n';
}

// Richardson runs over gammas x thetas sharing one mesh and partition per (n, ratio).
void richardson_grid(const ExperimentConfig& c, RunRecord& record, std::ostream* log, bool constrained) {
  const ModelProblem problem = manufactured_problem();
  const Method method = constrained ? Method::richardson : Method::baseline;
  for (int n : c.ns)
    for (int r : c.ratios) {
      const Mesh mesh = build_unit_square_mesh(n * r);
      const SubdomainPartition part = partition_mesh(mesh, n);
      for (const auto& g : c.gammas) {
        std::optional<RobinSubstructuring> solver;
        std::string setup_error;
        try {
          solver.emplace(mesh, part, c.beta, g.resolve(mesh.resolution, n));
        } catch (const std::exception& ex) {
          setup_error = ex.what();
        }
        for (double th : c.thetas) {
          RunEntry e = base_entry(method, n, r, g, th);
          if (!solver) {
            e.status = setup_error;
          } else {
            try {
              const auto start = std::chrono::steady_clock::now();
              const SolveReport rep = richardson(*solver, solver->loads(problem.load), th, c.tol, c.max_iter,
                                                 constrained);
              const ErrorNorms err = error_norms(rep.u_h, problem.exact, problem.exact_div, mesh);
              e.iterations = rep.iterations;
              e.converged = rep.converged;
              e.status = rep.converged ? "converged" : "max_iterations";
              e.l2_error = err.l2;
              e.hdiv_error = err.hdiv;
              e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            } catch (const std::exception& ex) {
              e.status = ex.what();
            }
          }
          log_entry(log, e);
          record.entries.push_back(std::move(e));
        }
      }
    }
}

void minres_grid(const ExperimentConfig& c, RunRecord& record, std::ostream* log) {
  const ModelProblem problem = manufactured_problem();
  for (int n : c.ns)
    for (const auto& g : c.gammas)
      for (int r : c.ratios) {
        RunEntry e = base_entry(Method::minres, n, r, g, 1.0);
        try {
          IterationConfig ic;
          ic.n = n;
          ic.ratio = r;
          ic.beta = c.beta;
          ic.gamma = g;
          ic.tol = c.tol;
          ic.max_iter = c.max_iter;
          const KrylovReport rep = run_minres(ic, problem);
          e.iterations = rep.iterations;
          e.converged = rep.converged();
          e.status = to_string(rep.status);
          e.l2_error = rep.l2_error;
          e.hdiv_error = rep.hdiv_error;
          e.wall_seconds = rep.wall_seconds;
        } catch (const std::exception& ex) {
          e.status = ex.what();
        }
        log_entry(log, e);
        record.entries.push_back(std::move(e));
      }
}

void spectrum_grid(const ExperimentConfig& c, RunRecord& record, std::ostream* log) {
  std::filesystem::create_directories(c.output_dir);
  for (int n : c.ns)
    for (int r : c.ratios)
      for (const auto& g : c.gammas)
        for (double th : c.thetas) {
          RunEntry e = base_entry(Method::spectrum, n, r, g, th);
          const int dimension = 4 * n * (n - 1) * r;
          if (dimension > kMaxSpectrumDimension) {
            e.status = "skipped";
            if (log)
              *log << "notice: spectrum N=" << n << " H/h=" << r << " has dimension " << dimension
                   << " above the cap of " << kMaxSpectrumDimension << ", skipped\n";
            record.entries.push_back(std::move(e));
            continue;
          }
          try {
            const auto start = std::chrono::steady_clock::now();
            const Mesh mesh = build_unit_square_mesh(n * r);
            const SubdomainPartition part = partition_mesh(mesh, n);
            const RobinSubstructuring solver(mesh, part, c.beta, g.resolve(mesh.resolution, n));
            const SpectrumReport rep = eigenvalues(assemble_iteration_operator(solver, th));
            SpectrumSummary s;
            s.dimension = static_cast<int>(rep.eigenvalues.size());
            s.unit_count = rep.unit_count;
            s.max_real = rep.max_real;
            s.max_real_below_one = rep.max_real_below_one;
            s.max_complex_modulus = rep.max_complex_modulus;
            s.reduced_spectral_radius = rep.reduced_spectral_radius;
            s.file = spectrum_file_name(n, r, g, th);
            export_spectrum(rep, c.output_dir / s.file);
            e.spectrum = s;
            e.converged = true;
            e.status = "converged";
            e.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
          } catch (const std::exception& ex) {
            e.status = ex.what();
          }
          log_entry(log, e);
          record.entries.push_back(std::move(e));
        }
}

RunRecord start_record(const ExperimentConfig& config) {
  config.validate();
  RunRecord record;
  record.config = config;
  record.version = software_version();
  record.started = utc_now();
  return record;
}

}  // namespace

const char* to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::table1: return "table1";
    case ExperimentKind::table2: return "table2";
    case ExperimentKind::table3: return "table3";
    case ExperimentKind::spectrum: return "spectrum";
    case ExperimentKind::single: return "single";
  }
  return "unknown";
}

const char* to_string(OutputFormat format) { return format == OutputFormat::csv ? "csv" : "json"; }

const char* to_string(Method method) {
  switch (method) {
    case Method::richardson: return "richardson";
    case Method::minres: return "minres";
    case Method::baseline: return "baseline";
    case Method::spectrum: return "spectrum";
  }
  return "unknown";
}

ExperimentKind parse_experiment(const std::string& text) {
  return parse_enum(text,
                    std::array{ExperimentKind::table1, ExperimentKind::table2, ExperimentKind::table3,
                               ExperimentKind::spectrum, ExperimentKind::single},
                    "experiment");
}

OutputFormat parse_format(const std::string& text) {
  return parse_enum(text, std::array{OutputFormat::csv, OutputFormat::json}, "format");
}

Method parse_method(const std::string& text) {
  return parse_enum(text, std::array{Method::richardson, Method::minres, Method::baseline, Method::spectrum},
                    "method");
}

const char* software_version() { return RRHDIV_VERSION; }

ExperimentConfig ExperimentConfig::defaults(ExperimentKind kind, int max_n, bool full_grid) {
  ExperimentConfig c;
  c.experiment = kind;
  auto truncate = [&](std::vector<int> ns) {
    if (!full_grid) std::erase_if(ns, [&](int n) { return n > max_n; });
    return ns;
  };
  const std::vector<GammaChoice> both{GammaChoice::fine(), GammaChoice::coarse()};
  switch (kind) {
    case ExperimentKind::table1:
      c.ns = truncate({4, 8, 16, 24, 32, 40, 48, 64});
      c.ratios = {8};
      c.gammas = both;
      c.thetas = {0.5, 2.0 / 3.0};
      break;
    case ExperimentKind::table2:
      c.ns = {4};
      c.ratios = {4, 8, 16, 32};
      c.gammas = both;
      c.thetas = {0.5, 2.0 / 3.0};
      break;
    case ExperimentKind::table3:
      c.ns = truncate({4, 8, 16, 24, 32, 40, 48});
      c.ratios = {8, 16};
      c.gammas = both;
      c.thetas = {1.0};
      break;
    case ExperimentKind::spectrum:
      c.ns = {4, 8, 12};
      c.ratios = {4, 8};
      c.gammas = {GammaChoice::fine()};
      c.thetas = {1.0};
      break;
    case ExperimentKind::single:
      c.ns = {4};
      c.ratios = {8};
      c.gammas = {GammaChoice::fine()};
      c.thetas = {0.5};
      break;
  }
  return c;
}

void ExperimentConfig::validate() const {
  if (ns.empty() || ratios.empty() || gammas.empty() || thetas.empty())
    throw ConfigurationError("experiment grid is empty");
  for (int n : ns)
    if (n < 1) throw ConfigurationError("number of subdomains per side must be positive");
  for (int r : ratios)
    if (r < 1) throw ConfigurationError("H/h must be positive");
  for (int n : ns)
    for (int r : ratios)
      if (static_cast<long long>(n) * r > kMaxOracleResolution)
        throw ConfigurationError("N=" + std::to_string(n) + ", H/h=" + std::to_string(r) +
                                 " exceeds the largest supported resolution " +
                                 std::to_string(kMaxOracleResolution));
  for (const auto& g : gammas)
    if (g.rule == GammaChoice::Rule::value && !(g.value > 0.0)) throw ConfigurationError("gamma must be positive");
  for (double th : thetas)
    if (!(th > 0.0 && th <= 1.0)) throw ConfigurationError("theta must lie in (0, 1]");
  if (!(beta > 0.0)) throw ConfigurationError("beta must be positive");
  if (!(tol > 0.0)) throw ConfigurationError("tolerance must be positive");
  if (max_iter < 1) throw ConfigurationError("max_iter must be positive");
  if (experiment == ExperimentKind::single && method == Method::spectrum)
    throw ConfigurationError("use the spectrum experiment for eigenvalue runs");
}

bool RunRecord::all_converged() const {
  return std::all_of(entries.begin(), entries.end(),
                     [](const RunEntry& e) { return e.converged || e.status == "skipped"; });
}

const RunEntry* RunRecord::find(Method method, int n, int ratio, const std::string& gamma, double theta) const {
  for (const auto& e : entries)
    if (e.method == method && e.n == n && e.ratio == ratio && e.gamma.label() == gamma && same_theta(e.theta, theta))
      return &e;
  return nullptr;
}

void to_json(json& j, const GammaChoice& g) {
  if (g.rule == GammaChoice::Rule::value)
    j = g.value;
  else
    j = g.label();
}

void from_json(const json& j, GammaChoice& g) {
  g = j.is_number() ? GammaChoice::explicit_value(j.get<double>()) : GammaChoice::parse(j.get<std::string>());
}

void to_json(json& j, const ExperimentConfig& c) {
  j = json{{"experiment", to_string(c.experiment)},
           {"N", c.ns},
           {"ratio", c.ratios},
           {"gamma", c.gammas},
           {"theta", c.thetas},
           {"method", to_string(c.method)},
           {"beta", c.beta},
           {"tol", c.tol},
           {"max_iter", c.max_iter},
           {"output_dir", c.output_dir.string()},
           {"format", to_string(c.format)}};
}

void from_json(const json& j, ExperimentConfig& c) {
  c.experiment = parse_experiment(j.at("experiment").get<std::string>());
  c.ns = j.at("N").get<std::vector<int>>();
  c.ratios = j.at("ratio").get<std::vector<int>>();
  c.gammas = j.at("gamma").get<std::vector<GammaChoice>>();
  c.thetas = j.at("theta").get<std::vector<double>>();
  c.method = parse_method(j.value("method", std::string("richardson")));
  c.beta = j.value("beta", 1.0);
  c.tol = j.at("tol").get<double>();
  c.max_iter = j.at("max_iter").get<int>();
  c.output_dir = j.value("output_dir", std::string("results"));
  c.format = parse_format(j.value("format", std::string("csv")));
}

void to_json(json& j, const SpectrumSummary& s) {
  j = json{{"dimension", s.dimension},
           {"unit_count", s.unit_count},
           {"max_real", number_or_null(s.max_real)},
           {"max_real_below_one", number_or_null(s.max_real_below_one)},
           {"max_complex_modulus", number_or_null(s.max_complex_modulus)},
           {"reduced_spectral_radius", number_or_null(s.reduced_spectral_radius)},
           {"file", s.file}};
}

void from_json(const json& j, SpectrumSummary& s) {
  s.dimension = j.at("dimension").get<int>();
  s.unit_count = j.at("unit_count").get<int>();
  s.max_real = number_from(j.at("max_real"));
  s.max_real_below_one = number_from(j.at("max_real_below_one"));
  s.max_complex_modulus = number_from(j.at("max_complex_modulus"));
  s.reduced_spectral_radius = number_from(j.at("reduced_spectral_radius"));
  s.file = j.at("file").get<std::string>();
}

void to_json(json& j, const RunEntry& e) {
  j = json{{"method", to_string(e.method)},
           {"N", e.n},
           {"ratio", e.ratio},
           {"gamma", e.gamma},
           {"theta", e.theta},
           {"iterations", e.iterations},
           {"converged", e.converged},
           {"status", e.status},
           {"l2_error", number_or_null(e.l2_error)},
           {"hdiv_error", number_or_null(e.hdiv_error)},
           {"wall_seconds", e.wall_seconds}};
  if (e.spectrum) j["spectrum"] = *e.spectrum;
}

void from_json(const json& j, RunEntry& e) {
  e.method = parse_method(j.at("method").get<std::string>());
  e.n = j.at("N").get<int>();
  e.ratio = j.at("ratio").get<int>();
  e.gamma = j.at("gamma").get<GammaChoice>();
  e.theta = j.at("theta").get<double>();
  e.iterations = j.at("iterations").get<int>();
  e.converged = j.at("converged").get<bool>();
  e.status = j.at("status").get<std::string>();
  e.l2_error = number_from(j.at("l2_error"));
  e.hdiv_error = number_from(j.at("hdiv_error"));
  e.wall_seconds = j.value("wall_seconds", 0.0);
  if (j.contains("spectrum"))
    e.spectrum = j.at("spectrum").get<SpectrumSummary>();
  else
    e.spectrum.reset();
}

void to_json(json& j, const RunRecord& r) {
  j = json{{"config", r.config},
           {"version", r.version},
           {"started", r.started},
           {"finished", r.finished},
           {"runs", r.entries}};
}

void from_json(const json& j, RunRecord& r) {
  r.config = j.at("config").get<ExperimentConfig>();
  r.version = j.value("version", std::string());
  r.started = j.value("started", std::string());
  r.finished = j.value("finished", std::string());
  r.entries = j.at("runs").get<std::vector<RunEntry>>();
}

RunRecord run_table1(ExperimentConfig config, std::ostream* log) {
  config.experiment = ExperimentKind::table1;
  RunRecord record = start_record(config);
  richardson_grid(config, record, log, true);
  record.finished = utc_now();
  return record;
}

RunRecord run_table2(ExperimentConfig config, std::ostream* log) {
  config.experiment = ExperimentKind::table2;
  RunRecord record = start_record(config);
  richardson_grid(config, record, log, true);
  record.finished = utc_now();
  return record;
}

RunRecord run_table3(ExperimentConfig config, std::ostream* log) {
  config.experiment = ExperimentKind::table3;
  RunRecord record = start_record(config);
  minres_grid(config, record, log);
  record.finished = utc_now();
  return record;
}

RunRecord run_spectrum(ExperimentConfig config, std::ostream* log) {
  config.experiment = ExperimentKind::spectrum;
  RunRecord record = start_record(config);
  spectrum_grid(config, record, log);
  record.finished = utc_now();
  return record;
}

RunRecord run_experiment(const ExperimentConfig& config, std::ostream* log) {
  switch (config.experiment) {
    case ExperimentKind::table1: return run_table1(config, log);
    case ExperimentKind::table2: return run_table2(config, log);
    case ExperimentKind::table3: return run_table3(config, log);
    case ExperimentKind::spectrum: return run_spectrum(config, log);
    case ExperimentKind::single: break;
  }
  RunRecord record = start_record(config);
  switch (config.method) {
    case Method::richardson: richardson_grid(config, record, log, true); break;
    case Method::baseline: richardson_grid(config, record, log, false); break;
    case Method::minres: minres_grid(config, record, log); break;
    case Method::spectrum: break;
  }
  record.finished = utc_now();
  return record;
}

std::string format_table_csv(const RunRecord& record) {
  const Table t = build_table(record);
  std::ostringstream out;
  out << "# config: " << json(record.config).dump() << '\n';
  for (std::size_t i = 0; i < t.header.size(); ++i) out << (i ? "," : "") << quote(t.header[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_cell(row[i]);
    out << '\n';
  }
  return out.str();
}

std::filesystem::path write_record(const RunRecord& record) {
  const auto& c = record.config;
  std::filesystem::create_directories(c.output_dir);
  const auto path = c.output_dir / (std::string(to_string(c.experiment)) + "." + to_string(c.format));
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (c.format == OutputFormat::csv)
    out << format_table_csv(record);
  else
    out << json(record).dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed for " + path.string());
  return path;
}

RunRecord load_record(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  if (path.extension() == ".json") return json::parse(in).get<RunRecord>();

  std::string line;
  std::getline(in, line);
  const std::string prefix = "# config: ";
  if (line.rfind(prefix, 0) != 0) throw std::runtime_error("missing config line in " + path.string());
  RunRecord record;
  record.config = json::parse(line.substr(prefix.size())).get<ExperimentConfig>();
  record.version = software_version();
  std::getline(in, line);
  const std::vector<std::string> header = split_csv(line);
  const ExperimentConfig& c = record.config;

  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size()) throw std::runtime_error("ragged row in " + path.string());
    switch (c.experiment) {
      case ExperimentKind::table1:
      case ExperimentKind::table2: {
        const bool by_n = c.experiment == ExperimentKind::table1;
        const int n = by_n ? parse_grid_label(cells[0]) : c.ns.front();
        const int r = by_n ? c.ratios.front() : std::stoi(cells[0]);
        std::size_t col = 1;
        for (const auto& g : c.gammas)
          for (double th : c.thetas) {
            RunEntry e = base_entry(Method::richardson, n, r, g, th);
            parse_iteration_cell(cells[col++], e);
            if (by_n) {
              e.l2_error = parse_number(cells[header.size() - 2]);
              e.hdiv_error = parse_number(cells[header.size() - 1]);
            }
            record.entries.push_back(std::move(e));
          }
        break;
      }
      case ExperimentKind::table3: {
        const int n = parse_grid_label(cells[0]);
        std::size_t col = 1;
        for (const auto& g : c.gammas)
          for (int r : c.ratios) {
            RunEntry e = base_entry(Method::minres, n, r, g, 1.0);
            parse_iteration_cell(cells[col++], e);
            record.entries.push_back(std::move(e));
          }
        break;
      }
      case ExperimentKind::spectrum: {
        RunEntry e = base_entry(Method::spectrum, parse_grid_label(cells[0]), std::stoi(cells[1]),
                                GammaChoice::parse(cells[2]), parse_theta_label(cells[3]));
        e.status = cells[10];
        e.converged = e.status == "converged";
        if (e.status != "skipped") {
          SpectrumSummary s;
          s.dimension = std::stoi(cells[4]);
          s.unit_count = std::stoi(cells[5]);
          s.max_real = parse_number(cells[6]);
          s.max_real_below_one = parse_number(cells[7]);
          s.max_complex_modulus = parse_number(cells[8]);
          s.reduced_spectral_radius = parse_number(cells[9]);
          s.file = cells[11];
          e.spectrum = s;
        }
        record.entries.push_back(std::move(e));
        break;
      }
      case ExperimentKind::single: {
        RunEntry e = base_entry(parse_method(cells[0]), parse_grid_label(cells[1]), std::stoi(cells[2]),
                                GammaChoice::parse(cells[3]), parse_theta_label(cells[4]));
        e.iterations = std::stoi(cells[5]);
        e.status = cells[6];
        e.converged = e.status == "converged";
        e.l2_error = parse_number(cells[7]);
        e.hdiv_error = parse_number(cells[8]);
        record.entries.push_back(std::move(e));
        break;
      }
    }
  }
  return record;
}

}  // namespace rrhdiv
