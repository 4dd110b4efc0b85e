#pragma once

// Command-line front end: one subcommand per dataset, CSV or JSON output
// with identical field names, and machine-readable error records.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qslkit/bounds.hpp"
#include "qslkit/error.hpp"
#include "qslkit/model.hpp"
#include "qslkit/scan.hpp"
#include "qslkit/volterra.hpp"

namespace qslkit::cli {

enum class OutputFormat { csv, json };

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kIncomplete = 3,
  kCheckFailed = 4,
  kIoError = 5,
};

inline const std::vector<std::string>& subcommands() {
  static const std::vector<std::string> names{"ratio",      "scan",           "boundary",    "sweep-tau",
                                              "decay-rate", "compare-bounds", "oracle-check"};
  return names;
}

struct RunConfig {
  std::string subcommand;

  double gamma0 = 5.0;
  double lambda = ModelParams::kDefaultLambda;
  double delta = 0.0;
  double tau_d = 0.2;
  double tau = 0.0;  // start of the window for `ratio`
  double tau_max = 2.0;
  double t_max = 1.0;
  std::size_t points = 401;

  // Scan axes; unset bounds default to multiples of lambda.
  std::optional<double> gamma0_min;
  std::optional<double> gamma0_max;
  std::size_t gamma0_n = 41;
  std::optional<double> delta_min;
  std::optional<double> delta_max;
  std::size_t delta_n = 41;

  double clip = 25.0;
  double step = 1e-4;
  double tolerance = 1e-6;
  std::string init = "excited";

  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 40;

  std::string output = "-";
  OutputFormat format = OutputFormat::csv;

  QuadratureSpec quad() const { return {rel_tol, abs_tol, max_depth, {}}; }
  std::vector<double> gamma0_axis() const {
    return log_axis(gamma0_min.value_or(0.02 * lambda), gamma0_max.value_or(20.0 * lambda), gamma0_n);
  }
  std::vector<double> delta_axis() const {
    return linear_axis(delta_min.value_or(0.0), delta_max.value_or(10.0 * lambda), delta_n);
  }
};

// A rectangular result with typed cells, written identically to CSV and JSON.
struct Table {
  using Value = std::variant<double, std::int64_t, std::string>;

  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  std::optional<std::string> trailer;  // CSV comment line, JSON "status"
};

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline void write_csv(const Table& table, std::ostream& os) {
  for (std::size_t c = 0; c < table.columns.size(); ++c) os << (c ? "," : "") << table.columns[c];
  os << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) os << ',';
      std::visit(
          [&os](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>)
              os << format_double(v);
            else
              os << v;
          },
          row[c]);
    }
    os << '\n';
  }
  if (table.trailer) os << "# " << *table.trailer << '\n';
}

inline void write_json(const Table& table, std::ostream& os) {
  nlohmann::ordered_json records = nlohmann::ordered_json::array();
  for (const auto& row : table.rows) {
    nlohmann::ordered_json rec = nlohmann::ordered_json::object();
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::visit(
          [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, double>) {
              if (std::isfinite(v))
                rec[table.columns[c]] = v;
              else
                rec[table.columns[c]] = nullptr;
            } else {
              rec[table.columns[c]] = v;
            }
          },
          row[c]);
    }
    records.push_back(std::move(rec));
  }
  if (table.trailer) {
    nlohmann::ordered_json doc;
    doc["rows"] = std::move(records);
    doc["status"] = *table.trailer;
    os << doc.dump(2) << '\n';
  } else {
    os << records.dump(2) << '\n';
  }
}

inline DensityMatrix2 initial_state(const std::string& name) {
  if (name == "excited") return DensityMatrix2::excited();
  if (name == "ground") return DensityMatrix2::ground();
  if (name == "plus") return DensityMatrix2::from_populations(0.5, 0.5);
  if (name == "mixed") return DensityMatrix2::from_populations(0.75, 0.25);
  throw InputError("unknown initial state '" + name + "' (expected excited, ground, plus or mixed)");
}

namespace detail {

inline Table ratio_table(const RunConfig& cfg) {
  const ModelParams p(cfg.gamma0, cfg.lambda, cfg.delta);
  QslOptions options;
  options.tau_start = cfg.tau;
  options.quad = cfg.quad();
  const BoundReport r = qsl_ratio(p, initial_state(cfg.init), cfg.tau_d, options);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Table t;
  t.columns = {"gamma0",   "lambda",  "delta",       "tau",         "tau_d",       "lambda1",
               "lambda2",  "lambda_inf", "d_measure", "tau_qsl",     "ratio",       "ratio_bures",
               "ratio_bures_trace", "stationary", "classification", "quad_err"};
  t.rows.push_back({cfg.gamma0, cfg.lambda, cfg.delta, cfg.tau, cfg.tau_d, r.lambda1, r.lambda2, r.lambda_inf,
                    r.d_measure, r.tau_qsl, r.ratio, r.comparator_ratio.value_or(nan),
                    r.comparator_ratio_trace.value_or(nan), std::int64_t{r.stationary ? 1 : 0},
                    std::string(to_string(classify(r.ratio))), r.quadrature_err});
  return t;
}

inline Table scan_table(const ScanGrid& grid) {
  Table t;
  t.columns = {"gamma0", "delta", "lambda", "tau_d", "ratio", "classification", "quad_err"};
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t i = 0; i < grid.gamma0_axis.size(); ++i) {
    for (std::size_t j = 0; j < grid.delta_axis.size(); ++j) {
      const ScanCell& cell = grid.cell(i, j);
      t.rows.push_back({grid.gamma0_axis[i], grid.delta_axis[j], grid.lambda, grid.tau_d,
                        cell.report ? cell.report->ratio : nan, std::string(to_string(cell.classification)),
                        cell.report ? cell.report->quadrature_err : nan});
    }
  }
  if (const std::size_t failed = grid.failed_cells(); failed > 0)
    t.trailer = "incomplete: failed_cells=" + std::to_string(failed) +
                "; rows with classification=error must be recomputed";
  return t;
}

inline Table boundary_table(const std::vector<BoundaryPoint>& points) {
  Table t;
  t.columns = {"delta", "gamma0_boundary", "flip_index"};
  for (const auto& b : points) t.rows.push_back({b.delta, b.gamma0, std::int64_t{b.flip_index}});
  return t;
}

inline Table series_table(const TimeSeries& s) {
  Table t;
  if (s.kind == SeriesKind::ratio_vs_tau) {
    t.columns = {"tau", "ratio"};
    for (std::size_t k = 0; k < s.times.size(); ++k) t.rows.push_back({s.times[k], s.values[k]});
  } else {
    t.columns = {"t", "gamma_over_gamma0", "clipped"};
    for (std::size_t k = 0; k < s.times.size(); ++k)
      t.rows.push_back({s.times[k], s.values[k], std::int64_t{s.clipped[k]}});
  }
  return t;
}

inline Table compare_table(const RunConfig& cfg) {
  const std::vector<double> axis = cfg.gamma0_axis();
  std::vector<BoundReport> reports(axis.size());
  QslOptions options;
  options.quad = cfg.quad();
  parallel_for(axis.size(), threads_from_env(), [&](std::size_t k) {
    reports[k] = qsl_ratio(ModelParams(axis[k], cfg.lambda, cfg.delta), DensityMatrix2::excited(), cfg.tau_d, options);
  });
  Table t;
  t.columns = {"gamma0", "ratio_trace", "ratio_bures"};
  for (std::size_t k = 0; k < axis.size(); ++k)
    t.rows.push_back({axis[k], reports[k].ratio, reports[k].comparator_ratio.value()});
  return t;
}

struct OracleCheck {
  double max_abs_error = 0.0;
  bool within_tolerance = false;
};

inline OracleCheck oracle_check(const ModelParams& p, double t_max, double step, double tolerance) {
  const SampledSeries series = oracle_amplitude(p, t_max, step);
  double worst = 0.0;
  for (std::size_t k = 0; k < series.values.size(); ++k)
    worst = std::max(worst, std::abs(series.values[k] - amplitude(p, series.time(k)).c));
  return {worst, worst < tolerance};
}

inline Table oracle_table(const RunConfig& cfg, bool& passed) {
  const ModelParams p(cfg.gamma0, cfg.lambda, cfg.delta);
  const OracleCheck check = oracle_check(p, cfg.t_max, cfg.step, cfg.tolerance);
  passed = check.within_tolerance;
  Table t;
  t.columns = {"gamma0", "lambda", "delta", "step", "t_max", "max_abs_error", "tolerance", "within_tolerance"};
  t.rows.push_back({cfg.gamma0, cfg.lambda, cfg.delta, cfg.step, cfg.t_max, check.max_abs_error, cfg.tolerance,
                    std::int64_t{passed ? 1 : 0}});
  return t;
}

inline void write_error(std::ostream& err, const std::string& subcommand, const char* kind, const std::string& msg) {
  nlohmann::ordered_json rec;
  rec["error"]["kind"] = kind;
  rec["error"]["subcommand"] = subcommand;
  rec["error"]["message"] = msg;
  err << rec.dump() << '\n';
}

}  // namespace detail

// Dispatch one subcommand. Data goes to cfg.output ("-" for `out`); error
// records go to `err` as one JSON object per line.
inline int run(const RunConfig& cfg, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  Table table;
  int status = kOk;
  try {
    const std::string& cmd = cfg.subcommand;
    if (cmd == "ratio") {
      table = detail::ratio_table(cfg);
    } else if (cmd == "scan" || cmd == "boundary") {
      ScanOptions options;
      options.quad = cfg.quad();
      const ScanGrid grid = grid_scan(cfg.gamma0_axis(), cfg.delta_axis(), cfg.lambda, cfg.tau_d, options);
      table = cmd == "scan" ? detail::scan_table(grid) : detail::boundary_table(transition_boundary(grid, options));
      if (grid.failed_cells() > 0) {
        status = kIncomplete;
        if (cmd == "boundary") table.trailer = "incomplete: failed_cells=" + std::to_string(grid.failed_cells());
      }
    } else if (cmd == "sweep-tau") {
      ScanOptions options;
      options.quad = cfg.quad();
      table = detail::series_table(
          sweep_tau(ModelParams(cfg.gamma0, cfg.lambda, cfg.delta), cfg.tau_max, cfg.points, cfg.tau_d, options));
    } else if (cmd == "decay-rate") {
      table = detail::series_table(
          sweep_decay_rate(ModelParams(cfg.gamma0, cfg.lambda, cfg.delta), cfg.t_max, cfg.points, cfg.clip));
    } else if (cmd == "compare-bounds") {
      table = detail::compare_table(cfg);
    } else if (cmd == "oracle-check") {
      bool passed = false;
      table = detail::oracle_table(cfg, passed);
      if (!passed) status = kCheckFailed;
    } else {
      throw InputError("unknown subcommand '" + cmd + "'");
    }
  } catch (const InputError& e) {
    detail::write_error(err, cfg.subcommand, "input_error", e.what());
    return kInputError;
  } catch (const ConvergenceError& e) {
    detail::write_error(err, cfg.subcommand, "convergence_error", e.what());
    return kIncomplete;
  } catch (const std::exception& e) {
    detail::write_error(err, cfg.subcommand, "internal_error", e.what());
    return kInternalError;
  }

  std::ofstream file;
  std::ostream* sink = &out;
  if (cfg.output != "-") {
    file.open(cfg.output, std::ios::binary | std::ios::trunc);
    if (!file) {
      detail::write_error(err, cfg.subcommand, "io_error", "cannot open output file '" + cfg.output + "'");
      return kIoError;
    }
    sink = &file;
  }
  if (cfg.format == OutputFormat::csv)
    write_csv(table, *sink);
  else
    write_json(table, *sink);
  sink->flush();
  if (!*sink) {
    detail::write_error(err, cfg.subcommand, "io_error", "failed writing output");
    return kIoError;
  }
  if (status == kIncomplete)
    detail::write_error(err, cfg.subcommand, "incomplete", table.trailer.value_or("some cells failed"));
  return status;
}

// Options live on the top-level app so a key=value file given with
// --config can set any of them; explicit flags override the file.
inline void configure_app(CLI::App& app, RunConfig& cfg) {
  app.set_config("--config", "", "Read key=value settings from a file (flags override)");
  app.require_subcommand(1);

  app.add_option("--gamma0", cfg.gamma0, "Coupling strength gamma0")->capture_default_str();
  app.add_option("--lambda", cfg.lambda, "Spectral width lambda")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Detuning delta")->capture_default_str();
  app.add_option("--tau-d", cfg.tau_d, "Driving time tau_D")->capture_default_str();
  app.add_option("--tau", cfg.tau, "Window start for `ratio`")->capture_default_str();
  app.add_option("--tau-max", cfg.tau_max, "Largest evolved time for `sweep-tau`")->capture_default_str();
  app.add_option("--t-max", cfg.t_max, "Time range for `decay-rate` and `oracle-check`")->capture_default_str();
  app.add_option("--points", cfg.points, "Samples in a time series")->capture_default_str();
  app.add_option("--gamma0-min", cfg.gamma0_min, "Smallest gamma0 (default 0.02 lambda)");
  app.add_option("--gamma0-max", cfg.gamma0_max, "Largest gamma0 (default 20 lambda)");
  app.add_option("--gamma0-n", cfg.gamma0_n, "Log-spaced gamma0 samples")->capture_default_str();
  app.add_option("--delta-min", cfg.delta_min, "Smallest delta (default 0)");
  app.add_option("--delta-max", cfg.delta_max, "Largest delta (default 10 lambda)");
  app.add_option("--delta-n", cfg.delta_n, "Linearly spaced delta samples")->capture_default_str();
  app.add_option("--clip", cfg.clip, "Clip for gamma(t)/gamma0 spikes")->capture_default_str();
  app.add_option("--step", cfg.step, "Oracle time step")->capture_default_str();
  app.add_option("--tolerance", cfg.tolerance, "Oracle acceptance threshold")->capture_default_str();
  app.add_option("--init", cfg.init, "Initial state: excited, ground, plus, mixed")->capture_default_str();
  app.add_option("--rel-tol", cfg.rel_tol, "Quadrature relative tolerance")->capture_default_str();
  app.add_option("--abs-tol", cfg.abs_tol, "Quadrature absolute tolerance")->capture_default_str();
  app.add_option("--max-depth", cfg.max_depth, "Quadrature bisection depth limit")->capture_default_str();
  app.add_option("-o,--output", cfg.output, "Output path, - for stdout")->capture_default_str();
  app.add_option("--format", cfg.format, "csv or json")
      ->transform(CLI::CheckedTransformer(std::map<std::string, OutputFormat>{{"csv", OutputFormat::csv},
                                                                              {"json", OutputFormat::json}}));

  const std::vector<std::pair<std::string, std::string>> help{
      {"ratio", "One bound report for (gamma0, lambda, delta, tau_d)"},
      {"scan", "Ratio surface over (gamma0, delta)"},
      {"boundary", "Speed-up transition points over (gamma0, delta)"},
      {"sweep-tau", "Evolved-state ratio versus tau"},
      {"decay-rate", "gamma(t)/gamma0 versus t"},
      {"compare-bounds", "Trace-distance and Bures-angle ratios over a gamma0 sweep"},
      {"oracle-check", "Volterra integration against the closed-form amplitude"}};
  for (const auto& [name, text] : help) {
    app.add_subcommand(name, text)->fallthrough()->callback([&cfg, name = name] { cfg.subcommand = name; });
  }
}

// Throws CLI::ParseError (including CLI::CallForHelp) on bad input.
inline RunConfig parse_command_line(int argc, const char* const* argv) {
  RunConfig cfg;
  CLI::App app{"Quantum speed limits for a detuned, damped two-level atom", "qslkit"};
  configure_app(app, cfg);
  app.parse(argc, argv);
  return cfg;
}

}  // namespace qslkit::cli
