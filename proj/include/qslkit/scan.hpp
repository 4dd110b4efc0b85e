#pragma once

// Parameter sweeps over the model: (gamma0, delta) ratio surfaces and their
// speed-up classification, transition boundaries, and time series of the
// evolved-state ratio, population and decay rate.
//
// Every cell or sample is an independent task. Work is spread over threads
// by index, and results land in preallocated slots, so the output does not
// depend on scheduling.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "qslkit/bounds.hpp"
#include "qslkit/error.hpp"
#include "qslkit/model.hpp"

namespace qslkit {

enum class Classification { speed_up, no_speed_up, failed };

inline const char* to_string(Classification c) {
  switch (c) {
    case Classification::speed_up:
      return "speed_up";
    case Classification::no_speed_up:
      return "no_speed_up";
    case Classification::failed:
      return "error";
  }
  return "error";
}

inline Classification classify(double ratio) {
  return is_speed_up(ratio) ? Classification::speed_up : Classification::no_speed_up;
}

// Thread count from QSLKIT_THREADS, else the hardware concurrency.
inline unsigned threads_from_env() {
  if (const char* env = std::getenv("QSLKIT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

template <class Body>
void parallel_for(std::size_t n, unsigned threads, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) body(i);
    });
}

struct ScanOptions {
  unsigned threads = 0;  // 0: take QSLKIT_THREADS / hardware concurrency
  QuadratureSpec quad;
  bool comparator = false;

  unsigned resolved_threads() const { return threads > 0 ? threads : threads_from_env(); }
};

struct ScanCell {
  std::optional<BoundReport> report;
  Classification classification = Classification::failed;
  std::string error;
};

struct ScanGrid {
  std::vector<double> gamma0_axis;
  std::vector<double> delta_axis;
  double lambda = ModelParams::kDefaultLambda;
  double tau_d = 0.2;
  std::vector<ScanCell> cells;  // gamma0-major: cells[i * delta_axis.size() + j]

  const ScanCell& cell(std::size_t i, std::size_t j) const { return cells[i * delta_axis.size() + j]; }
  std::size_t failed_cells() const {
    return static_cast<std::size_t>(std::count_if(cells.begin(), cells.end(), [](const ScanCell& c) {
      return c.classification == Classification::failed;
    }));
  }
};

inline std::vector<double> linear_axis(double lo, double hi, std::size_t n) {
  if (n == 0) return {};
  if (n == 1) return {lo};
  std::vector<double> axis(n);
  for (std::size_t k = 0; k < n; ++k) axis[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(n - 1);
  axis.back() = hi;
  return axis;
}

inline std::vector<double> log_axis(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0 && hi > 0.0)) throw InputError("log_axis: bounds must be positive");
  std::vector<double> axis = linear_axis(std::log(lo), std::log(hi), n);
  for (double& v : axis) v = std::exp(v);
  if (!axis.empty()) {
    axis.front() = lo;
    axis.back() = hi;
  }
  return axis;
}

inline std::vector<double> default_gamma0_axis(double lambda, std::size_t n = 41) {
  return log_axis(0.02 * lambda, 20.0 * lambda, n);
}
inline std::vector<double> default_delta_axis(double lambda, std::size_t n = 41) {
  return linear_axis(0.0, 10.0 * lambda, n);
}

namespace detail {

inline void require_increasing(const std::vector<double>& axis, const char* name) {
  if (axis.empty()) throw InputError(std::string(name) + ": axis must not be empty");
  for (std::size_t k = 0; k < axis.size(); ++k) {
    if (!std::isfinite(axis[k])) throw InputError(std::string(name) + ": axis values must be finite");
    if (k > 0 && !(axis[k] > axis[k - 1])) throw InputError(std::string(name) + ": axis must be strictly increasing");
  }
}

}  // namespace detail

// Excited-state ratio for every (gamma0, delta) cell. A cell whose
// computation throws is recorded as failed and the scan continues.
inline ScanGrid grid_scan(std::vector<double> gamma0_axis, std::vector<double> delta_axis, double lambda,
                          double tau_d, const ScanOptions& options = {}) {
  detail::require_increasing(gamma0_axis, "grid_scan gamma0");
  detail::require_increasing(delta_axis, "grid_scan delta");
  if (!(gamma0_axis.front() > 0.0)) throw InputError("grid_scan: gamma0 values must be > 0");
  if (!std::isfinite(lambda) || !(lambda > 0.0)) throw InputError("grid_scan: lambda must be > 0");
  if (!std::isfinite(tau_d) || !(tau_d > 0.0)) throw InputError("grid_scan: tau_d must be > 0");

  ScanGrid grid{std::move(gamma0_axis), std::move(delta_axis), lambda, tau_d, {}};
  const std::size_t nd = grid.delta_axis.size();
  grid.cells.resize(grid.gamma0_axis.size() * nd);
  QslOptions qsl;
  qsl.quad = options.quad;
  qsl.comparator = options.comparator;
  parallel_for(grid.cells.size(), options.resolved_threads(), [&](std::size_t k) {
    ScanCell& cell = grid.cells[k];
    try {
      const ModelParams p(grid.gamma0_axis[k / nd], lambda, grid.delta_axis[k % nd]);
      cell.report = qsl_ratio(p, DensityMatrix2::excited(), tau_d, qsl);
      cell.classification = classify(cell.report->ratio);
    } catch (const std::exception& e) {
      cell.report.reset();
      cell.classification = Classification::failed;
      cell.error = e.what();
    }
  });
  return grid;
}

struct BoundaryPoint {
  double delta = 0.0;
  double gamma0 = 0.0;  // midpoint of the final bracket
  double gamma0_lo = 0.0;
  double gamma0_hi = 0.0;
  int flip_index = 0;  // 0 for the first flip along the row, 1 for the next, ...
};

// Speed-up / no-speed-up flips along each delta row of a completed grid,
// refined by bisection on gamma0 until the bracket is below 1e-3 relative.
// Rows without a flip are omitted.
inline std::vector<BoundaryPoint> transition_boundary(const ScanGrid& grid, const ScanOptions& options = {}) {
  const std::size_t ng = grid.gamma0_axis.size();
  const std::size_t nd = grid.delta_axis.size();
  if (grid.cells.size() != ng * nd) throw InputError("transition_boundary: grid is incomplete");

  QslOptions qsl;
  qsl.quad = options.quad;
  qsl.comparator = false;
  std::vector<std::vector<BoundaryPoint>> rows(nd);
  parallel_for(nd, options.resolved_threads(), [&](std::size_t j) {
    const double delta = grid.delta_axis[j];
    int flips = 0;
    for (std::size_t i = 0; i + 1 < ng; ++i) {
      const Classification left = grid.cell(i, j).classification;
      const Classification right = grid.cell(i + 1, j).classification;
      if (left == Classification::failed || right == Classification::failed || left == right) continue;
      double lo = grid.gamma0_axis[i];
      double hi = grid.gamma0_axis[i + 1];
      while (hi - lo > 1e-3 * lo) {
        const double mid = 0.5 * (lo + hi);
        const ModelParams p(mid, grid.lambda, delta);
        const Classification c = classify(qsl_ratio(p, DensityMatrix2::excited(), grid.tau_d, qsl).ratio);
        (c == left ? lo : hi) = mid;
      }
      rows[j].push_back({delta, 0.5 * (lo + hi), lo, hi, flips++});
    }
  });
  std::vector<BoundaryPoint> out;
  for (auto& row : rows) out.insert(out.end(), row.begin(), row.end());
  return out;
}

enum class SeriesKind { ratio_vs_tau, decay_rate, population };

struct TimeSeries {
  SeriesKind kind;
  ModelParams params;
  std::vector<double> times;
  std::vector<double> values;
  std::vector<std::uint8_t> clipped;  // 1 where the value was replaced by +-clip
  std::optional<double> clip;
};

namespace detail {

inline std::vector<double> sample_times(double t_max, std::size_t n_points, const char* what) {
  if (n_points < 2) throw InputError(std::string(what) + ": n_points must be >= 2");
  if (!std::isfinite(t_max) || !(t_max > 0.0)) throw InputError(std::string(what) + ": time range must be > 0");
  return linear_axis(0.0, t_max, n_points);
}

}  // namespace detail

// Evolved-state ratio on a uniform grid tau_k in [0, tau_max].
inline TimeSeries sweep_tau(const ModelParams& p, double tau_max, std::size_t n_points, double tau_d,
                            const ScanOptions& options = {}) {
  TimeSeries series{SeriesKind::ratio_vs_tau, p, detail::sample_times(tau_max, n_points, "sweep_tau"), {}, {}, {}};
  if (!std::isfinite(tau_d) || !(tau_d > 0.0)) throw InputError("sweep_tau: tau_d must be > 0");
  series.values.resize(n_points);
  series.clipped.assign(n_points, 0);
  std::vector<std::string> errors(n_points);
  parallel_for(n_points, options.resolved_threads(), [&](std::size_t k) {
    try {
      series.values[k] = qsl_ratio_evolved(p, series.times[k], tau_d, options.quad).ratio;
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });
  for (std::size_t k = 0; k < n_points; ++k)
    if (!errors[k].empty()) throw ConvergenceError("sweep_tau at tau=" + std::to_string(series.times[k]) + ": " + errors[k], 0.0, 0.0);
  return series;
}

// gamma(t) / gamma0 on [0, t_max]. Singular points and values beyond +-clip
// are replaced by +-clip and flagged.
inline TimeSeries sweep_decay_rate(const ModelParams& p, double t_max, std::size_t n_points, double clip) {
  if (!std::isfinite(clip) || !(clip > 0.0)) throw InputError("sweep_decay_rate: clip must be > 0");
  TimeSeries series{SeriesKind::decay_rate, p, detail::sample_times(t_max, n_points, "sweep_decay_rate"), {}, {}, clip};
  series.values.resize(n_points);
  series.clipped.assign(n_points, 0);
  for (std::size_t k = 0; k < n_points; ++k) {
    const RateSample rate = decay_rate(p, series.times[k]);
    double v = rate.value / p.gamma0();
    if (rate.singular) {
      v = clip;
      series.clipped[k] = 1;
    } else if (std::abs(v) > clip) {
      v = std::copysign(clip, v);
      series.clipped[k] = 1;
    }
    series.values[k] = v;
  }
  return series;
}

inline TimeSeries sweep_population(const ModelParams& p, double t_max, std::size_t n_points) {
  TimeSeries series{SeriesKind::population, p, detail::sample_times(t_max, n_points, "sweep_population"), {}, {}, {}};
  series.values.resize(n_points);
  series.clipped.assign(n_points, 0);
  for (std::size_t k = 0; k < n_points; ++k) series.values[k] = excited_population(p, series.times[k]);
  return series;
}

}  // namespace qslkit
