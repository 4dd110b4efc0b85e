#pragma once

// Speed-limit estimators built on the trace-distance measure.
//
// For a trajectory rho_t started from rho(tau) and followed for a driving
// time tau_d, the three Lambda integrals are
//
//   L1   = (1 / tau_d)       int ||rho_t - rho_ref||_1 ||rho'_t||_1   dt
//   L2   = (sqrt(n) / tau_d) int ||rho_t - rho_ref||_1 ||rho'_t||_2   dt
//   Linf = (n / tau_d)       int ||rho_t - rho_ref||_1 ||rho'_t||_inf dt
//
// over [tau, tau + tau_d], n = 2, and the bound reads
//
//   tau_qsl / tau_d = 2 |1 - D| max{1/L1, 1/L2, 1/Linf} / tau_d.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "qslkit/error.hpp"
#include "qslkit/model.hpp"
#include "qslkit/quad.hpp"
#include "qslkit/smatrix.hpp"

namespace qslkit {

inline constexpr int kHilbertDimension = 2;
inline constexpr double kSpeedUpThreshold = 1.0 - 1e-6;

struct LambdaIntegrals {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
  double quadrature_err = 0.0;  // summed estimate, in the units of the Lambdas
};

struct BoundReport {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double lambda_inf = 0.0;
  double d_measure = 1.0;  // D(rho(tau + tau_d), rho(tau))
  double deficit = 0.0;    // 1 - D, computed without cancellation
  double tau_qsl = 0.0;
  double ratio = 1.0;
  std::optional<double> comparator_ratio;        // Bures angle, max over norms
  std::optional<double> comparator_ratio_trace;  // Bures angle, trace norm only
  double tau_d = 0.0;
  double tau_start = 0.0;
  double quadrature_err = 0.0;
  bool stationary = false;
};

struct QslOptions {
  double tau_start = 0.0;
  QuadratureSpec quad;
  // Also evaluate the Bures-angle comparator (pure states at tau_start = 0).
  bool comparator = true;
};

struct EvolvedRatio {
  double ratio = 1.0;
  bool stationary = false;
  double quadrature_err = 0.0;
};

struct BuresComparator {
  double ratio = 1.0;        // sin^2(B) / int ||rho'||_p, tightest p (operator norm)
  double ratio_trace = 1.0;  // same with the trace norm
  double angle = 0.0;        // B = arccos sqrt(F)
};

inline bool is_speed_up(double ratio) { return ratio < kSpeedUpThreshold; }

namespace detail {

inline void require_window(double tau_start, double tau_d) {
  if (!std::isfinite(tau_d) || !(tau_d > 0.0)) throw InputError("driving time tau_d must be finite and > 0");
  if (!std::isfinite(tau_start) || tau_start < 0.0) throw InputError("start time tau must be finite and >= 0");
}

inline int window_probe_count(const ModelParams& p, double width) {
  // Beats between the two modes are slower than |Im d|; the decay envelope
  // adds at most lambda worth of structure.
  return default_probe_count(std::max(oscillation_rate(p), p.lambda() / 4.0), width);
}

// Merge root lists into a sorted breakpoint list strictly inside (a, b).
inline std::vector<double> merge_breakpoints(std::vector<double> roots, double a, double b) {
  std::sort(roots.begin(), roots.end());
  const double gap = 1e-10 * (b - a);
  std::vector<double> out;
  for (double r : roots) {
    if (r <= a + gap || r >= b - gap) continue;
    if (!out.empty() && r - out.back() <= gap) continue;
    out.push_back(r);
  }
  return out;
}

// Kinks of |P_t - P_ref| and |P'_t| on the window.
inline std::vector<double> population_breakpoints(const ModelParams& p, double a, double b) {
  const int probes = window_probe_count(p, b - a);
  const double p_ref = excited_population(p, a);
  auto roots = find_sign_changes([&](double t) { return population_rate(p, t); }, a, b, probes);
  auto more = find_sign_changes([&](double t) { return excited_population(p, t) - p_ref; }, a, b, probes);
  roots.insert(roots.end(), more.begin(), more.end());
  return merge_breakpoints(std::move(roots), a, b);
}

// Largest |g| on the probe grid; the integrand is divided by it so that the
// absolute tolerance is meaningful however small the populations have become.
template <class F>
double probe_scale(F& g, double a, double b, int probes) {
  double scale = 0.0;
  for (int i = 0; i < probes; ++i) scale = std::max(scale, std::abs(g(a + (b - a) * i / (probes - 1))));
  return scale;
}

template <class F>
QuadResult integrate_scaled(F g, double a, double b, const QuadratureSpec& base, std::vector<double> breakpoints,
                            int probes) {
  const double scale = probe_scale(g, a, b, probes);
  if (scale == 0.0) return {};
  QuadratureSpec spec = base;
  spec.breakpoints = std::move(breakpoints);
  const QuadResult r = integrate([&](double t) { return g(t) / scale; }, a, b, spec);
  return {r.value * scale, r.err_estimate * scale, r.evaluations};
}

}  // namespace detail

// Lambda integrals over [tau_start, tau_start + tau_d] for the trajectory
// that starts from rho0 at t = 0; the reference state is rho(tau_start).
inline LambdaIntegrals lambda_integrals(const ModelParams& p, const DensityMatrix2& rho0, double tau_start,
                                        double tau_d, const QuadratureSpec& quad = {}) {
  detail::require_window(tau_start, tau_d);
  const double a = tau_start;
  const double b = tau_start + tau_d;
  if (rho0.excited_population() == 0.0 && rho0.coherence() == Complex(0.0)) return {};

  const int probes = detail::window_probe_count(p, tau_d);
  const std::vector<double> breaks = detail::population_breakpoints(p, a, b);

  auto integrand = [&](Schatten norm) {
    return [&p, &rho0, a, norm](double t) {
      const double moved = schatten_norm(displacement(p, rho0, t, a), Schatten::one);
      return moved * schatten_norm(liouvillian(p, rho0, t), norm);
    };
  };
  try {
    const QuadResult i1 = detail::integrate_scaled(integrand(Schatten::one), a, b, quad, breaks, probes);
    const QuadResult i2 = detail::integrate_scaled(integrand(Schatten::two), a, b, quad, breaks, probes);
    const QuadResult iinf = detail::integrate_scaled(integrand(Schatten::inf), a, b, quad, breaks, probes);
    constexpr double n = kHilbertDimension;
    const double sqrt_n = std::sqrt(n);
    return {i1.value / tau_d, sqrt_n * i2.value / tau_d, n * iinf.value / tau_d,
            (i1.err_estimate + sqrt_n * i2.err_estimate + n * iinf.err_estimate) / tau_d};
  } catch (const ConvergenceError& e) {
    throw ConvergenceError(std::string("lambda_integrals(gamma0=") + std::to_string(p.gamma0()) +
                               ", delta=" + std::to_string(p.delta()) + ", tau=" + std::to_string(tau_start) +
                               "): " + e.what(),
                           e.partial_value(), e.err_estimate());
  }
}

// Bures-angle speed limit for a pure initial state: with F = <psi0|rho|psi0>
// and B = arccos sqrt(F),
//   tau_qsl / tau_d = max_p { 1 / int ||rho'_t||_p dt } sin^2(B)
// over p in {operator, trace, Hilbert-Schmidt}. The operator norm is always
// the smallest, so it decides the maximum.
inline BuresComparator bures_comparator(const ModelParams& p, const DensityMatrix2& rho0, double tau_d,
                                        const QuadratureSpec& quad = {}) {
  detail::require_window(0.0, tau_d);
  if (std::abs(rho0.purity() - 1.0) > DensityMatrix2::kTolerance)
    throw InputError("bures_comparator: the Bures-angle bound needs a pure initial state");

  // 1 - F = -Tr(rho0 (rho_t - rho0)) for pure rho0.
  const ComplexMatrix2 moved = displacement(p, rho0, tau_d, 0.0);
  const double sin2 = std::clamp(-(rho0.matrix() * moved).trace().real(), 0.0, 1.0);
  if (sin2 == 0.0 && rho0.excited_population() == 0.0) return {1.0, 1.0, 0.0};

  const int probes = detail::window_probe_count(p, tau_d);
  std::vector<double> breaks = detail::population_breakpoints(p, 0.0, tau_d);
  auto rate = [&](Schatten norm) {
    return [&p, &rho0, norm](double t) { return schatten_norm(liouvillian(p, rho0, t), norm); };
  };
  const double op = detail::integrate_scaled(rate(Schatten::inf), 0.0, tau_d, quad, breaks, probes).value;
  const double tr = detail::integrate_scaled(rate(Schatten::one), 0.0, tau_d, quad, breaks, probes).value;
  const double hs = detail::integrate_scaled(rate(Schatten::two), 0.0, tau_d, quad, breaks, probes).value;
  const double tightest = std::min({op, tr, hs});
  if (tightest == 0.0) return {1.0, 1.0, 0.0};
  return {sin2 / tightest, sin2 / tr, std::asin(std::sqrt(sin2))};
}

inline BuresComparator bures_comparator(const ModelParams& p, double tau_d, const QuadratureSpec& quad = {}) {
  return bures_comparator(p, DensityMatrix2::excited(), tau_d, quad);
}

// Full report for the window [tau_start, tau_start + tau_d]. A trajectory
// that never moves has all Lambdas zero; it is reported as ratio 1 with the
// stationary flag set.
inline BoundReport qsl_ratio(const ModelParams& p, const DensityMatrix2& rho0, double tau_d,
                             const QslOptions& options = {}) {
  const double tau_start = options.tau_start;
  const QuadratureSpec& quad = options.quad;
  detail::require_window(tau_start, tau_d);
  BoundReport report;
  report.tau_d = tau_d;
  report.tau_start = tau_start;

  const LambdaIntegrals li = lambda_integrals(p, rho0, tau_start, tau_d, quad);
  report.lambda1 = li.l1;
  report.lambda2 = li.l2;
  report.lambda_inf = li.linf;
  report.quadrature_err = li.quadrature_err;
  report.deficit = trace_distance_deficit(displacement(p, rho0, tau_start + tau_d, tau_start));
  report.d_measure = 1.0 - report.deficit;

  const double smallest = std::min({li.l1, li.l2, li.linf});
  if (smallest == 0.0) {
    report.stationary = true;
    report.ratio = 1.0;
  } else {
    report.ratio = 2.0 * std::abs(report.deficit) / (smallest * tau_d);
  }
  report.tau_qsl = report.ratio * tau_d;

  if (options.comparator && tau_start == 0.0 && std::abs(rho0.purity() - 1.0) <= DensityMatrix2::kTolerance) {
    const BuresComparator bures = bures_comparator(p, rho0, tau_d, quad);
    report.comparator_ratio = bures.ratio;
    report.comparator_ratio_trace = bures.ratio_trace;
  }
  return report;
}

// Excited initial state, reference state taken at tau:
//   ratio = (P(tau + tau_d) - P(tau))^2 / (2 int_tau^{tau+tau_d} |(P_t - P_tau) P'_t| dt)
inline EvolvedRatio qsl_ratio_evolved(const ModelParams& p, double tau, double tau_d, const QuadratureSpec& quad = {}) {
  detail::require_window(tau, tau_d);
  const double a = tau;
  const double b = tau + tau_d;
  const double p_ref = excited_population(p, a);
  const double moved = excited_population(p, b) - p_ref;
  const int probes = detail::window_probe_count(p, tau_d);
  auto integrand = [&](double t) { return std::abs((excited_population(p, t) - p_ref) * population_rate(p, t)); };
  const QuadResult r = detail::integrate_scaled(integrand, a, b, quad, detail::population_breakpoints(p, a, b), probes);
  if (r.value == 0.0) return {1.0, true, 0.0};
  return {moved * moved / (2.0 * r.value), false, r.err_estimate};
}

}  // namespace qslkit
