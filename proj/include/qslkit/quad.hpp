#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature with user breakpoints,
// and a probe-and-bisect sign-change locator used to find those breakpoints.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "qslkit/error.hpp"

namespace qslkit {

struct QuadratureSpec {
  double rel_tol = 1e-9;
  double abs_tol = 1e-12;
  int max_depth = 40;
  // Interior points where the integrand is not smooth; sorted, strictly
  // inside the integration interval.
  std::vector<double> breakpoints;
};

struct QuadResult {
  double value = 0.0;
  double err_estimate = 0.0;
  std::size_t evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};

inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

// Gauss weights for the odd Kronrod nodes (1, 3, 5, 7).
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double err = 0.0;
  int depth = 0;
};

struct PanelByError {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err != y.err) return x.err < y.err;
    return x.a > y.a;  // deterministic tie-break
  }
};

// One 15-point Kronrod panel with the QUADPACK error heuristic.
template <class F>
Panel gauss_kronrod_15(F& f, double a, double b, int depth) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  std::array<double, 15> fv{};
  fv[7] = f(center);
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    fv[i] = f(center - dx);
    fv[14 - i] = f(center + dx);
  }

  double kronrod = kKronrodWeights[7] * fv[7];
  double gauss = kGaussWeights[3] * fv[7];
  double abs_sum = std::abs(kronrod);
  for (int i = 0; i < 7; ++i) {
    const double pair = fv[i] + fv[14 - i];
    kronrod += kKronrodWeights[i] * pair;
    abs_sum += kKronrodWeights[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
    if (i % 2 == 1) gauss += kGaussWeights[i / 2] * pair;
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(fv[7] - mean);
  for (int i = 0; i < 7; ++i)
    asc += kKronrodWeights[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

  const double value = kronrod * half;
  asc *= std::abs(half);
  abs_sum *= std::abs(half);
  double err = std::abs((kronrod - gauss) * half);
  if (asc != 0.0 && err != 0.0) err = asc * std::min(1.0, std::pow(200.0 * err / asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (abs_sum > std::numeric_limits<double>::min() / (50.0 * eps)) err = std::max(50.0 * eps * abs_sum, err);
  if (!std::isfinite(value)) throw InputError("integrate: integrand returned a non-finite value");
  return {a, b, value, err, depth};
}

}  // namespace detail

// Integrate f over [a, b]. The interval is pre-split at spec.breakpoints and
// the panel with the largest error estimate is bisected until the summed
// estimate meets max(rel_tol * |value|, abs_tol).
template <class F>
QuadResult integrate(F&& f, double a, double b, const QuadratureSpec& spec = {}) {
  if (!(std::isfinite(a) && std::isfinite(b)) || a > b) throw InputError("integrate: require finite a <= b");
  if (!(spec.rel_tol > 0.0)) throw InputError("integrate: rel_tol must be positive");
  if (spec.abs_tol < 0.0) throw InputError("integrate: abs_tol must be non-negative");
  double prev = a;
  for (double bp : spec.breakpoints) {
    if (!(bp > prev && bp < b)) throw InputError("integrate: breakpoints must be sorted and strictly inside (a, b)");
    prev = bp;
  }
  if (a == b) return {};

  std::vector<detail::Panel> heap;
  const detail::PanelByError order;
  std::size_t evaluations = 0;
  double left = a;
  for (std::size_t i = 0; i <= spec.breakpoints.size(); ++i) {
    const double right = i < spec.breakpoints.size() ? spec.breakpoints[i] : b;
    heap.push_back(detail::gauss_kronrod_15(f, left, right, 0));
    std::push_heap(heap.begin(), heap.end(), order);
    evaluations += 15;
    left = right;
  }

  constexpr std::size_t kMaxPanels = std::size_t{1} << 16;
  for (;;) {
    // Re-summed every round so the accepted totals carry no update drift.
    double value = 0.0;
    double err = 0.0;
    for (const auto& panel : heap) {
      value += panel.value;
      err += panel.err;
    }
    if (err <= std::max(spec.rel_tol * std::abs(value), spec.abs_tol)) return {value, err, evaluations};

    std::pop_heap(heap.begin(), heap.end(), order);
    const detail::Panel worst = heap.back();
    if (worst.depth >= spec.max_depth || heap.size() >= kMaxPanels)
      throw ConvergenceError("integrate: maximum subdivision depth reached on [" + std::to_string(worst.a) + ", " +
                                 std::to_string(worst.b) + "]",
                             value, err);
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    heap.push_back(detail::gauss_kronrod_15(f, worst.a, mid, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), order);
    heap.push_back(detail::gauss_kronrod_15(f, mid, worst.b, worst.depth + 1));
    std::push_heap(heap.begin(), heap.end(), order);
    evaluations += 30;
  }
}

// Probe count giving `per_period` samples per expected oscillation period of
// angular rate `angular_rate` over a window of length `width`.
inline int default_probe_count(double angular_rate, double width, int per_period = 64) {
  const double periods = std::abs(angular_rate) * width / (2.0 * std::numbers::pi);
  return std::max(per_period, static_cast<int>(std::ceil(per_period * periods)));
}

// Roots of f on [a, b] found by probing n_probe uniform points and bisecting
// each bracketed sign change to a width of 1e-12 * (b - a). Pairs of roots
// closer than the probe spacing can be missed.
template <class F>
std::vector<double> find_sign_changes(F&& f, double a, double b, int n_probe) {
  if (n_probe < 2) throw InputError("find_sign_changes: n_probe must be at least 2");
  if (!(a < b)) return {};
  std::vector<double> roots;
  const double step = (b - a) / (n_probe - 1);
  const double width = 1e-12 * (b - a);
  double x0 = a;
  double f0 = f(x0);
  for (int i = 1; i < n_probe; ++i) {
    const double x1 = i + 1 == n_probe ? b : a + i * step;
    const double f1 = f(x1);
    if (f1 == 0.0 && i + 1 < n_probe) {
      roots.push_back(x1);
    } else if ((f0 < 0.0 && f1 > 0.0) || (f0 > 0.0 && f1 < 0.0)) {
      double lo = x0, hi = x1, flo = f0;
      while (hi - lo > width) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = f(mid);
        if (fm == 0.0) {
          lo = hi = mid;
          break;
        }
        if ((fm < 0.0) == (flo < 0.0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

}  // namespace qslkit
