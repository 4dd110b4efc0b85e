#pragma once

// Independent numerical route to C(t): time stepping of the integro-
// differential equation
//
//   C'(t) = -int_0^t f(t - s) C(s) ds,   C(0) = 1,
//
// with f the model's memory kernel. The history integral uses fourth-order
// end-corrected trapezoid weights on a uniform grid, and the time step is
// the implicit three-step Adams-Moulton formula (also fourth order). The
// first three steps come from a Taylor series whose coefficients follow
// from differentiating the integral equation at t = 0.

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "qslkit/error.hpp"
#include "qslkit/model.hpp"

namespace qslkit {

struct SampledSeries {
  double step = 0.0;
  std::vector<Complex> values;  // values[k] at t = k * step

  double time(std::size_t k) const { return static_cast<double>(k) * step; }
};

namespace detail {

// Weight of node j in an n-interval closed rule of fourth order or better.
inline double history_weight(std::size_t n, std::size_t j) {
  switch (n) {
    case 1:
      return 0.5;
    case 2: {
      static constexpr std::array<double, 3> w{1.0 / 3.0, 4.0 / 3.0, 1.0 / 3.0};
      return w[j];
    }
    case 3: {
      static constexpr std::array<double, 4> w{3.0 / 8.0, 9.0 / 8.0, 9.0 / 8.0, 3.0 / 8.0};
      return w[j];
    }
    case 4: {
      static constexpr std::array<double, 5> w{14.0 / 45.0, 64.0 / 45.0, 24.0 / 45.0, 64.0 / 45.0, 14.0 / 45.0};
      return w[j];
    }
    default:
      break;
  }
  static constexpr std::array<double, 3> end{3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  if (j < 3) return end[j];
  if (n - j < 3) return end[n - j];
  return 1.0;
}

}  // namespace detail

inline constexpr double kMaxOracleStep = 0.1;  // in units of 1 / lambda

// C on the grid t_k = k * step, k = 0 .. floor(t_max / step).
inline SampledSeries oracle_amplitude(const ModelParams& p, double t_max, double step) {
  if (!std::isfinite(step) || !(step > 0.0)) throw InputError("oracle_amplitude: step must be > 0");
  if (!std::isfinite(t_max) || t_max < step) throw InputError("oracle_amplitude: t_max must be >= step");
  if (p.lambda() * step > kMaxOracleStep)
    throw InputError("oracle_amplitude: step too large (lambda * step = " + std::to_string(p.lambda() * step) +
                     " > 0.1); reduce the step to at most " + std::to_string(kMaxOracleStep / p.lambda()));

  const auto n_steps = static_cast<std::size_t>(std::floor(t_max / step * (1.0 + 1e-12)));
  const double h = step;

  std::vector<Complex> kernel(n_steps + 1);
  for (std::size_t m = 0; m <= n_steps; ++m) kernel[m] = memory_kernel(p, static_cast<double>(m) * h);

  std::vector<Complex> c(n_steps + 1);
  std::vector<Complex> force(n_steps + 1);  // C'(t_k) from the history integral
  c[0] = 1.0;
  force[0] = 0.0;

  auto history = [&](std::size_t n, std::size_t upto) {
    Complex acc = 0.0;
    for (std::size_t j = 0; j <= upto; ++j) acc += detail::history_weight(n, j) * kernel[n - j] * c[j];
    return -h * acc;
  };

  // Taylor start: C^(k+1)(0) = -sum_{m<k} f^(m)(0) C^(k-1-m)(0), with
  // f^(m)(0) = f(0) (-(lambda - i delta))^m.
  constexpr int kOrder = 14;
  std::array<Complex, kOrder + 1> deriv{};
  std::array<Complex, kOrder> kernel_deriv{};
  kernel_deriv[0] = memory_kernel(p, 0.0);
  for (int m = 1; m < kOrder; ++m) kernel_deriv[m] = -p.damping() * kernel_deriv[m - 1];
  deriv[0] = 1.0;
  deriv[1] = 0.0;
  for (int k = 1; k < kOrder; ++k) {
    Complex acc = 0.0;
    for (int m = 0; m < k; ++m) acc += kernel_deriv[m] * deriv[k - 1 - m];
    deriv[k + 1] = -acc;
  }
  const std::size_t n_start = std::min<std::size_t>(3, n_steps);
  for (std::size_t n = 1; n <= n_start; ++n) {
    const double t = static_cast<double>(n) * h;
    Complex sum = 0.0;
    double power = 1.0;
    double factorial = 1.0;
    for (int k = 0; k <= kOrder; ++k) {
      if (k > 0) {
        power *= t;
        factorial *= k;
      }
      sum += deriv[k] * (power / factorial);
    }
    c[n] = sum;
  }
  for (std::size_t n = 1; n <= n_start; ++n) force[n] = history(n, n);

  for (std::size_t n = 3; n < n_steps; ++n) {
    const std::size_t next = n + 1;
    const Complex known = history(next, n);
    const Complex implicit = -h * detail::history_weight(next, next) * kernel[0];
    const Complex rhs = c[n] + (h / 24.0) * (9.0 * known + 19.0 * force[n] - 5.0 * force[n - 1] + force[n - 2]);
    c[next] = rhs / (1.0 - (9.0 * h / 24.0) * implicit);
    force[next] = known + implicit * c[next];
  }
  return {h, std::move(c)};
}

}  // namespace qslkit
