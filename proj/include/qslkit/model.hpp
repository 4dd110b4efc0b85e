#pragma once

// Exactly solvable spontaneous decay of a two-level atom into a zero
// temperature Lorentzian reservoir whose centre is detuned from the atomic
// transition. Everything here is closed form; the amplitude C(t) obeys
//
//   C'' + (lambda - i delta) C' + (gamma0 lambda / 2) C = 0,  C(0) = 1, C'(0) = 0,
//
// the local form of the convolution equation with the exponential memory
// kernel below. Units: hbar = 1, rates share one unit, times its inverse.

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <string>

#include "qslkit/error.hpp"
#include "qslkit/smatrix.hpp"

namespace qslkit {

class ModelParams {
 public:
  static constexpr double kDefaultLambda = 50.0;

  ModelParams(double gamma0, double lambda, double delta = 0.0, double omega0 = 0.0)
      : gamma0_(gamma0), lambda_(lambda), delta_(delta), omega0_(omega0) {
    if (!std::isfinite(gamma0) || !(gamma0 > 0.0)) throw InputError("ModelParams: gamma0 must be finite and > 0");
    if (!std::isfinite(lambda) || !(lambda > 0.0)) throw InputError("ModelParams: lambda must be finite and > 0");
    if (!std::isfinite(delta)) throw InputError("ModelParams: delta must be finite");
    if (!std::isfinite(omega0)) throw InputError("ModelParams: omega0 must be finite");
  }

  double gamma0() const { return gamma0_; }
  double lambda() const { return lambda_; }
  double delta() const { return delta_; }
  // Only enters the spectral density centre; C(t) is independent of it.
  double omega0() const { return omega0_; }

  bool weak_coupling() const { return gamma0_ < 0.5 * lambda_; }

  // lambda - i delta
  Complex damping() const { return {lambda_, -delta_}; }

  // Principal square root of (lambda - i delta)^2 - 2 gamma0 lambda.
  Complex root() const {
    const Complex a = damping();
    return std::sqrt(a * a - 2.0 * gamma0_ * lambda_);
  }

  // Same parameters with every rate multiplied by s.
  ModelParams scaled(double s) const { return {s * gamma0_, s * lambda_, s * delta_, s * omega0_}; }

 private:
  double gamma0_;
  double lambda_;
  double delta_;
  double omega0_;
};

struct Amplitude {
  double t = 0.0;
  Complex c{1.0, 0.0};
  Complex cdot{0.0, 0.0};
};

// A rate that is undefined at a zero of C(t).
struct RateSample {
  double value = 0.0;
  bool singular = false;
  // Location of the zero of C, bracketed by bisection, when singular.
  std::optional<double> zero_time;
};

namespace detail {

inline void require_time(double t, const char* what) {
  if (!std::isfinite(t) || t < 0.0) throw InputError(std::string(what) + ": time must be finite and >= 0");
}

// sinh(z) / z, continuous through z = 0.
inline Complex sinhc(Complex z) {
  if (std::abs(z) >= 0.5) return std::sinh(z) / z;
  const Complex z2 = z * z;
  Complex term = 1.0;
  Complex sum = 1.0;
  for (int k = 1; k < 12; ++k) {
    term *= z2 / static_cast<double>((2 * k) * (2 * k + 1));
    sum += term;
  }
  return sum;
}

// Growth rate of the dominant mode; |C(t)| scales like exp(rate * t).
inline double envelope_rate(const ModelParams& p, Complex d) {
  const Complex a = p.damping();
  return 0.5 * std::max((-a + d).real(), (-a - d).real());
}

// Closed form of C and C' with an explicitly supplied root d (either sign).
inline Amplitude amplitude_with_root(const ModelParams& p, double t, Complex d) {
  const Complex a = p.damping();
  const double k = 0.5 * p.gamma0() * p.lambda();
  const Complex x = 0.5 * d * t;
  if (std::abs(x) < 0.5) {
    const Complex e = std::exp(-0.5 * a * t);
    const Complex s = sinhc(x);
    return {t, e * (std::cosh(x) + 0.5 * a * t * s), -k * t * e * s};
  }
  const Complex ep = std::exp(0.5 * (-a + d) * t);
  const Complex em = std::exp(0.5 * (-a - d) * t);
  return {t, ((d + a) * ep + (d - a) * em) / (2.0 * d), -(k / d) * (ep - em)};
}

// C'/C and |C| divided by the dominant-mode envelope, both free of the
// exponential decay so they stay finite at any t.
struct LogDerivative {
  Complex ratio;
  Complex scaled_c;
};

inline LogDerivative log_derivative(const ModelParams& p, double t) {
  const Complex a = p.damping();
  const Complex d = p.root();
  const double k = 0.5 * p.gamma0() * p.lambda();
  const Complex x = 0.5 * d * t;
  const double env = envelope_rate(p, d);
  if (std::abs(x) < 0.5) {
    const Complex s = sinhc(x);
    const Complex bracket = std::cosh(x) + 0.5 * a * t * s;
    // exp(-a t / 2) over the envelope has unit modulus up to exp(O(|x|)).
    const Complex phase = std::exp(Complex(-0.5 * a.real() * t - env * t, -0.5 * a.imag() * t));
    return {-k * t * s / bracket, bracket * phase};
  }
  // Factor out the mode with the larger real part.
  const bool plus_dominant = (-a + d).real() >= (-a - d).real();
  const Complex dom = plus_dominant ? d : -d;
  const Complex q = std::exp(-dom * t);  // |q| <= 1
  const Complex num = plus_dominant ? Complex(1.0) - q : q - Complex(1.0);
  const Complex den = plus_dominant ? (d + a) + (d - a) * q : (d + a) * q + (d - a);
  const Complex phase = std::exp(Complex(0.0, (0.5 * (-a + dom) * t).imag()));
  return {-2.0 * k * num / den, den / (2.0 * d) * phase};
}

}  // namespace detail

// J(omega) = (1/2) gamma0 lambda^2 / ((omega0 - delta - omega)^2 + lambda^2)
inline double spectral_density(const ModelParams& p, double omega) {
  if (!std::isfinite(omega)) throw InputError("spectral_density: omega must be finite");
  const double offset = p.omega0() - p.delta() - omega;
  return 0.5 * p.gamma0() * p.lambda() * p.lambda() / (offset * offset + p.lambda() * p.lambda());
}

// f(tau) = (1/2) gamma0 lambda exp(-(lambda - i delta) tau)
inline Complex memory_kernel(const ModelParams& p, double tau) {
  if (!std::isfinite(tau) || tau < 0.0) throw InputError("memory_kernel: lag must be finite and >= 0");
  return 0.5 * p.gamma0() * p.lambda() * std::exp(-p.damping() * tau);
}

inline Amplitude amplitude(const ModelParams& p, double t) {
  detail::require_time(t, "amplitude");
  return detail::amplitude_with_root(p, t, p.root());
}

inline double excited_population(const ModelParams& p, double t) { return std::norm(amplitude(p, t).c); }

// dP/dt = 2 Re(conj(C) C'); positive values mean energy flowing back from
// the reservoir into the atom.
inline double population_rate(const ModelParams& p, double t) {
  const Amplitude amp = amplitude(p, t);
  return 2.0 * (std::conj(amp.c) * amp.cdot).real();
}

// Angular frequency of the population oscillation, |Im d|.
inline double oscillation_rate(const ModelParams& p) { return std::abs(p.root().imag()); }

namespace detail {

inline constexpr double kSingularAmplitude = 1e-12;

// Bisection for the zero of C near t on whichever component of the
// envelope-scaled amplitude changes sign in a small window.
inline std::optional<double> bracket_amplitude_zero(const ModelParams& p, double t) {
  const double scale = std::max({p.lambda(), std::abs(p.root()), std::abs(p.delta())});
  const double half_window = 1e-3 / scale;
  const double lo0 = std::max(0.0, t - half_window);
  const double hi0 = t + half_window;
  for (int component = 0; component < 2; ++component) {
    auto g = [&](double s) {
      const Complex c = log_derivative(p, s).scaled_c;
      return component == 0 ? c.real() : c.imag();
    };
    double lo = lo0, hi = hi0;
    double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0) return lo;
    if (ghi == 0.0) return hi;
    if ((glo < 0.0) == (ghi < 0.0)) continue;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (gm == 0.0) return mid;
      if ((gm < 0.0) == (glo < 0.0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  }
  return std::nullopt;
}

inline RateSample rate_component(const ModelParams& p, double t, bool imaginary_part) {
  const LogDerivative ld = log_derivative(p, t);
  if (std::abs(ld.scaled_c) < kSingularAmplitude || !std::isfinite(std::abs(ld.ratio))) {
    return {0.0, true, bracket_amplitude_zero(p, t)};
  }
  return {-2.0 * (imaginary_part ? ld.ratio.imag() : ld.ratio.real()), false, std::nullopt};
}

}  // namespace detail

// gamma(t) = -2 Re(C'/C). Near a zero of C (|C| below 1e-12 of its decay
// envelope) a singular marker is returned instead of a number.
inline RateSample decay_rate(const ModelParams& p, double t) {
  detail::require_time(t, "decay_rate");
  return detail::rate_component(p, t, false);
}

// S(t) = -2 Im(C'/C), with the same singularity handling as decay_rate.
inline RateSample lamb_shift(const ModelParams& p, double t) {
  detail::require_time(t, "lamb_shift");
  return detail::rate_component(p, t, true);
}

// Long-time Markovian decay rate gamma0 lambda^2 / (lambda^2 + delta^2).
inline double markov_limit(const ModelParams& p) {
  const double l2 = p.lambda() * p.lambda();
  return p.gamma0() * l2 / (l2 + p.delta() * p.delta());
}

// rho_ee(t) = rho_ee(0) |C|^2, rho_eg(t) = rho_eg(0) C, rho_gg = 1 - rho_ee.
inline DensityMatrix2 evolve(const ModelParams& p, const DensityMatrix2& rho0, double t) {
  detail::require_time(t, "evolve");
  const Amplitude amp = amplitude(p, t);
  return DensityMatrix2::from_populations(rho0.excited_population() * std::norm(amp.c), rho0.coherence() * amp.c);
}

// rho(t) - rho(t_ref), assembled entrywise so it is exactly traceless even
// when both states are within rounding of each other.
inline ComplexMatrix2 displacement(const ModelParams& p, const DensityMatrix2& rho0, double t, double t_ref) {
  detail::require_time(t, "displacement");
  detail::require_time(t_ref, "displacement");
  const Amplitude at = amplitude(p, t);
  const Amplitude ar = amplitude(p, t_ref);
  const double dee = rho0.excited_population() * (std::norm(at.c) - std::norm(ar.c));
  const Complex deg = rho0.coherence() * (at.c - ar.c);
  return {-dee, std::conj(deg), deg, dee};
}

// d rho / dt by entrywise differentiation of the reduced state; finite even
// where gamma(t) diverges.
inline ComplexMatrix2 liouvillian(const ModelParams& p, const DensityMatrix2& rho0, double t) {
  detail::require_time(t, "liouvillian");
  const Amplitude amp = amplitude(p, t);
  const double dee = rho0.excited_population() * 2.0 * (std::conj(amp.c) * amp.cdot).real();
  const Complex deg = rho0.coherence() * amp.cdot;
  return {-dee, std::conj(deg), deg, dee};
}

}  // namespace qslkit
