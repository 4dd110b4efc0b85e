#pragma once

// Exact 2x2 complex linear algebra: singular values, Schatten norms and the
// trace-distance similarity measure used by the speed-limit estimators.
//
// Basis convention for qubit states: index 1 is the excited level |e>,
// index 0 is the ground level |g>.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <string>

#include "qslkit/error.hpp"

namespace qslkit {

using Complex = std::complex<double>;

class ComplexMatrix2 {
 public:
  using Entries = std::array<std::array<Complex, 2>, 2>;

  ComplexMatrix2() = default;

  explicit ComplexMatrix2(const Entries& e) : e_(e) {
    for (const auto& row : e_)
      for (const auto& z : row)
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
          throw InputError("ComplexMatrix2: non-finite entry");
  }

  ComplexMatrix2(Complex m00, Complex m01, Complex m10, Complex m11)
      : ComplexMatrix2(Entries{{{m00, m01}, {m10, m11}}}) {}

  static ComplexMatrix2 zero() { return {}; }
  static ComplexMatrix2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
  static ComplexMatrix2 diag(Complex m00, Complex m11) { return {m00, 0.0, 0.0, m11}; }

  const Complex& operator()(int row, int col) const { return e_[row][col]; }
  const Entries& entries() const { return e_; }

  ComplexMatrix2 adjoint() const {
    return {std::conj(e_[0][0]), std::conj(e_[1][0]), std::conj(e_[0][1]), std::conj(e_[1][1])};
  }
  Complex trace() const { return e_[0][0] + e_[1][1]; }
  Complex det() const { return e_[0][0] * e_[1][1] - e_[0][1] * e_[1][0]; }
  double frobenius_sq() const {
    double s = 0.0;
    for (const auto& row : e_)
      for (const auto& z : row) s += std::norm(z);
    return s;
  }
  double max_abs() const {
    double m = 0.0;
    for (const auto& row : e_)
      for (const auto& z : row) m = std::max(m, std::abs(z));
    return m;
  }

  friend ComplexMatrix2 operator+(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    return {a(0, 0) + b(0, 0), a(0, 1) + b(0, 1), a(1, 0) + b(1, 0), a(1, 1) + b(1, 1)};
  }
  friend ComplexMatrix2 operator-(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    return {a(0, 0) - b(0, 0), a(0, 1) - b(0, 1), a(1, 0) - b(1, 0), a(1, 1) - b(1, 1)};
  }
  friend ComplexMatrix2 operator-(const ComplexMatrix2& a) { return ComplexMatrix2{} - a; }
  friend ComplexMatrix2 operator*(Complex s, const ComplexMatrix2& a) {
    return {s * a(0, 0), s * a(0, 1), s * a(1, 0), s * a(1, 1)};
  }
  friend ComplexMatrix2 operator*(const ComplexMatrix2& a, const ComplexMatrix2& b) {
    return {a(0, 0) * b(0, 0) + a(0, 1) * b(1, 0), a(0, 0) * b(0, 1) + a(0, 1) * b(1, 1),
            a(1, 0) * b(0, 0) + a(1, 1) * b(1, 0), a(1, 0) * b(0, 1) + a(1, 1) * b(1, 1)};
  }
  friend bool operator==(const ComplexMatrix2&, const ComplexMatrix2&) = default;

 private:
  Entries e_{};
};

// Hermitian, unit-trace, positive semidefinite 2x2 matrix.
class DensityMatrix2 {
 public:
  static constexpr double kTolerance = 1e-12;

  explicit DensityMatrix2(const ComplexMatrix2& m) : m_(m) {
    const double herm = std::max({std::abs(m(0, 1) - std::conj(m(1, 0))), std::abs(m(0, 0).imag()),
                                  std::abs(m(1, 1).imag())});
    if (herm > kTolerance) throw InputError("DensityMatrix2: matrix is not Hermitian");
    if (std::abs(m.trace() - 1.0) > kTolerance) throw InputError("DensityMatrix2: trace differs from 1");
    if (min_eigenvalue() < -kTolerance) throw InputError("DensityMatrix2: negative eigenvalue");
  }

  static DensityMatrix2 excited() { return DensityMatrix2(ComplexMatrix2::diag(0.0, 1.0)); }
  static DensityMatrix2 ground() { return DensityMatrix2(ComplexMatrix2::diag(1.0, 0.0)); }

  // diag(1 - p, p) in (ground, excited) order.
  static DensityMatrix2 diagonal(double excited_population) {
    return DensityMatrix2(ComplexMatrix2::diag(1.0 - excited_population, excited_population));
  }

  // Build from the excited population and the coherence <e|rho|g>.
  static DensityMatrix2 from_populations(double excited_population, Complex coherence) {
    return DensityMatrix2(ComplexMatrix2(1.0 - excited_population, std::conj(coherence), coherence,
                                         excited_population));
  }

  const ComplexMatrix2& matrix() const { return m_; }
  const Complex& operator()(int row, int col) const { return m_(row, col); }

  double excited_population() const { return m_(1, 1).real(); }
  Complex coherence() const { return m_(1, 0); }

  double purity() const { return m_.frobenius_sq(); }

  double min_eigenvalue() const {
    const double a = m_(0, 0).real();
    const double c = m_(1, 1).real();
    return 0.5 * (a + c) - std::hypot(0.5 * (a - c), std::abs(m_(1, 0)));
  }

 private:
  ComplexMatrix2 m_;
};

struct SingularValues {
  double s1 = 0.0;  // largest
  double s2 = 0.0;
};

// Closed form: square roots of the eigenvalues of M^dagger M. The matrix is
// rescaled by its largest entry first so tiny differences of nearly equal
// states do not underflow.
inline SingularValues singular_values(const ComplexMatrix2& m) {
  const double scale = m.max_abs();
  if (!std::isfinite(scale)) throw InputError("singular_values: non-finite entry");
  if (scale == 0.0) return {};
  const ComplexMatrix2 u = Complex(1.0 / scale) * m;
  const ComplexMatrix2 g = u.adjoint() * u;
  const double a = g(0, 0).real();
  const double c = g(1, 1).real();
  const double top = 0.5 * (a + c) + std::hypot(0.5 * (a - c), std::abs(g(0, 1)));
  const double s1 = std::sqrt(top);
  // s1 * s2 = |det|; avoids the cancellation in the smaller root.
  const double s2 = s1 > 0.0 ? std::min(s1, std::abs(u.det()) / s1) : 0.0;
  return {scale * s1, scale * s2};
}

enum class Schatten { one, two, inf };

inline double schatten_norm(const ComplexMatrix2& m, Schatten p) {
  const auto [s1, s2] = singular_values(m);
  switch (p) {
    case Schatten::one:
      return s1 + s2;
    case Schatten::two:
      return std::hypot(s1, s2);
    case Schatten::inf:
      return s1;
  }
  throw InputError("schatten_norm: unsupported order");
}

// Numeric order; only 1, 2 and +infinity are supported.
inline double schatten_norm(const ComplexMatrix2& m, double p) {
  if (p == 1.0) return schatten_norm(m, Schatten::one);
  if (p == 2.0) return schatten_norm(m, Schatten::two);
  if (p == std::numeric_limits<double>::infinity()) return schatten_norm(m, Schatten::inf);
  throw InputError("schatten_norm: unsupported order p=" + std::to_string(p) + " (expected 1, 2 or inf)");
}

// 1 - D = ||diff||_1^2 / 4 evaluated directly from a state difference. Kept
// separate from the measure itself because 1 - D underflows to zero long
// before the difference does.
inline double trace_distance_deficit(const ComplexMatrix2& difference) {
  const double n1 = schatten_norm(difference, Schatten::one);
  return 0.25 * n1 * n1;
}

inline double trace_distance_deficit(const DensityMatrix2& a, const DensityMatrix2& b) {
  return trace_distance_deficit(a.matrix() - b.matrix());
}

// D(a, b) = 1 - ||a - b||_1^2 / 4; equals 1 for identical states and 0 for
// orthogonal pure states.
inline double trace_distance_measure(const DensityMatrix2& a, const DensityMatrix2& b) {
  return 1.0 - trace_distance_deficit(a, b);
}

}  // namespace qslkit
