#include <cmath>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "qslkit/smatrix.hpp"

using namespace qslkit;

namespace {

ComplexMatrix2 random_matrix(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  return {Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng)), Complex(g(rng), g(rng))};
}

// Unitary exp(i a) [[cos b, -e^{-ic} sin b], [e^{ic} sin b, cos b]]
ComplexMatrix2 unitary(double a, double b, double c) {
  const Complex ph = std::polar(1.0, a);
  const Complex e = std::polar(1.0, c);
  return ph * ComplexMatrix2(std::cos(b), -std::conj(e) * std::sin(b), e * std::sin(b), std::cos(b));
}

}  // namespace

TEST(ComplexMatrix2, RejectsNonFiniteEntries) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(ComplexMatrix2(nan, 0.0, 0.0, 1.0), InputError);
  EXPECT_THROW(ComplexMatrix2(0.0, Complex(0.0, INFINITY), 0.0, 1.0), InputError);
}

TEST(ComplexMatrix2, AlgebraMatchesHandExpansion) {
  const ComplexMatrix2 a(Complex(1, 2), Complex(0, -1), Complex(3, 0), Complex(-2, 1));
  const ComplexMatrix2 b(Complex(0, 1), Complex(2, 0), Complex(1, 1), Complex(0, 0));
  const ComplexMatrix2 ab = a * b;
  EXPECT_EQ(ab(0, 0), Complex(1, 2) * Complex(0, 1) + Complex(0, -1) * Complex(1, 1));
  EXPECT_EQ(ab(1, 1), Complex(3, 0) * Complex(2, 0));
  EXPECT_EQ(a.trace(), Complex(-1, 3));
  EXPECT_EQ(a.det(), Complex(1, 2) * Complex(-2, 1) - Complex(0, -1) * Complex(3, 0));
  EXPECT_EQ(a.adjoint()(0, 1), std::conj(a(1, 0)));
  EXPECT_EQ(a - a, ComplexMatrix2::zero());
  EXPECT_EQ(ComplexMatrix2::identity() * a, a);
}

TEST(DensityMatrix2, ValidatesPhysicality) {
  EXPECT_NO_THROW(DensityMatrix2::excited());
  EXPECT_NO_THROW(DensityMatrix2::from_populations(0.5, 0.5));
  EXPECT_THROW(DensityMatrix2::from_populations(0.5, 0.6), InputError);  // negative eigenvalue
  EXPECT_THROW(DensityMatrix2::diagonal(1.5), InputError);
  EXPECT_THROW(DensityMatrix2(ComplexMatrix2(0.5, 0.1, 0.2, 0.5)), InputError);  // not Hermitian
  EXPECT_THROW(DensityMatrix2(ComplexMatrix2(0.6, 0.0, 0.0, 0.6)), InputError);  // trace
}

TEST(DensityMatrix2, Accessors) {
  const auto rho = DensityMatrix2::from_populations(0.3, Complex(0.1, -0.2));
  EXPECT_DOUBLE_EQ(rho.excited_population(), 0.3);
  EXPECT_EQ(rho.coherence(), Complex(0.1, -0.2));
  EXPECT_NEAR(rho.purity(), 0.3 * 0.3 + 0.7 * 0.7 + 2 * 0.05, 1e-15);
  EXPECT_NEAR(DensityMatrix2::from_populations(0.5, 0.5).purity(), 1.0, 1e-15);
  EXPECT_NEAR(DensityMatrix2::from_populations(0.5, 0.5).min_eigenvalue(), 0.0, 1e-15);
}

TEST(SingularValues, DiagonalMatrix) {
  const auto sv = singular_values(ComplexMatrix2::diag(Complex(0, -3), 2.0));
  EXPECT_DOUBLE_EQ(sv.s1, 3.0);
  EXPECT_DOUBLE_EQ(sv.s2, 2.0);
}

TEST(SingularValues, InvariantsOfRandomMatrices) {
  // s1^2 + s2^2 = ||M||_F^2 and s1 s2 = |det M| fix both values.
  std::mt19937_64 rng(7);
  for (int k = 0; k < 500; ++k) {
    const double scale = std::pow(10.0, -40.0 + 0.16 * k);
    const ComplexMatrix2 m = random_matrix(rng, scale);
    const auto [s1, s2] = singular_values(m);
    const double f = m.frobenius_sq();
    EXPECT_GE(s1, s2);
    EXPECT_NEAR((s1 * s1 + s2 * s2) / f, 1.0, 1e-13);
    EXPECT_NEAR(s1 * s2 / std::sqrt(f), std::abs(m.det()) / std::sqrt(f), 1e-13 * std::sqrt(f));
  }
}

TEST(SingularValues, UnitaryInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> angle(0.0, 6.283185307179586);
  for (int k = 0; k < 200; ++k) {
    const ComplexMatrix2 m = random_matrix(rng);
    const ComplexMatrix2 u = unitary(angle(rng), angle(rng), angle(rng));
    const ComplexMatrix2 v = unitary(angle(rng), angle(rng), angle(rng));
    for (auto p : {Schatten::one, Schatten::two, Schatten::inf})
      EXPECT_NEAR(schatten_norm(u * m * v, p), schatten_norm(m, p), 1e-12 * schatten_norm(m, Schatten::one));
  }
}

TEST(SingularValues, TracelessHermitianHasDegenerateSpectrum) {
  // [[-x, y*], [y, x]] has eigenvalues +-sqrt(x^2 + |y|^2).
  const double x = 0.3;
  const Complex y(0.4, -1.2);
  const ComplexMatrix2 m(-x, std::conj(y), y, x);
  const double r = std::sqrt(x * x + std::norm(y));
  EXPECT_NEAR(schatten_norm(m, Schatten::one), 2 * r, 1e-15);
  EXPECT_NEAR(schatten_norm(m, Schatten::two), std::sqrt(2.0) * r, 1e-15);
  EXPECT_NEAR(schatten_norm(m, Schatten::inf), r, 1e-15);
}

TEST(SchattenNorm, OrderingAndEquivalence) {
  // ||M||_inf <= ||M||_2 <= ||M||_1 <= sqrt(2) ||M||_2 <= 2 ||M||_inf
  std::mt19937_64 rng(3);
  for (int k = 0; k < 300; ++k) {
    const ComplexMatrix2 m = random_matrix(rng);
    const double n1 = schatten_norm(m, Schatten::one);
    const double n2 = schatten_norm(m, Schatten::two);
    const double ni = schatten_norm(m, Schatten::inf);
    EXPECT_LE(ni, n2 * (1 + 1e-15));
    EXPECT_LE(n2, n1 * (1 + 1e-15));
    EXPECT_LE(n1, std::sqrt(2.0) * n2 * (1 + 1e-15));
    EXPECT_NEAR(n2 * n2, m.frobenius_sq(), 1e-13 * m.frobenius_sq());
  }
}

TEST(SchattenNorm, NumericOrder) {
  const ComplexMatrix2 m = ComplexMatrix2::diag(3.0, -4.0);
  EXPECT_DOUBLE_EQ(schatten_norm(m, 1.0), 7.0);
  EXPECT_DOUBLE_EQ(schatten_norm(m, 2.0), 5.0);
  EXPECT_DOUBLE_EQ(schatten_norm(m, std::numeric_limits<double>::infinity()), 4.0);
  EXPECT_THROW(schatten_norm(m, 3.0), InputError);
  EXPECT_EQ(schatten_norm(ComplexMatrix2::zero(), 1.0), 0.0);
}

TEST(TraceDistance, Endpoints) {
  EXPECT_DOUBLE_EQ(trace_distance_measure(DensityMatrix2::excited(), DensityMatrix2::excited()), 1.0);
  EXPECT_DOUBLE_EQ(trace_distance_measure(DensityMatrix2::excited(), DensityMatrix2::ground()), 0.0);
  // |+> and |-> are orthogonal.
  EXPECT_NEAR(trace_distance_measure(DensityMatrix2::from_populations(0.5, 0.5),
                                     DensityMatrix2::from_populations(0.5, -0.5)),
              0.0, 1e-15);
}

TEST(TraceDistance, DeficitSurvivesTinyDifferences) {
  const auto a = DensityMatrix2::diagonal(0.5);
  const ComplexMatrix2 diff = ComplexMatrix2::diag(-1e-20, 1e-20);
  EXPECT_DOUBLE_EQ(trace_distance_deficit(diff), 1e-40);
  EXPECT_EQ(trace_distance_measure(a, a), 1.0);
}

TEST(TraceDistance, DiagonalStates) {
  // For diagonal states ||a - b||_1 = 2 |p - q|.
  const double p = 0.8, q = 0.35;
  EXPECT_NEAR(trace_distance_deficit(DensityMatrix2::diagonal(p), DensityMatrix2::diagonal(q)),
              (p - q) * (p - q), 1e-16);
}
