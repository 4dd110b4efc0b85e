#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "qslkit/quad.hpp"

using namespace qslkit;

TEST(Integrate, PolynomialsAreExact) {
  const QuadResult r = integrate([](double t) { return t * t; }, 0.0, 3.0);
  EXPECT_NEAR(r.value, 9.0, 1e-13);
  EXPECT_GT(r.evaluations, 0);
  // GK15 is exact through degree 22.
  EXPECT_NEAR(integrate([](double t) { return std::pow(t, 21); }, 0.0, 1.0).value, 1.0 / 22.0, 1e-14);
}

TEST(Integrate, SmoothTranscendental) {
  EXPECT_NEAR(integrate([](double t) { return std::exp(-t) * std::cos(5 * t); }, 0.0, 10.0).value,
              (1.0 - std::exp(-10.0) * (std::cos(50.0) - 5 * std::sin(50.0))) / 26.0, 1e-12);
}

TEST(Integrate, KinksWithBreakpoints) {
  // int_0^{3 pi} |sin t| dt = 6
  QuadratureSpec spec;
  spec.breakpoints = {std::numbers::pi, 2 * std::numbers::pi};
  const QuadResult r = integrate([](double t) { return std::abs(std::sin(t)); }, 0.0, 3 * std::numbers::pi, spec);
  EXPECT_NEAR(r.value, 6.0, 1e-12);
  const QuadResult blind = integrate([](double t) { return std::abs(std::sin(t)); }, 0.0, 3 * std::numbers::pi);
  EXPECT_NEAR(blind.value, 6.0, 1e-8);
  EXPECT_LT(r.evaluations, blind.evaluations);
}

TEST(Integrate, Additivity) {
  auto f = [](double t) { return 1.0 / (1.0 + 25 * t * t); };
  const double whole = integrate(f, -1.0, 2.0).value;
  const double parts = integrate(f, -1.0, 0.3).value + integrate(f, 0.3, 2.0).value;
  EXPECT_NEAR(whole, parts, 1e-12);
  EXPECT_NEAR(whole, (std::atan(10.0) + std::atan(5.0)) / 5.0, 1e-12);
}

TEST(Integrate, EmptyInterval) { EXPECT_EQ(integrate([](double) { return 1.0; }, 2.0, 2.0).value, 0.0); }

TEST(Integrate, InputErrors) {
  auto one = [](double) { return 1.0; };
  EXPECT_THROW(integrate(one, 1.0, 0.0), InputError);
  QuadratureSpec bad;
  bad.rel_tol = 0.0;
  EXPECT_THROW(integrate(one, 0.0, 1.0, bad), InputError);
  QuadratureSpec outside;
  outside.breakpoints = {2.0};
  EXPECT_THROW(integrate(one, 0.0, 1.0, outside), InputError);
  QuadratureSpec unsorted;
  unsorted.breakpoints = {0.6, 0.3};
  EXPECT_THROW(integrate(one, 0.0, 1.0, unsorted), InputError);
  EXPECT_THROW(integrate([](double t) { return t > 0.5 ? NAN : 1.0; }, 0.0, 1.0), InputError);
}

TEST(Integrate, ReportsNonConvergence) {
  QuadratureSpec spec;
  spec.rel_tol = 1e-14;
  spec.abs_tol = 0.0;
  spec.max_depth = 3;
  try {
    integrate([](double t) { return 1.0 / std::sqrt(t); }, 0.0, 1.0, spec);
    FAIL() << "expected ConvergenceError";
  } catch (const ConvergenceError& e) {
    EXPECT_GT(e.partial_value(), 1.0);
    EXPECT_GT(e.err_estimate(), 0.0);
  }
}

TEST(FindSignChanges, CosineZeros) {
  const auto roots = find_sign_changes([](double t) { return std::cos(t); }, 0.0, 10.0, 200);
  ASSERT_EQ(roots.size(), 3u);
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(roots[k], (k + 0.5) * std::numbers::pi, 1e-10);
}

TEST(FindSignChanges, ExactZeroOnProbe) {
  const auto roots = find_sign_changes([](double t) { return t - 0.5; }, 0.0, 1.0, 3);
  ASSERT_EQ(roots.size(), 1u);
  EXPECT_EQ(roots[0], 0.5);
  EXPECT_THROW(find_sign_changes([](double t) { return t; }, 0.0, 1.0, 1), InputError);
}

TEST(DefaultProbeCount, ScalesWithPeriods) {
  EXPECT_EQ(default_probe_count(0.0, 1.0), 64);
  EXPECT_GE(default_probe_count(2 * std::numbers::pi * 10, 1.0), 640);
}
