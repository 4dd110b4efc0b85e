#include <cmath>

#include <gtest/gtest.h>

#include "qslkit/model.hpp"
#include "qslkit/volterra.hpp"

using namespace qslkit;

namespace {

double max_error(const ModelParams& p, double t_max, double step) {
  const SampledSeries s = oracle_amplitude(p, t_max, step);
  double worst = 0.0;
  for (std::size_t k = 0; k < s.values.size(); ++k)
    worst = std::max(worst, std::abs(s.values[k] - amplitude(p, s.time(k)).c));
  return worst;
}

}  // namespace

TEST(HistoryWeights, IntegrateCubicsExactly) {
  for (std::size_t n = 1; n <= 12; ++n) {
    const double h = 1.0 / static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t j = 0; j <= n; ++j) {
      const double x = static_cast<double>(j) * h;
      acc += detail::history_weight(n, j) * (n == 1 ? x : x * x * x);
    }
    EXPECT_NEAR(h * acc, n == 1 ? 0.5 : 0.25, 1e-14) << "n=" << n;
  }
}

TEST(Oracle, GridAndStartValue) {
  const SampledSeries s = oracle_amplitude(ModelParams(5, 50), 0.1, 1e-3);
  ASSERT_EQ(s.values.size(), 101u);
  EXPECT_EQ(s.values[0], Complex(1.0));
  EXPECT_DOUBLE_EQ(s.time(100), 0.1);
}

TEST(Oracle, RefusesCoarseSteps) {
  EXPECT_THROW(oracle_amplitude(ModelParams(5, 50), 1.0, 0.01), InputError);
  EXPECT_THROW(oracle_amplitude(ModelParams(5, 50), 1.0, 0.0), InputError);
  EXPECT_THROW(oracle_amplitude(ModelParams(5, 50), 1e-5, 1e-4), InputError);
}

TEST(Oracle, FourthOrderConvergence) {
  const ModelParams p(500.0, 50.0, 200.0);
  const double coarse = max_error(p, 0.5, 4e-4);
  const double fine = max_error(p, 0.5, 2e-4);
  const double order = std::log2(coarse / fine);
  EXPECT_GT(order, 3.6);
  EXPECT_LT(order, 4.5);
}

TEST(Oracle, AgreesWithClosedForm) {
  for (double g : {0.1, 10.0})
    for (double d : {0.0, 6.0}) EXPECT_LT(max_error(ModelParams(g * 50, 50, d * 50), 0.3, 1e-4), 1e-6);
}
