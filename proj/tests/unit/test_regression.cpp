// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "kerrcrit/errors.hpp"
#include "kerrcrit/regression.hpp"

using namespace kerrcrit;

TEST(LinearFit, ExactLine)
{
  const std::vector<double> x = {0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> y;
  for (double v : x)
  {
    y.push_back(-1.5 * v + 0.25);
  }
  const LinearFit f = linear_fit(x, y);
  EXPECT_NEAR(f.slope, -1.5, 1e-14);
  EXPECT_NEAR(f.intercept, 0.25, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-14);
  EXPECT_NEAR(f.slope_se, 0.0, 1e-12);
  EXPECT_EQ(f.points, 5u);
  ASSERT_EQ(f.residuals.size(), 5u);
}

TEST(LinearFit, StandardErrorsMatchTextbookFormula)
{
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::vector<double> x, y;
  for (int k = 0; k < 40; ++k)
  {
    x.push_back(0.1 * k);
    y.push_back(2.0 * x.back() - 1.0 + noise(rng));
  }
  const LinearFit f = linear_fit(x, y);
  double mx = 0.0, my = 0.0;
  for (int k = 0; k < 40; ++k)
  {
    mx += x[k] / 40.0;
    my += y[k] / 40.0;
  }
  double sxx = 0.0, sxy = 0.0;
  for (int k = 0; k < 40; ++k)
  {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  const double slope = sxy / sxx;
  const double icpt = my - slope * mx;
  double rss = 0.0;
  for (int k = 0; k < 40; ++k)
  {
    const double r = y[k] - slope * x[k] - icpt;
    rss += r * r;
  }
  const double s2 = rss / 38.0;
  EXPECT_NEAR(f.slope, slope, 1e-12);
  EXPECT_NEAR(f.intercept, icpt, 1e-12);
  EXPECT_NEAR(f.slope_se, std::sqrt(s2 / sxx), 1e-12);
  EXPECT_NEAR(f.intercept_se, std::sqrt(s2 * (1.0 / 40.0 + mx * mx / sxx)), 1e-12);
  EXPECT_NEAR(f.covariance, -mx * s2 / sxx, 1e-12);
}

TEST(LinearFit, WeightsSelectPoints)
{
  const std::vector<double> x = {0.0, 1.0, 2.0, 3.0};
  const std::vector<double> y = {0.0, 1.0, 2.0, 100.0};
  const LinearFit f = linear_fit(x, y, {1.0, 1.0, 1.0, 1e-30});
  EXPECT_NEAR(f.slope, 1.0, 1e-9);
  EXPECT_NEAR(f.intercept, 0.0, 1e-9);
}

TEST(LinearFit, DegenerateInputThrows)
{
  EXPECT_THROW(linear_fit({1.0}, {2.0}), DegenerateFit);
  EXPECT_THROW(linear_fit({1.0, 1.0, 1.0}, {2.0, 3.0, 4.0}), DegenerateFit);
  EXPECT_THROW(linear_fit({1.0, 2.0}, {2.0}), DimensionMismatch);
  EXPECT_THROW(linear_fit({1.0, 2.0, std::nan("")}, {2.0, 3.0, 4.0}), DegenerateFit);
}
