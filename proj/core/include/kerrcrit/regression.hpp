// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <vector>

namespace kerrcrit
{

struct LinearFit
{
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  double covariance = 0.0;  // cov(slope, intercept)
  double r2 = 0.0;
  std::size_t points = 0;
  std::vector<double> residuals;
};

// Weighted least squares y = intercept + slope * x. Empty weights mean
// uniform weights. Standard errors use the residual variance scaled by
// n - 2 degrees of freedom. Throws DegenerateFit with fewer than two
// points or no spread in x.
LinearFit linear_fit(const std::vector<double> &x, const std::vector<double> &y,
                     const std::vector<double> &weights = {});

}  // namespace kerrcrit
