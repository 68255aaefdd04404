// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/regression.hpp"

#include <cmath>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

LinearFit linear_fit(const std::vector<double> &x, const std::vector<double> &y, const std::vector<double> &weights)
{
  const std::size_t n = x.size();
  if (y.size() != n || (!weights.empty() && weights.size() != n))
  {
    throw DimensionMismatch("linear_fit inputs differ in length");
  }
  if (n < 2)
  {
    throw DegenerateFit("linear fit needs at least two points");
  }
  auto w = [&](std::size_t i) { return weights.empty() ? 1.0 : weights[i]; };

  double sw = 0.0, sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    if (!(w(i) > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i]))
    {
      throw DegenerateFit("linear fit needs finite data and positive weights");
    }
    sw += w(i);
    sx += w(i) * x[i];
    sy += w(i) * y[i];
  }
  const double xm = sx / sw;
  const double ym = sy / sw;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i)
  {
    const double dx = x[i] - xm;
    const double dy = y[i] - ym;
    sxx += w(i) * dx * dx;
    sxy += w(i) * dx * dy;
    syy += w(i) * dy * dy;
  }
  if (!(sxx > 0.0))
  {
    throw DegenerateFit("linear fit needs spread in the abscissa");
  }

  LinearFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = ym - fit.slope * xm;
  double ss_res = 0.0;
  fit.residuals.resize(n);
  for (std::size_t i = 0; i < n; ++i)
  {
    fit.residuals[i] = y[i] - (fit.intercept + fit.slope * x[i]);
    ss_res += w(i) * fit.residuals[i] * fit.residuals[i];
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  const double sigma2 = n > 2 ? ss_res / static_cast<double>(n - 2) : 0.0;
  fit.slope_se = std::sqrt(sigma2 / sxx);
  fit.intercept_se = std::sqrt(sigma2 * (1.0 / sw + xm * xm / sxx));
  fit.covariance = -xm * sigma2 / sxx;
  return fit;
}

}  // namespace kerrcrit
