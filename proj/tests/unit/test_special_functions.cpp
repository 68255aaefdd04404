// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "kerrcrit/special_functions.hpp"

using namespace kerrcrit;

namespace
{

// exp(a - b) compared to an expected complex ratio, modulo 2 pi branches.
void expect_log_ratio(Complex log_num, Complex log_den, Complex ratio, double tol)
{
  const Complex got = std::exp(log_num - log_den);
  EXPECT_LT(std::abs(got - ratio), tol * std::abs(ratio)) << got << " vs " << ratio;
}

}  // namespace

TEST(LogGamma, RealAxisMatchesStd)
{
  for (double x : {0.1, 0.5, 1.0, 1.5, 2.0, 3.7, 10.0, 55.5, 170.3, -0.5, -2.25, -7.75})
  {
    EXPECT_NEAR(log_gamma(Complex(x, 0.0)).real(), std::lgamma(x), 1e-12 * std::max(1.0, std::abs(std::lgamma(x))))
        << x;
  }
}

TEST(LogGamma, ModulusOnImaginaryLine)
{
  // |Gamma(1 + i y)|^2 = pi y / sinh(pi y)
  for (double y : {0.3, 1.0, 4.0, 12.0})
  {
    const double expect = 0.5 * std::log(std::numbers::pi * y / std::sinh(std::numbers::pi * y));
    EXPECT_NEAR(log_gamma(Complex(1.0, y)).real(), expect, 1e-12 * std::max(1.0, std::abs(expect)));
  }
}

TEST(LogGamma, RecurrenceOnComplexGrid)
{
  for (double re : {-40.5, -7.3, -0.6, 0.4, 3.0, 25.0, 300.0})
  {
    for (double im : {-20.0, -1.0, 0.25, 5.0, 80.0})
    {
      const Complex z(re, im);
      expect_log_ratio(log_gamma(z + 1.0), log_gamma(z), z, 1e-11);
    }
  }
}

TEST(LogGamma, Reflection)
{
  for (const Complex z : {Complex(0.3, 0.2), Complex(-3.4, 1.5), Complex(2.5, -6.0)})
  {
    const Complex lhs = log_gamma(z) + log_gamma(1.0 - z);
    const Complex rhs = std::log(std::numbers::pi) - log_sin_pi(z);
    expect_log_ratio(lhs, rhs, Complex(1.0, 0.0), 1e-11);
  }
}

TEST(LogSinPi, LargeImaginaryPartStaysFinite)
{
  const Complex z(0.25, 400.0);
  const Complex v = log_sin_pi(z);
  ASSERT_TRUE(std::isfinite(v.real()));
  // |sin(pi z)| ~ exp(pi |y|) / 2
  EXPECT_NEAR(v.real(), std::numbers::pi * 400.0 - std::log(2.0), 1e-9);
}

TEST(LogPochhammer, AgreesWithDirectProduct)
{
  for (const Complex x : {Complex(-8.0, -2.0), Complex(0.5, 0.5), Complex(-3.3, 0.1), Complex(12.0, -40.0)})
  {
    for (int n : {0, 1, 5, 30, 64, 65, 120})
    {
      Complex log_prod(0.0, 0.0);
      Complex prod(1.0, 0.0);
      for (int k = 0; k < n; ++k)
      {
        prod *= x + static_cast<double>(k);
        if (std::abs(prod) > 1e100 || std::abs(prod) < 1e-100)
        {
          log_prod += std::log(prod);
          prod = 1.0;
        }
      }
      log_prod += std::log(prod);
      expect_log_ratio(log_pochhammer(x, n), log_prod, Complex(1.0, 0.0), 1e-10);
    }
  }
}
