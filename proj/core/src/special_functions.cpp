// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#include "kerrcrit/special_functions.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "kerrcrit/errors.hpp"

namespace kerrcrit
{

namespace
{

// Lanczos coefficients for g = 7, n = 9.
constexpr double kLanczosG = 7.0;
constexpr std::array<double, 9> kLanczos = {
  0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
  771.32342877765313,    -176.61502916214059,   12.507343278686905,
  -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7,
};

Complex log_gamma_right(Complex z)
{
  // Valid for Re z >= 1/2.
  const Complex zm = z - 1.0;
  Complex series = kLanczos[0];
  for (std::size_t i = 1; i < kLanczos.size(); ++i)
  {
    series += kLanczos[i] / (zm + static_cast<double>(i));
  }
  const Complex t = zm + kLanczosG + 0.5;
  return 0.5 * std::log(2.0 * std::numbers::pi) + (zm + 0.5) * std::log(t) - t + std::log(series);
}

}  // namespace

Complex log_sin_pi(Complex z)
{
  const double pi = std::numbers::pi;
  const Complex I(0.0, 1.0);
  const double y = z.imag();
  if (std::abs(y) < 1.0)
  {
    return std::log(std::sin(pi * z));
  }
  // sin(pi z) = e^{-i pi z} (e^{2 i pi z} - 1) / (2i) for Im z > 0 and the
  // mirrored factorization below, so only O(1) quantities are exponentiated.
  if (y > 0.0)
  {
    return -I * pi * z + std::log(std::exp(2.0 * I * pi * z) - 1.0) - std::log(2.0 * I);
  }
  return I * pi * z + std::log(1.0 - std::exp(-2.0 * I * pi * z)) - std::log(2.0 * I);
}

Complex log_gamma(Complex z)
{
  if (z.real() >= 0.5)
  {
    return log_gamma_right(z);
  }
  if (z.imag() == 0.0 && z.real() == std::floor(z.real()))
  {
    throw InvalidParameter("log_gamma evaluated at a pole");
  }
  // Reflection: Gamma(z) Gamma(1 - z) = pi / sin(pi z).
  return std::log(std::numbers::pi) - log_sin_pi(z) - log_gamma_right(1.0 - z);
}

Complex log_pochhammer(Complex x, int n)
{
  if (n < 0)
  {
    throw InvalidParameter("log_pochhammer needs n >= 0");
  }
  if (n <= 64)
  {
    // The direct product is exact up to rounding and avoids the
    // cancellation of two large log-gamma values.
    Complex acc = 0.0;
    Complex prod = 1.0;
    for (int k = 0; k < n; ++k)
    {
      prod *= x + static_cast<double>(k);
      if (std::abs(prod) > 1e150 || std::abs(prod) < 1e-150)
      {
        acc += std::log(prod);
        prod = 1.0;
      }
    }
    return acc + std::log(prod);
  }
  return log_gamma(x + static_cast<double>(n)) - log_gamma(x);
}

}  // namespace kerrcrit
