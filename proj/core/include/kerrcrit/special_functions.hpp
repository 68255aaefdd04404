// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kerrcrit/model.hpp"

namespace kerrcrit
{

// log Gamma(z) for complex z away from the poles. The imaginary part is
// determined only modulo 2*pi; use it inside exp() or in differences.
Complex log_gamma(Complex z);

// log sin(pi z), finite for large |Im z| where sin itself overflows.
Complex log_sin_pi(Complex z);

// log of the rising factorial (x)_n = Gamma(x + n) / Gamma(x).
Complex log_pochhammer(Complex x, int n);

}  // namespace kerrcrit
