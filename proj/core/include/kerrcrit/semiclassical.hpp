// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "kerrcrit/model.hpp"

namespace kerrcrit
{

struct SemiclassicalRoot
{
  Complex alpha;        // rescaled field alpha / sqrt(N)
  double n_sc = 0.0;    // |alpha|^2
  bool stable = false;  // both linear-response rates have negative real part
  std::array<Complex, 2> lambda_lr{};
  double residual = 0.0;
};

struct BistabilityEdges
{
  double f_minus = 0.0;
  double f_plus = 0.0;
  bool exists = false;
};

// Real roots of n[(Delta - U n)^2 + gamma^2/4] = F^2 in ascending order,
// repeated roots listed once per multiplicity.
std::vector<SemiclassicalRoot> steady_roots(const ModelParams &params);

// Largest rescaled density among the steady roots.
double max_semiclassical_density(const ModelParams &params);

BistabilityEdges bistability_edges(double delta, double u_tilde, double gamma = 1.0);

// lambda = -gamma/2 +- i sqrt(chi^2 - (U n)^2), chi = 2 U n - Delta. Returns
// a conjugate pair with the Im >= 0 member first when the radicand is
// positive, otherwise two real rates with the larger first.
std::array<Complex, 2> linear_response(double n_sc, const ModelParams &params);
std::array<Complex, 2> linear_response(const SemiclassicalRoot &root, const ModelParams &params);

// Right-hand side of d alpha/dt = -i[(-Delta - i gamma/2 + U|alpha|^2) alpha + F].
Complex meanfield_rhs(Complex alpha, const ModelParams &params);

struct MeanfieldTrajectory
{
  std::vector<double> times;
  std::vector<Complex> alpha;
};

// Fixed-step fourth-order integration. Throws StepTooLarge on blow-up.
MeanfieldTrajectory integrate_meanfield(const ModelParams &params, Complex alpha0, double t_final,
                                        double dt, std::size_t sample_stride = 1);

}  // namespace kerrcrit
