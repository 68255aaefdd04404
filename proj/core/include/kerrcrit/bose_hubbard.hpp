// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "kerrcrit/model.hpp"

namespace kerrcrit
{

// Homogeneously driven Bose-Hubbard model on a periodic hypercubic lattice
// with hopping -J sum_<ij> a_i^dag a_j.
struct BoseHubbardParams
{
  double hopping = 0.0;          // J
  int dimension = 1;             // d
  double sites = 1.0;            // N_sites
  double pump_detuning = 0.0;    // omega_p - omega_c
  double u_tilde = 0.0;
  double f_tilde = 0.0;
  double gamma = 1.0;

  void validate() const;
};

// Band edge offset of the k = 0 mode: omega_0 = omega_c - 2 d J.
double k0_band_offset(const BoseHubbardParams &bh);

// Single-mode Kerr parameters of the driven k = 0 mode, with
// Delta_eff = (omega_p - omega_c) + 2 d J and N = N_sites.
ModelParams k0_reduce(const BoseHubbardParams &bh);

}  // namespace kerrcrit
