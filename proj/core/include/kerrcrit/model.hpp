// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <complex>

#include <Eigen/Dense>

namespace kerrcrit
{

using Complex = std::complex<double>;

// Physical inputs of the driven-dissipative Kerr resonator in the frame
// rotating at the drive frequency. All rates and frequencies are in units of
// gamma. The bare nonlinearity and drive follow from the rescaled ones and the
// size parameter N as U = u_tilde / N and F = sqrt(N) * f_tilde.
struct ModelParams
{
  double delta = 0.0;    // detuning omega_p - omega_c
  double u_tilde = 0.0;  // rescaled Kerr nonlinearity
  double f_tilde = 0.0;  // rescaled drive amplitude (real, >= 0)
  double gamma = 1.0;    // dissipation rate
  double n_scale = 1.0;  // thermodynamic size parameter N

  double bare_u() const { return u_tilde / n_scale; }
  double bare_f() const { return std::sqrt(n_scale) * f_tilde; }

  // Throws InvalidParameter on gamma <= 0, n_scale <= 0, f_tilde < 0 or
  // non-finite fields.
  void validate() const;

  ModelParams with_drive(double f) const
  {
    ModelParams p = *this;
    p.f_tilde = f;
    return p;
  }
  ModelParams with_size(double n) const
  {
    ModelParams p = *this;
    p.n_scale = n;
    return p;
  }
};

// Dense operator on the Fock space {|0>, ..., |cutoff>}.
struct FockOperator
{
  int cutoff = 0;
  Eigen::MatrixXcd entries;

  Eigen::Index dim() const { return entries.rows(); }
  FockOperator adjoint() const { return {cutoff, entries.adjoint()}; }
};

FockOperator annihilation_op(int cutoff);
FockOperator number_op(int cutoff);

// H = -delta a^dag a + (U/2) a^dag a^dag a a + F (a^dag + a).
FockOperator hamiltonian(const ModelParams &params, int cutoff);

}  // namespace kerrcrit
