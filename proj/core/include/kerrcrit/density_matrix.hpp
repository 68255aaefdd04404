// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>

#include "kerrcrit/model.hpp"

namespace kerrcrit
{

struct StateValidity
{
  double hermiticity_error = 0.0;  // max |rho - rho^dag|
  double trace_error = 0.0;        // |tr rho - 1|
  double min_eigenvalue = 0.0;

  bool ok(double herm_tol = 1e-10, double trace_tol = 1e-10, double eig_tol = 1e-8) const
  {
    return hermiticity_error < herm_tol && trace_error < trace_tol && min_eigenvalue > -eig_tol;
  }
};

// Density matrix in the truncated Fock basis. Construction does not enforce
// the physical invariants (intermediate states of an integrator need not be
// exactly Hermitian); use validity() to check them and hermitized() to
// project back.
class DensityMatrix
{
public:
  DensityMatrix() = default;
  explicit DensityMatrix(Eigen::MatrixXcd entries);

  static DensityMatrix fock(int cutoff, int k);
  static DensityMatrix vacuum(int cutoff) { return fock(cutoff, 0); }
  // Coherent state |alpha><alpha| truncated to the cutoff and renormalized.
  static DensityMatrix coherent(int cutoff, Complex alpha);

  int cutoff() const { return static_cast<int>(entries_.rows()) - 1; }
  Eigen::Index dim() const { return entries_.rows(); }
  const Eigen::MatrixXcd &entries() const { return entries_; }
  Complex operator()(Eigen::Index m, Eigen::Index n) const { return entries_(m, n); }

  Complex trace() const { return entries_.trace(); }
  // (rho + rho^dag) / 2 normalized to unit trace.
  DensityMatrix hermitized() const;
  StateValidity validity() const;

  // Fock-level populations rho_kk.
  Eigen::VectorXd populations() const;

  // <a^dag^m a^n> = tr(rho a^dag^m a^n).
  Complex moment(int m, int n) const;

private:
  Eigen::MatrixXcd entries_;
};

}  // namespace kerrcrit
