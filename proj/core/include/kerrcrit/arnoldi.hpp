// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>

#include <Eigen/Dense>

namespace kerrcrit
{

// out = A * in. `out` is pre-sized by the caller.
using LinearOperator = std::function<void(const Eigen::VectorXcd &in, Eigen::VectorXcd &out)>;

struct ArnoldiOptions
{
  int nev = 12;           // wanted eigenvalues of largest magnitude
  int ncv = 40;           // Krylov subspace size
  double tol = 1e-11;     // Ritz residual relative to |theta|
  int max_restarts = 300;
  std::uint64_t seed = 0x6b657272ULL;
};

struct ArnoldiResult
{
  Eigen::VectorXcd values;   // sorted by decreasing magnitude
  Eigen::MatrixXcd vectors;  // unit-norm Ritz vectors
  Eigen::VectorXd residuals; // estimated ||A v - theta v||
  int converged = 0;         // leading values that met the tolerance
  int restarts = 0;
  int matvecs = 0;
};

// Implicitly restarted Arnoldi iteration with exact shifts for the nev
// eigenvalues of largest magnitude of a complex operator of size n.
ArnoldiResult arnoldi_largest(const LinearOperator &op, Eigen::Index n, const ArnoldiOptions &options = {});

}  // namespace kerrcrit
