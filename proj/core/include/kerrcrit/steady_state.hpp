// Copyright The kerrcrit Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <memory>
#include <string_view>

#include <Eigen/Sparse>

#include "kerrcrit/density_matrix.hpp"
#include "kerrcrit/liouvillian.hpp"
#include "kerrcrit/model.hpp"

namespace kerrcrit
{

// Factorization of L with its first row, the (0, 0) population equation,
// replaced by the trace functional. The same factors give the steady state
// and solutions of L x = b on the trace-free subspace. The Superoperator
// must outlive the solver.
class ConstrainedSolver
{
public:
  explicit ConstrainedSolver(const Superoperator &L);
  ~ConstrainedSolver();
  ConstrainedSolver(ConstrainedSolver &&) noexcept;
  ConstrainedSolver &operator=(ConstrainedSolver &&) noexcept;

  const Superoperator &liouvillian() const { return *L_; }

  // Hermitized, unit-trace kernel of L.
  const DensityMatrix &steady_state() const { return rho_; }
  const Eigen::VectorXcd &steady_vector() const { return rho_vec_; }
  // ||L vec(rho)||_2 of the returned state.
  double residual() const { return residual_; }

  // Returns x with L x = b and tr(x) = 0. b must be trace free; its
  // (0, 0) component is not read.
  Eigen::VectorXcd solve_traceless(const Eigen::VectorXcd &b) const;

private:
  Eigen::VectorXcd solve_refined(const Eigen::VectorXcd &rhs) const;

  using ColMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int>;
  struct Factor;

  const Superoperator *L_;
  ColMatrix constrained_;
  std::unique_ptr<Factor> factor_;
  DensityMatrix rho_;
  Eigen::VectorXcd rho_vec_;
  double residual_ = 0.0;
};

// Throws SingularSystem when the constrained system cannot be solved to
// ||L vec(rho)|| < 1e-10 ||L||_F, which happens for degenerate kernels.
DensityMatrix steady_state_numeric(const Superoperator &L);

// Steady-state <a^dag^m a^n> from the closed-form solution of the Kerr
// resonator, with
//   c = (2/U)(-Delta - i gamma/2),  eps = -2F/U,  z = 2|eps|^2,
//   <a^dag^m a^n> = eps^n conj(eps)^m / ((c)_n (c*)_m) * F(c+n, c*+m, z) / F(c, c*, z),
//   F(x, y, z) = sum_k Gamma(x)Gamma(y) / (Gamma(x+k)Gamma(y+k)) z^k / k!.
// Throws SeriesDivergence if 10^4 terms do not reach a relative tail of
// 1e-14.
Complex analytic_moment(int m, int n, const ModelParams &params);

enum class ObservableSource
{
  numeric,
  analytic,
};

std::string_view to_string(ObservableSource source);

struct Observables
{
  double n = 0.0;           // <a^dag a>
  double n_rescaled = 0.0;  // n / N
  double g2 = 0.0;          // <a^dag a^dag a a> / n^2, NaN when n < 1e-12
  ObservableSource source = ObservableSource::numeric;
};

Observables observables(const DensityMatrix &rho, double n_scale);
Observables observables(const ModelParams &params);

}  // namespace kerrcrit
